// SPDX-License-Identifier: Apache-2.0
#include "singmin/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace singmin {

namespace {

constexpr double kSafety = 0.9;  // chosen value <= 0.9 x binding bound

Real log_safety() { return log(Real(1) / kSafety); }

void push_cert(std::vector<Certificate>& certs, const std::string& name,
               int stage, const Real& lhs_log, const Real& rhs_log,
               const std::string& note = "") {
  Certificate c;
  c.name = name;
  c.stage = stage;
  c.margin_log = to_double(rhs_log - lhs_log);
  c.pass = lhs_log < rhs_log;
  c.note = note;
  certs.push_back(c);
}

void push_cert_plain(std::vector<Certificate>& certs, const std::string& name,
                     int stage, const Real& lhs, const Real& rhs,
                     const std::string& note = "") {
  Certificate c;
  c.name = name;
  c.stage = stage;
  c.pass = lhs < rhs;
  c.margin_log = (lhs > 0 && rhs > 0) ? to_double(log(rhs) - log(lhs))
                                      : to_double(rhs - lhs);
  c.note = note;
  certs.push_back(c);
}

// Sampled sup of 2 sum_i |base''(t - x_i)| over t in [-T,T] at distance
// >= sigma from every x_i, i < n.
Real sampled_K_sup(const std::vector<Real>& anchors, int n, const Real& sigma,
                   const Real& T, int grid) {
  auto value_at = [&](const Real& t) -> Real {
    Real s(0);
    for (int i = 0; i < n; i++) {
      Real d = abs(t - anchors[i]);
      if (d < sigma) return Real(-1);  // outside the admissible set
      s += abs(base_d2_exact(t - anchors[i]));
    }
    return 2 * s;
  };
  Real sup(0);
  for (int j = 0; j <= grid; j++) {
    Real t = -T + 2 * T * j / grid;
    Real v = value_at(t);
    if (v > sup) sup = v;
  }
  // |base''| peaks at the closest admissible approach to an anchor; probe
  // the sigma-circle boundaries directly and slightly outside.
  for (int i = 0; i < n; i++) {
    for (int side = -1; side <= 1; side += 2) {
      for (int k = 0; k <= 32; k++) {
        Real t = anchors[i] + side * sigma * (1 + Real(k) / 32);
        if (t < -T || t > T) continue;
        Real v = value_at(t);
        if (v > sup) sup = v;
      }
    }
  }
  return sup;
}

}  // namespace

bool Schedule::all_certificates_pass() const {
  return std::all_of(certificates.begin(), certificates.end(),
                     [](const Certificate& c) { return c.pass; });
}

std::vector<Real> dyadic_anchors(int count) {
  Real T = domain_half_width();
  std::vector<Real> a;
  a.push_back(Real(0));
  for (int level = 1; static_cast<int>(a.size()) < count; level++) {
    for (int k = 1; k < (1 << level) && static_cast<int>(a.size()) < count;
         k += 2) {
      a.push_back(T * k / (1 << level));
      if (static_cast<int>(a.size()) < count)
        a.push_back(-T * k / (1 << level));
    }
  }
  return a;
}

Real sup_s_psi_bound(const Real& lambda) {
  // |s psi(s)| <= 402/loglog(1/(5|s|)) + |s|(3 + 4|base''(s)|); both pieces
  // are nondecreasing in |s| on (0, 1/(5e)), so the endpoint dominates.
  Real inner = lambda - log(Real(5));
  if (inner <= 1) throw std::domain_error("sup_s_psi_bound: T too large");
  Real term1 = 402 / log(inner);
  Real l2 = log(lambda);
  Real P = lambda * l2;
  Real term2 = 4 * (1 + (2 + l2) / P) / P;
  // 3|s| with |s| = exp(-lambda); clamp the exponent so the bound stays
  // representable and sound for astronomically large lambda.
  Real lam_c = lambda < 100000 ? lambda : Real(100000);
  return term1 + term2 + 3 * exp(-lam_c);
}

namespace {

// Smallest lambda with sup_s_psi_bound(lambda) <= target (bound decreasing
// in lambda).  Bisection in log(lambda).
Real solve_T3_lambda(const Real& target, const Real& lambda_floor) {
  Real lo = log(max(lambda_floor, Real(10)));
  Real hi = lo + 1;
  while (sup_s_psi_bound(exp(hi)) > target) hi += 1;
  for (int it = 0; it < 400; it++) {
    Real mid = (lo + hi) / 2;
    if (sup_s_psi_bound(exp(mid)) > target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < Real(1e-60)) break;
  }
  return exp(hi);
}

}  // namespace

Schedule build_schedule(const std::vector<Real>& anchors, int depth) {
  Real T = domain_half_width();
  if (anchors.empty() || anchors[0] != 0)
    throw std::invalid_argument("anchors must start with x_0 = 0");
  for (size_t i = 0; i < anchors.size(); i++) {
    if (abs(anchors[i]) >= T)
      throw std::invalid_argument("anchor outside (-T, T)");
    for (size_t j = 0; j < i; j++)
      if (anchors[i] == anchors[j])
        throw std::invalid_argument("duplicate anchor");
  }
  int A = static_cast<int>(anchors.size()) - 1;
  if (depth < 0 || depth > A)
    throw std::invalid_argument("depth out of range for anchor list");

  Schedule s;
  s.domain_T = T;
  s.C = constant_C();
  s.anchors = anchors;
  s.depth = depth;
  s.rows.resize(A + 1);
  auto& certs = s.certificates;

  // sigma, K, T, eps
  for (int n = 0; n <= A; n++) {
    ScheduleRow& row = s.rows[n];
    row.n = n;
    row.x = anchors[n];
    row.eps = ldexp(Real(1) - 1 / euler_e(), -n);
    if (n == 0) {
      row.K = 1;
      row.T = LogMag::from_real(T);
      continue;
    }
    Real sigma = abs(anchors[0] - anchors[n]);
    for (int i = 1; i < n; i++) sigma = min(sigma, abs(anchors[i] - anchors[n]));
    sigma /= 2;
    row.sigma = sigma;

    Real ksup = sampled_K_sup(anchors, n, sigma, T, 20000);
    row.K = max(1 + s.rows[n - 1].K, Real(1.1) * ksup);
    push_cert_plain(certs, "Kn2", n, 1 + s.rows[n - 1].K,
                    row.K + rounding_eps(), "K_n >= 1 + K_{n-1}");
    push_cert_plain(certs, "Kn", n, ksup, row.K + rounding_eps(),
                    "sampled sup of 2 sum |base_i''| off sigma-balls");

    // T_n = 0.9 x min(T1, T2, T4, T3 bounds); T3 binds from stage 1 on.
    Real target3 = ldexp(Real(1), -n) / 5;
    Real lambda_floor = max(-log(sigma), Real(4));
    Real lam3 = solve_T3_lambda(target3, lambda_floor);
    Real lamT = s.rows[n - 1].T.log_value();  // log T_{n-1}
    Real lam = max(max(-log(sigma), -lamT + log(Real(2))), log(row.K));
    lam = max(lam, lam3) + log_safety();
    row.T = LogMag::from_log(-lam);

    push_cert(certs, "T1", n, row.T.log_value(), log(sigma), "T_n < sigma_n");
    push_cert(certs, "T2", n, row.T.log_value(),
              s.rows[n - 1].T.log_value() - log(Real(2)), "T_n < T_{n-1}/2");
    push_cert_plain(certs, "T3", n, sup_s_psi_bound(lam), target3,
                    "sup_{Y_n} |(t-x_n) psi_n| < 2^{-n}/5");
    push_cert(certs, "T4", n, row.T.log_value(), -log(row.K),
              "T_n < 1/K_n");
  }

  // m_n, G_n, M_n for rows that have a successor T
  for (int n = 0; n < A; n++) {
    ScheduleRow& row = s.rows[n];
    Real lamT1 = -s.rows[n + 1].T.log_value();  // log(1/T_{n+1})
    Real ln2 = log(Real(2));
    Real m_min = (2 * lamT1 + log(Real(256))) / ln2;
    Real m = ceil(max(Real(n + 1), m_min)) + 1;
    row.m_count = m;
    push_cert(certs, "mn", n, -m * ln2, -2 * lamT1 - log(Real(256)),
              "2^{-m_n} < T_{n+1}^2/256");
    push_cert_plain(certs, "mn_gt_n", n, Real(n), m, "m_n > n");

    // Equal-radius open cover of every available anchor; total measure set
    // to half the allowed bound.
    int covered = A + 1;
    if (m < covered) covered = static_cast<int>(to_double(m)) + 1;
    row.g_count = covered;
    LogMag measure = LogMag::from_log(-2 * lamT1 - log(32 * s.C));
    row.g_measure = measure;
    row.g_radius = LogMag::from_log(measure.log_value() - log(Real(2 * covered)));
    push_cert(certs, "Fnmeas", n, measure.log_value(),
              -2 * lamT1 - log(16 * s.C), "meas(G_n) <= T_{n+1}^2/(16C)");

    // M_n >= sum_i max{psi_i(t), psi_i(x_i + T_i)} off G_n.  Off the cover,
    // t keeps distance >= g_radius from every anchor, and psi's majorant is
    // decreasing in distance, so the radius value dominates each psi_i(t).
    LogMag psi_at_radius = psi_logmag(*row.g_radius, PsiPart::both);
    LogMag sum = LogMag::zero();
    for (int i = 0; i < covered; i++) {
      LogMag at_Ti = psi_logmag(s.rows[i].T, PsiPart::both);
      sum = add(sum, psi_at_radius > at_Ti ? psi_at_radius : at_Ti);
    }
    LogMag M = scale(sum, Real(1.1));
    row.M_log = M.log_value();
    push_cert(certs, "Mn", n, sum.log_value(), M.log_value() + rounding_eps(),
              "majorant sum off G_n <= M_n");
  }

  // R_n
  for (int n = 0; n <= A; n++) {
    ScheduleRow& row = s.rows[n];
    if (n == 0) {
      row.R = row.T;
      continue;
    }
    Real lam = -row.T.log_value();  // R_n <= T_n
    lam = max(lam, -s.rows[n - 1].R.log_value() + log(Real(2)));  // R2
    // R1: 1/(loglog(1/R) log(1/R)) < eps_n/2.  Find the requirement by a
    // short increasing search; non-binding once R3 kicks in.
    Real lam1(16);
    while (1 / (lam1 * log(lam1)) >= row.eps / 2) lam1 *= 2;
    lam = max(lam, lam1);
    if (!s.rows[n - 1].M_log)
      throw std::logic_error("R_n needs M_{n-1}: anchor list too short");
    Real lam3 = n * log(Real(2)) + 3 * (-row.T.log_value()) - log(row.eps) +
                log(Real(128 * 25)) + *s.rows[n - 1].M_log;
    lam = max(lam, lam3) + log_safety();
    row.R = LogMag::from_log(-lam);

    Real l2R = log(lam);
    push_cert_plain(certs, "R1", n, 1 / (l2R * lam), row.eps / 2,
                    "1/(loglog(1/R_n) log(1/R_n)) < eps_n/2");
    push_cert(certs, "R2", n, row.R.log_value(),
              s.rows[n - 1].R.log_value() - log(Real(2)), "R_n < R_{n-1}/2");
    push_cert(certs, "R3", n, row.R.log_value(), -lam3,
              "R_n < 2^{-n} T_n^3 eps_n / (3200 M_{n-1})");
    push_cert(certs, "R_le_T", n, row.R.log_value(),
              row.T.log_value() + rounding_eps(), "R_n <= T_n");
  }

  // eps identity (recompute from scratch)
  for (int n = 0; n <= A; n++) {
    Certificate c;
    c.name = "eps_identity";
    c.stage = n;
    Real ref = ldexp(Real(1) - exp(Real(-1)), -n);
    c.pass = abs(s.rows[n].eps - ref) <= rounding_eps() * 4;
    c.margin_log = to_double(-log(abs(s.rows[n].eps - ref) + rounding_eps()));
    c.note = "eps_n = 2^{-n}(1 - 1/e)";
    s.certificates.push_back(c);
  }

  return s;
}

std::vector<Certificate> verify_schedule(const Schedule& s,
                                         unsigned extra_bits) {
  PrecisionGuard guard(extra_bits);
  std::vector<Certificate> certs;
  int A = s.top_row();
  Real T = domain_half_width();

  for (int n = 1; n <= A; n++) {
    const ScheduleRow& row = s.rows[n];
    // sigma recomputed from the anchors
    Real sigma = abs(s.anchors[0] - s.anchors[n]);
    for (int i = 1; i < n; i++)
      sigma = min(sigma, abs(s.anchors[i] - s.anchors[n]));
    sigma /= 2;
    push_cert_plain(certs, "sigma_identity", n, abs(*row.sigma - sigma),
                    rounding_eps() * 8 + Real(1e-70), "sigma matches anchors");

    push_cert(certs, "T1", n, row.T.log_value(), log(sigma));
    push_cert(certs, "T2", n, row.T.log_value(),
              s.rows[n - 1].T.log_value() - log(Real(2)));
    push_cert_plain(certs, "T3", n, sup_s_psi_bound(-row.T.log_value()),
                    ldexp(Real(1), -n) / 5);
    push_cert(certs, "T4", n, row.T.log_value(), -log(row.K));
    push_cert_plain(certs, "Kn2", n, 1 + s.rows[n - 1].K,
                    row.K * (1 + Real(1e-30)));
    Real ksup = sampled_K_sup(s.anchors, n, sigma, T, 30011);
    push_cert_plain(certs, "Kn", n, ksup, row.K);

    Real lam = -row.R.log_value();
    push_cert_plain(certs, "R1", n, 1 / (log(lam) * lam), row.eps / 2);
    push_cert(certs, "R2", n, row.R.log_value(),
              s.rows[n - 1].R.log_value() - log(Real(2)));
    if (s.rows[n - 1].M_log) {
      Real lam3 = n * log(Real(2)) + 3 * (-row.T.log_value()) -
                  log(row.eps) + log(Real(3200)) + *s.rows[n - 1].M_log;
      push_cert(certs, "R3", n, row.R.log_value(), -lam3);
    }
    push_cert(certs, "R_le_T", n, row.R.log_value(),
              row.T.log_value() * (1 - Real(1e-30)));
  }

  for (int n = 0; n < A; n++) {
    const ScheduleRow& row = s.rows[n];
    if (!row.m_count) continue;
    Real lamT1 = -s.rows[n + 1].T.log_value();
    push_cert(certs, "mn", n, -*row.m_count * log(Real(2)),
              -2 * lamT1 - log(Real(256)));
    push_cert_plain(certs, "mn_gt_n", n, Real(n), *row.m_count);
    push_cert(certs, "Fnmeas", n, row.g_measure->log_value(),
              -2 * lamT1 - log(16 * s.C));
    // cover membership: every anchor is the center of a radius > 0 interval
    Certificate cov;
    cov.name = "G_covers";
    cov.stage = n;
    int expected = A + 1;
    if (*row.m_count < A) expected = static_cast<int>(to_double(*row.m_count)) + 1;
    cov.pass = *row.g_count == expected && !row.g_radius->is_zero();
    cov.margin_log = 0;
    cov.note = "G_n covers every available anchor x_0..x_{min(m_n, A)}";
    certs.push_back(cov);

    // M_n: recompute the majorant sum, then spot-check with samples: plain
    // t away from the anchors, plus the cover-boundary offsets.
    LogMag psi_at_radius = psi_logmag(*row.g_radius, PsiPart::both);
    LogMag sum = LogMag::zero();
    for (int i = 0; i < *row.g_count; i++) {
      LogMag at_Ti = psi_logmag(s.rows[i].T, PsiPart::both);
      sum = add(sum, psi_at_radius > at_Ti ? psi_at_radius : at_Ti);
    }
    push_cert(certs, "Mn", n, sum.log_value(), *row.M_log);
    LogMag sample_max = LogMag::zero();
    for (int j = 1; j < 64; j++) {
      Real t = -T + 2 * T * j / 64;
      bool at_anchor = false;
      LogMag tot = LogMag::zero();
      for (int i = 0; i < *row.g_count; i++) {
        Real d = abs(t - s.anchors[i]);
        if (d == 0) { at_anchor = true; break; }
        LogMag di = LogMag::from_real(d);
        LogMag psi_t = psi_logmag(di, PsiPart::both);
        LogMag at_Ti = psi_logmag(s.rows[i].T, PsiPart::both);
        tot = add(tot, psi_t > at_Ti ? psi_t : at_Ti);
      }
      if (!at_anchor && tot > sample_max) sample_max = tot;
    }
    push_cert(certs, "Mn_sampled", n, sample_max.log_value(), *row.M_log,
              "sampled off-G sums stay below M_n");
  }

  for (int n = 0; n <= A; n++) {
    Certificate c;
    c.name = "eps_identity";
    c.stage = n;
    Real ref = ldexp(Real(1) - 1 / euler_e(), -n);
    c.pass = abs(s.rows[n].eps - ref) <= rounding_eps() * 16;
    c.margin_log = 0;
    certs.push_back(c);
  }
  return certs;
}

}  // namespace singmin
