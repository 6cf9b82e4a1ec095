// SPDX-License-Identifier: Apache-2.0
#include "singmin/stage.hpp"

#include <cmath>
#include <stdexcept>

namespace singmin {

namespace {

Real slope_theta(const Real& th) { return base_d1_theta(th); }

// Max of sign * slope_theta over [lo, hi] by golden-section; the slope is
// unimodal on any window this file passes in.
Real golden_max(int sign, const Real& lo_in, const Real& hi_in, Real* at) {
  auto g = [&](const Real& th) { return sign * slope_theta(th); };
  Real inv_phi = (sqrt(Real(5)) - 1) / 2;
  Real lo = lo_in, hi = hi_in;
  Real a = hi - inv_phi * (hi - lo);
  Real b = lo + inv_phi * (hi - lo);
  Real fa = g(a), fb = g(b);
  for (int i = 0; i < 500 && hi - lo > Real(1e-70); i++) {
    if (fa < fb) {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = g(b);
    } else {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = g(a);
    }
  }
  Real mid = (lo + hi) / 2;
  if (at) *at = mid;
  return g(mid);
}

struct CrestExcess {
  Real theta_at;
  Real excess;          // sup - 1 when representable, else 0
  LogMag excess_bound;  // sound upper bound in every case
};

// sup of sign * slope over [theta_min, inf).  The crest correction decays
// double-exponentially in theta, so only the first matching crest (and the
// boundary segment, when theta_min sits in a crest tail) can carry the sup.
CrestExcess crest_excess(int sign, const Real& theta_min) {
  Real thc = first_crest_theta(sign, theta_min);
  CrestExcess out;
  out.excess_bound = base_d1_corr_bound(theta_min);
  Real expo = thc + exp(thc);
  if (expo > 60000) {  // correction below one ulp of 1
    out.theta_at = thc;
    out.excess = 0;
    return out;
  }
  Real at1, at2;
  Real v1 = golden_max(sign, theta_min,
                       min(theta_min + Real("0.7"), thc + Real("0.7")), &at1);
  Real v2 = golden_max(sign, max(theta_min, thc - Real("0.7")),
                       thc + Real("0.7"), &at2);
  out.theta_at = v1 > v2 ? at1 : at2;
  out.excess = max(v1, v2) - 1;
  if (out.excess < 0) out.excess = Real(0);
  return out;
}

Real bisect_slope(const Real& target, Real lo, Real hi) {
  Real flo = slope_theta(lo) - target;
  if (flo == 0) return lo;
  Real fhi = slope_theta(hi) - target;
  if (fhi == 0) return hi;
  if ((flo > 0) == (fhi > 0))
    throw std::logic_error("bisect_slope: bracket does not straddle target");
  for (int i = 0; i < 500 && hi - lo > Real(1e-72); i++) {
    Real mid = (lo + hi) / 2;
    Real fm = slope_theta(mid) - target;
    if (fm == 0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

}  // namespace

Real first_crest_theta(int sign, const Real& theta_min) {
  Real pi = pi_value();
  Real base = sign > 0 ? pi / 2 : 3 * pi / 2;
  Real k = ceil((theta_min - base) / (2 * pi));
  if (k < 0) k = Real(0);
  Real thc = base + 2 * pi * k;
  while (thc < theta_min) thc += 2 * pi;
  return thc;
}

Real solve_slope_theta(const Real& target, const Real& theta_min) {
  Real at = abs(target);
  if (at < Real("0.9996")) {
    // transversal crossings: a coarse scan over two periods must bracket
    Real step("0.02");
    Real prev = slope_theta(theta_min) - target;
    if (prev == 0) return theta_min;
    Real th = theta_min;
    for (int i = 1; i <= 700; i++) {
      Real next_th = theta_min + step * i;
      Real cur = slope_theta(next_th) - target;
      if (cur == 0) return next_th;
      if ((cur > 0) != (prev > 0)) return bisect_slope(target, th, next_th);
      th = next_th;
      prev = cur;
    }
    throw std::logic_error("solve_slope_theta: no crossing found");
  }
  // near-unit or overshooting target: work around the matching crest
  int sign = target > 0 ? 1 : -1;
  Real thc = first_crest_theta(sign, theta_min);
  auto g = [&](const Real& th) { return sign * slope_theta(th); };
  if (g(thc) == at) return thc;  // tangency at working precision
  Real peak_at;
  Real peak = golden_max(sign, max(theta_min, thc - Real("0.05")),
                         thc + Real("0.05"), &peak_at);
  if (at > 1) {
    if (peak < at)
      throw std::logic_error("solve_slope_theta: target above crest max");
    // smallest root sits on the rising flank between the crest and the peak
    Real lo = max(theta_min, thc);
    if (g(lo) >= at) return lo;
    Real flo = g(lo) - at;
    Real hi = peak_at;
    for (int i = 0; i < 500 && hi - lo > Real(1e-72); i++) {
      Real mid = (lo + hi) / 2;
      Real fm = g(mid) - at;
      if (fm == 0) return mid;
      if ((fm > 0) == (flo > 0))
        lo = mid;
      else
        hi = mid;
    }
    return (lo + hi) / 2;
  }
  // target in [0.9996, 1]: upward crossing before the crest, unless we
  // start beyond it already
  Real lo = max(theta_min, thc - Real("0.3"));
  if (g(lo) < at) {
    Real hi = thc;
    if (g(hi) >= at) {
      Real flo = g(lo) - at;
      for (int i = 0; i < 500 && hi - lo > Real(1e-72); i++) {
        Real mid = (lo + hi) / 2;
        Real fm = g(mid) - at;
        if (fm == 0) return mid;
        if ((fm > 0) == (flo > 0))
          lo = mid;
        else
          hi = mid;
      }
      return (lo + hi) / 2;
    }
    if (peak >= at) {
      Real flo2 = g(thc) - at;
      Real l2 = thc, h2 = peak_at;
      for (int i = 0; i < 500 && h2 - l2 > Real(1e-72); i++) {
        Real mid = (l2 + h2) / 2;
        Real fm = g(mid) - at;
        if (fm == 0) return mid;
        if ((fm > 0) == (flo2 > 0))
          l2 = mid;
        else
          h2 = mid;
      }
      return (l2 + h2) / 2;
    }
    throw std::logic_error("solve_slope_theta: crest never reaches target");
  }
  // already at/above target: first crossing is on the falling flank
  Real hi = max(peak_at, lo) + Real("0.8");
  return bisect_slope(target, max(peak_at, lo), hi);
}

AlphaTau find_alpha_tau(const Schedule& sched, int n, const Real& m) {
  const ScheduleRow& row = sched.rows.at(n);
  Real thR = row.R.theta();
  AlphaTau out;
  if (abs(m) <= 1) {
    out.alpha = 1;
    out.rho = 1;
    out.rho_excess = LogMag::zero();
    out.theta_tau = solve_slope_theta(m, thR);
  } else {
    CrestExcess A = crest_excess(+1, thR);
    CrestExcess B = crest_excess(-1, thR);
    Real exc = min(A.excess, B.excess);
    out.rho = 1 + exc;
    out.rho_excess = A.excess_bound;  // = corr bound at theta(R)
    out.alpha = m / out.rho;
    out.theta_tau = solve_slope_theta(out.rho, thR);
  }
  out.tau = Offset::from_theta(+1, out.theta_tau);
  out.residual = abs(out.alpha * slope_theta(out.theta_tau) - m);
  return out;
}

namespace {

LogVal lv(const Real& x) { return LogVal::from_real(x); }

struct Background {
  Real beta, m, w2, w3, w4b;
};

Background background_at(const Construction& so_far, int n) {
  const Real& x = so_far.schedule.anchors.at(n);
  Background bg;
  bg.beta = eval_base_exact(x);
  bg.m = eval_base_d1_exact(x);
  bg.w2 = base_d2_exact(x);
  bg.w3 = base_d3_exact(x);
  bg.w4b = base_d4_bound(abs(x) / 2);
  return bg;
}

}  // namespace

StageLocal build_stage(const Construction& so_far, int n,
                       std::vector<Certificate>* certs) {
  const Schedule& sched = so_far.schedule;
  const ScheduleRow& row = sched.rows.at(n);
  StageLocal st;
  st.n = n;
  st.x = row.x;
  st.Tn = row.T;
  st.Rn = row.R;
  if (n == 0) {
    st.trivial = true;
    st.alpha = 1;
    st.beta = 0;
    st.m = 0;
    st.w2 = st.w3 = st.w4b = 0;
    st.tau = Offset::from_real(row.T.to_real());
    return st;
  }

  // Prior stages must not reach into this stage's Taylor window.
  for (int j = 1; j < n; j++) {
    Certificate c;
    c.name = "windows_disjoint";
    c.stage = n;
    LogMag gap = LogMag::from_real(abs(row.x - sched.anchors[j]));
    c.pass = add(sched.rows[j].T, row.T) < gap;
    c.margin_log =
        to_double(gap.log_value() - add(sched.rows[j].T, row.T).log_value());
    if (certs) certs->push_back(c);
    if (!c.pass)
      throw std::logic_error("build_stage: stage windows overlap");
  }
  {
    // Taylor window stays on one side of the base-profile singularity
    Certificate c;
    c.name = "taylor_window";
    c.stage = n;
    c.pass = row.T < LogMag::from_real(abs(row.x) / 2);
    c.margin_log = to_double(log(abs(row.x) / 2) - row.T.log_value());
    if (certs) certs->push_back(c);
    if (!c.pass) throw std::logic_error("build_stage: T_n >= |x_n|/2");
  }

  Background bg = background_at(so_far, n);
  st.beta = bg.beta;
  st.m = bg.m;
  st.w2 = bg.w2;
  st.w3 = bg.w3;
  st.w4b = bg.w4b;

  if (certs) {
    Certificate c;
    c.name = "slope_budget";
    c.stage = n;
    c.pass = abs(st.m) < 2 - sched.rows[n - 1].eps;
    c.margin_log = to_double(2 - sched.rows[n - 1].eps - abs(st.m));
    c.note = "|m| < 2 - eps_{n-1}";
    certs->push_back(c);
  }

  AlphaTau at = find_alpha_tau(sched, n, st.m);
  st.alpha = at.alpha;
  st.tau = at.tau;
  if (certs) {
    Certificate c;
    c.name = "alpha_range";
    c.stage = n;
    c.pass = abs(st.alpha) < 2;
    c.margin_log = to_double(2 - abs(st.alpha));
    certs->push_back(c);
    Certificate r;
    r.name = "slope_match";
    r.stage = n;
    r.pass = at.residual < 1e-20;
    r.margin_log = to_double(-log(at.residual + Real(1e-200)));
    r.note = "alpha * base'(tau) = m";
    certs->push_back(r);
    Certificate t;
    t.name = "tau_in_Z";
    t.stage = n;
    t.pass = st.tau.magnitude() <= row.R;
    t.margin_log =
        to_double(row.R.log_value() - st.tau.magnitude().log_value());
    certs->push_back(t);
  }

  // Cut-off scalars from the Taylor expansion of the background plus the
  // exact theta-domain correction; the naive differences would cancel
  // catastrophically at these scales.
  Real th = at.theta_tau;
  Real sth = sin(th), cth = cos(th);
  LogMag corr = base_d1_corr_bound(th);
  // q = m - alpha sin(theta_tau) = -alpha cos(theta_tau) corr + residual
  LogVal q = LogVal(-(st.alpha * cth > 0 ? 1 : -1),
                    scale(corr, abs(st.alpha * cth)));
  if (st.alpha * cth == 0) q = LogVal::zero();
  LogVal R1v(1, row.R);
  LogVal R2v(1, pow_int(row.R, 2));
  LogVal R3v(1, pow_int(row.R, 3));
  LogVal tauv(1, st.tau.magnitude());
  LogMag err_taylor = scale(pow_int(row.R, 3), st.w4b / 6);
  LogMag err_q = scale(st.tau.magnitude(),
                       at.residual + to_double(rounding_eps()) * (1 + abs(st.m)));

  st.left.delta = scale(R1v, st.w2) - scale(R2v, st.w3 / 2);
  st.right.delta = scale(R1v, -st.w2) - scale(R2v, st.w3 / 2);
  st.left.err = add(err_taylor, err_q);
  st.right.err = st.left.err;

  LogVal r2half = scale(R2v, st.w2 / 2);
  LogVal r3sixth = scale(R3v, st.w3 / 6);
  st.left.c = tauv * q - r2half + r3sixth;
  st.right.c = (tauv * q).negated() - r2half - r3sixth;

  LogVal Tv(1, row.T);
  LogMag W = sub_nonneg(scale(row.T, Real(1) / 2), row.R);
  LogVal Wv(1, W);
  st.left.d = scale(st.left.c - scale(st.left.delta, Real(1) / 2) * Wv,
                    Real(4)) /
              Tv;
  st.right.d = scale(st.right.c + scale(st.right.delta, Real(1) / 2) * Wv,
                     Real(4)) /
               Tv;

  if (certs) {
    Real epsn = row.eps;
    LogMag gbound = add(scale(row.R / row.T, Real(24)), scale(row.R, row.K));
    for (int side = 0; side < 2; side++) {
      const CutoffSide& cs = side == 0 ? st.left : st.right;
      const char* tag = side == 0 ? "left" : "right";
      Certificate cd;
      cd.name = std::string("delta_bound_") + tag;
      cd.stage = n;
      cd.pass = cs.delta.mag() <= scale(row.R, row.K);
      cd.margin_log = to_double(scale(row.R, row.K).log_value() -
                                (cs.delta.is_zero()
                                     ? scale(row.R, row.K).log_value() - 1
                                     : cs.delta.mag().log_value()));
      cd.note = "|delta| <= K_n R_n";
      certs->push_back(cd);

      Certificate cc;
      cc.name = std::string("c_bound_") + tag;
      cc.stage = n;
      cc.pass = cs.c.mag() < scale(row.R, Real(6));
      cc.margin_log = to_double(scale(row.R, Real(6)).log_value() -
                                (cs.c.is_zero()
                                     ? scale(row.R, Real(6)).log_value() - 1
                                     : cs.c.mag().log_value()));
      cc.note = "|c| < 6 R_n";
      certs->push_back(cc);

      LogMag gsup = cs.delta.mag() > cs.d.mag() ? cs.delta.mag() : cs.d.mag();
      Certificate cg;
      cg.name = std::string("g_sup_") + tag;
      cg.stage = n;
      cg.pass = gsup <= gbound && gbound < LogMag::from_real(epsn);
      cg.margin_log = to_double(log(epsn) - (gbound.is_zero()
                                                 ? log(epsn) - 1
                                                 : gbound.log_value()));
      cg.note = "||g|| <= 24 R_n/T_n + K_n R_n < eps_n";
      certs->push_back(cg);

      LogMag gslope =
          add(scale(cs.d.mag() / row.T, Real(4)), cs.delta.mag() / W);
      Certificate cp;
      cp.name = std::string("g_slope_") + tag;
      cp.stage = n;
      cp.pass = gslope < LogMag::from_log(-Real(n) * log(Real(2)));
      cp.margin_log = to_double(-Real(n) * log(Real(2)) -
                                (gslope.is_zero() ? -Real(n) * log(Real(2)) - 1
                                                  : gslope.log_value()));
      cp.note = "||g'|| < 2^{-n}";
      certs->push_back(cp);
    }
  }

  return st;
}

bool Construction::all_certificates_pass() const {
  if (!schedule.all_certificates_pass()) return false;
  for (const auto& c : stage_certificates)
    if (!c.pass) return false;
  return true;
}

Construction build_construction(const std::vector<Real>& anchors, int depth) {
  Construction c;
  c.schedule = build_schedule(anchors, depth);
  for (int n = 0; n <= depth; n++)
    c.stages.push_back(build_stage(c, n, &c.stage_certificates));
  return c;
}

Construction build_construction_default(int depth) {
  return build_construction(dyadic_anchors(depth + 2), depth);
}

std::vector<Segment> stage_segments(const Construction& c, int n) {
  const StageLocal& st = c.stages.at(n);
  Real T = c.schedule.domain_T;
  std::vector<Segment> segs;
  auto seg = [&](SegmentKind k, const LogVal& lo, const LogVal& hi) {
    Segment s;
    s.kind = k;
    s.stage = n;
    s.from_stage = n - 1;
    s.anchor = n;
    s.lo = lo;
    s.hi = hi;
    segs.push_back(s);
  };
  if (st.trivial) {
    seg(SegmentKind::scaled_base, lv(-T), lv(T));
    segs[0].anchor = 0;
    return segs;
  }
  LogVal lo_dom = lv(-T - st.x), hi_dom = lv(T - st.x);
  LogVal Tn(1, st.Tn), Rn(1, st.Rn), tau(1, st.tau.magnitude());
  seg(SegmentKind::inherited, lo_dom, Tn.negated());
  seg(SegmentKind::cutoff_adjusted, Tn.negated(), Rn.negated());
  seg(SegmentKind::affine, Rn.negated(), tau.negated());
  seg(SegmentKind::scaled_base, tau.negated(), tau);
  seg(SegmentKind::affine, tau, Rn);
  seg(SegmentKind::cutoff_adjusted, Rn, Tn);
  seg(SegmentKind::inherited, Tn, hi_dom);
  return segs;
}

}  // namespace singmin
