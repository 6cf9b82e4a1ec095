// SPDX-License-Identifier: Apache-2.0
#include "singmin/base_profile.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace singmin {

namespace {

void require_in_domain(const LogMag& mag) {
  // magnitude must be < 1/e for the log chain
  if (!mag.is_zero() && mag.log_value() >= -1)
    throw std::domain_error("base profile: |t| >= 1/e");
}

}  // namespace

TripleLog triple_log_chain(const Real& abs_t) {
  if (abs_t <= 0) throw std::domain_error("triple_log_chain: |t| must be > 0");
  if (abs_t >= exp(Real(-1)))
    throw std::domain_error("triple_log_chain: |t| >= 1/e");
  TripleLog c;
  c.l1 = -log(abs_t);
  c.l2 = log(c.l1);
  c.theta = log(c.l2);
  return c;
}

Real eval_base_exact(const Real& t) {
  if (t == 0) return Real(0);
  TripleLog c = triple_log_chain(abs(t));
  return t * sin(c.theta);
}

Real eval_base_d1_exact(const Real& t) {
  if (t == 0) throw std::domain_error("base': undefined at 0");
  TripleLog c = triple_log_chain(abs(t));
  return sin(c.theta) - cos(c.theta) / (c.l2 * c.l1);
}

// base''(t) = -(1/(t l1 l2)) [cos th + (sin th + (1+l2) cos th)/(l1 l2)],
// extended oddly to t < 0.
Real base_d2_exact(const Real& t) {
  if (t == 0) throw std::domain_error("base'': undefined at 0");
  Real a = abs(t);
  TripleLog c = triple_log_chain(a);
  Real P = c.l1 * c.l2;
  Real s = sin(c.theta), co = cos(c.theta);
  Real B = co + (s + (1 + c.l2) * co) / P;
  Real val = -B / (a * P);
  return t > 0 ? val : -val;
}

Real base_d3_exact(const Real& t) {
  if (t == 0) throw std::domain_error("base''': undefined at 0");
  Real a = abs(t);
  TripleLog c = triple_log_chain(a);
  Real P = c.l1 * c.l2;
  Real Q = c.l2 + 1;
  Real A = 1 / (a * P);
  Real s = sin(c.theta), co = cos(c.theta);
  Real B = co + (s + Q * co) / P;
  Real Ap = (Q - P) / (a * a * P * P);
  Real Bp = s * A +
            ((-co * A - co / (a * c.l1) + Q * s * A) * P + (s + Q * co) * Q / a) /
                (P * P);
  // third derivative is even in t (second is odd)
  return -(Ap * B + A * Bp);
}

Real base_d2_majorant(const Real& abs_t) {
  TripleLog c = triple_log_chain(abs_t);
  Real P = c.l1 * c.l2;
  return (1 + (2 + c.l2) / P) / (abs_t * P);
}

Real base_d4_bound(const Real& abs_t) {
  // Each differentiation of the chain loses at most a factor ~1/t with
  // bounded log corrections; constant validated against finite differences
  // in the test suite.
  TripleLog c = triple_log_chain(abs_t);
  Real P = c.l1 * c.l2;
  return 60 * (1 + (2 + c.l2) / P) / (abs_t * abs_t * abs_t);
}

Real psi_exact(const Real& t, PsiPart part) {
  if (t == 0) return Real(0);  // both parts defined as 0 at 0
  Real a = abs(t);
  Real r(0);
  if (part == PsiPart::one || part == PsiPart::both) {
    Real inner = -log(5 * a);
    if (inner <= 1)
      throw std::domain_error("psi1: 5|t| >= 1/e");
    r += 402 / (a * log(inner));
  }
  if (part == PsiPart::two || part == PsiPart::both)
    r += 3 + 4 * abs(base_d2_exact(a));
  return r;
}

Real base_d1_theta(const Real& theta) {
  Real s = sin(theta);
  Real expo = theta + exp(theta);
  if (expo > 60000) return s;  // correction below one ulp at any sane precision
  return s - cos(theta) * exp(-expo);
}

LogMag base_d1_corr_bound(const Real& theta) {
  return LogMag::from_log(-(theta + exp(theta)));
}

LogMag base_d2_majorant(const LogMag& abs_t) {
  require_in_domain(abs_t);
  if (abs_t.is_zero()) throw std::domain_error("base'': zero magnitude");
  Real l1 = -abs_t.log_value();
  Real l2 = log(l1);
  Real P = l1 * l2;
  // (1/(t P)) (1 + (2+l2)/P)
  return LogMag::from_log(-abs_t.log_value() - log(P) + log1p((2 + l2) / P));
}

LogMag base_d2_abs_logmag(const LogMag& abs_t) {
  require_in_domain(abs_t);
  if (abs_t.is_zero()) throw std::domain_error("base'': zero magnitude");
  if (abs_t.representable() && abs_t.log_value() > -(1 << 22))
    return LogMag::from_real(abs(base_d2_exact(abs_t.to_real())));
  Real th = abs_t.theta();
  Real l2 = exp(th);
  Real l1 = -abs_t.log_value();
  Real P = l1 * l2;
  Real B = cos(th) + (sin(th) + (1 + l2) * cos(th)) / P;
  if (B == 0) return LogMag::zero();
  return LogMag::from_log(log(abs(B)) - abs_t.log_value() - log(P));
}

LogMag psi_exact_logmag(const LogMag& abs_t, PsiPart part) {
  if (abs_t.is_zero()) return LogMag::zero();
  LogMag r = LogMag::zero();
  if (part == PsiPart::one || part == PsiPart::both) {
    Real inner = -abs_t.log_value() - log(Real(5));
    if (inner <= 1) throw std::domain_error("psi1: 5|t| >= 1/e");
    r = add(r, LogMag::from_log(log(Real(402)) - abs_t.log_value() -
                                log(log(inner))));
  }
  if (part == PsiPart::two || part == PsiPart::both)
    r = add(r, add(LogMag::from_real(Real(3)),
                   scale(base_d2_abs_logmag(abs_t), Real(4))));
  return r;
}

LogMag psi_logmag(const LogMag& abs_t, PsiPart part) {
  if (abs_t.is_zero()) return LogMag::zero();
  LogMag r = LogMag::zero();
  if (part == PsiPart::one || part == PsiPart::both) {
    Real inner = -abs_t.log_value() - log(Real(5));  // log(1/(5|t|))
    if (inner <= 1) throw std::domain_error("psi1: 5|t| >= 1/e");
    r = add(r, LogMag::from_log(log(Real(402)) - abs_t.log_value() -
                                log(log(inner))));
  }
  if (part == PsiPart::two || part == PsiPart::both) {
    LogMag two_part = add(LogMag::from_real(Real(3)),
                          scale(base_d2_majorant(abs_t), Real(4)));
    r = add(r, two_part);
  }
  return r;
}

GuardedValue eval_base(const Offset& off) {
  require_in_domain(off.magnitude());
  if (off.is_zero()) return GuardedValue{0.0, 0.0};
  if (!off.is_theta()) return guarded_from_real(eval_base_exact(off.plain_value()));
  // theta form: sign * |t| * sin(theta); the magnitude may underflow, in
  // which case the result is reported as the interval [0, bound].
  LogVal v = eval_base_logval(off);
  GuardedValue g;
  g.value = v.to_double();
  if (g.value == 0.0) {
    g.abs_error = off.magnitude().to_double() + 5e-324;
  } else {
    g.abs_error = std::fabs(g.value) * 1e-15 + 5e-324;
  }
  return g;
}

LogVal eval_base_logval(const Offset& off) {
  require_in_domain(off.magnitude());
  if (off.is_zero()) return LogVal::zero();
  Real s = sin(off.theta());
  if (s == 0) return LogVal::zero();
  return LogVal(off.sign() * (s > 0 ? 1 : -1),
                scale(off.magnitude(), abs(s)));
}

Real eval_base_d1_real(const Offset& off) {
  require_in_domain(off.magnitude());
  if (off.is_zero()) throw std::domain_error("base': undefined at 0");
  if (!off.is_theta()) return eval_base_d1_exact(off.plain_value());
  return base_d1_theta(off.theta());  // even in the offset
}

GuardedValue eval_base_d1(const Offset& off) {
  Real v = eval_base_d1_real(off);
  Real err(0);
  if (off.is_theta()) {
    LogMag corr = base_d1_corr_bound(off.theta());
    err = Real(corr.to_double()) + 1e-300;
  }
  return guarded_from_real(v, err);
}

double eval_base_d2_bound(const Offset& off) {
  require_in_domain(off.magnitude());
  if (off.is_zero()) throw std::domain_error("base'': undefined at 0");
  LogMag b = base_d2_majorant(off.magnitude());
  if (b.log_value() > 700) return std::numeric_limits<double>::infinity();
  return b.to_double();
}

GuardedValue psi(const Offset& off, PsiPart part) {
  if (off.is_zero()) return GuardedValue{0.0, 0.0};
  LogMag mag = off.magnitude();
  if (part != PsiPart::two) {
    if (mag.log_value() + log(Real(5)) >= -1)
      throw std::domain_error("psi: 5|t| >= 1/e");
  } else {
    require_in_domain(mag);
  }
  if (!off.is_theta())
    return guarded_from_real(psi_exact(off.plain_value(), part));
  LogMag v = psi_logmag(mag, part);
  GuardedValue g;
  g.value = v.to_double();  // +inf when far out of range
  g.abs_error = g.value * 1e-12;
  return g;
}

// --- constant C ---

namespace {

// 5|t| psi(t) = 2010 / loglog(1/(5|t|)) + 5|t| (3 + 4|base''(t)|)
Real five_t_psi(const Real& t) {
  if (t == 0) return Real(0);
  return 5 * abs(t) * psi_exact(t, PsiPart::both);
}

}  // namespace

Real constant_C_at_resolution(int uniform_points, int geometric_points,
                              int refine_rounds) {
  Real T = domain_half_width();
  Real sup(0), at(0);
  auto consider = [&](const Real& t) {
    Real v = five_t_psi(t);
    if (v > sup) {
      sup = v;
      at = t;
    }
  };
  for (int i = 1; i <= uniform_points; i++) consider(T * i / uniform_points);
  Real g = T;
  for (int i = 0; i < geometric_points; i++) {
    g /= 2;
    if (g < 1e-300) break;
    consider(g);
  }
  Real window = T / uniform_points;
  for (int r = 0; r < refine_rounds; r++) {
    Real lo = at - window, hi = at + window;
    if (lo < 0) lo = Real(0);
    if (hi > T) hi = T;
    for (int i = 0; i <= 64; i++) consider(lo + (hi - lo) * i / 64);
    window /= 32;
  }
  // Slope of 5|t|psi is bounded by ~3e5 on [T/2, T] where the sup lives;
  // the margin turns the grid sup into an over-approximation.
  Real margin = Real(3e5) * (T / uniform_points) / 2;
  return 1 + sup + margin;
}

Real constant_C() { return constant_C_at_resolution(8192, 2048, 3); }

// --- double fast path ---

double base_value_d(double t) {
  if (t == 0.0) return 0.0;
  double a = std::fabs(t);
  double th = std::log(std::log(-std::log(a)));
  return t * std::sin(th);
}

double base_d1_d(double t) {
  double a = std::fabs(t);
  double l1 = -std::log(a);
  double l2 = std::log(l1);
  double th = std::log(l2);
  return std::sin(th) - std::cos(th) / (l2 * l1);
}

double base_d2_d(double t) {
  double a = std::fabs(t);
  double l1 = -std::log(a);
  double l2 = std::log(l1);
  double th = std::log(l2);
  double P = l1 * l2;
  double B = std::cos(th) + (std::sin(th) + (1 + l2) * std::cos(th)) / P;
  double val = -B / (a * P);
  return t > 0 ? val : -val;
}

double psi_d(double t) {
  double a = std::fabs(t);
  double p1 = 402.0 / (a * std::log(-std::log(5 * a)));
  return p1 + 3.0 + 4.0 * std::fabs(base_d2_d(t));
}

}  // namespace singmin
