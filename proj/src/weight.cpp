// SPDX-License-Identifier: Apache-2.0
#include "singmin/weight.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace singmin {

WeightTables build_weight_tables(const Construction& c) {
  WeightTables w;
  w.stages = c.depth();
  w.C = c.schedule.C;
  int n = w.stages;
  w.cap1.resize(n + 1);
  w.cap2.resize(n + 1);
  w.slope1.resize(n + 1);
  w.slope2.resize(n + 1);
  w.knee.resize(n + 1);
  w.cap_total_d.resize(n + 1);
  for (int i = 0; i <= n; i++) {
    const LogMag& Ti = c.schedule.rows[i].T;
    w.slope1[i] = psi_exact_logmag(Ti, PsiPart::one);
    w.slope2[i] = psi_exact_logmag(Ti, PsiPart::two);
    w.knee[i] = scale(Ti, Real(5));
    w.cap1[i] = (scale(w.slope1[i] * Ti, Real(5))).to_real();
    w.cap2[i] = scale(w.slope2[i] * Ti, Real(5));
    w.cap_total_d[i] = to_double(w.cap1[i]) + w.cap2[i].to_double();
  }
  return w;
}

WeightContext make_weight_context(const Construction& c) {
  WeightContext ctx;
  ctx.cons = &c;
  ctx.tables = build_weight_tables(c);
  return ctx;
}

namespace {

// One translated copy at plain t, split by part.  Handles both the
// inside-Y_i two-regime formula (reachable for i = 0 always, and for
// fixture-scale stages) and the frozen outside extension.
Real phi_tilde_at(const WeightContext& w, int i, const Real& t, const Real& y,
                  PsiPart part) {
  const Real& x = w.cons->schedule.anchors.at(i);
  Real s = t - x;
  LogMag s_mag = LogMag::from_real(abs(s));
  LogMag y_mag = LogMag::from_real(abs(y));
  const LogMag& Ti = w.cons->schedule.rows[i].T;
  if (s_mag <= Ti) {
    // inside Y_i
    if (s == 0) return Real(0);
    LogMag psi_s = psi_exact_logmag(s_mag, part);
    LogMag five_s = scale(s_mag, Real(5));
    LogMag v = (y_mag >= five_s) ? psi_s * five_s : psi_s * y_mag;
    return v.to_real();
  }
  if (y == 0) return Real(0);
  LogMag slope = LogMag::zero();
  if (part == PsiPart::one || part == PsiPart::both)
    slope = add(slope, w.tables.slope1[i]);
  if (part == PsiPart::two || part == PsiPart::both)
    slope = add(slope, w.tables.slope2[i]);
  if (y_mag >= w.tables.knee[i]) {
    Real cap(0);
    if (part == PsiPart::one || part == PsiPart::both) cap += w.tables.cap1[i];
    if (part == PsiPart::two || part == PsiPart::both)
      cap += w.tables.cap2[i].to_real();
    return cap;
  }
  return (slope * y_mag).to_real();
}

}  // namespace

Real phi_tilde(const WeightContext& w, int i, const Real& t, const Real& y,
               PsiPart part) {
  return phi_tilde_at(w, i, t, y, part);
}

GuardedValue phi_part(const WeightContext& w, PsiPart part, const Real& t,
                      const Real& y, int N) {
  Real T = w.cons->schedule.domain_T;
  if (t < -T || t > T) throw std::domain_error("phi: t outside [-T, T]");
  if (N < 0) throw std::domain_error("phi: negative depth");
  int top = std::min<int>(N, w.tables.stages);
  Real total(0);
  for (int i = 0; i <= top; i++) total += phi_tilde_at(w, i, t, y, part);
  GuardedValue g = guarded_from_real(total);
  g.abs_error += std::ldexp(1.0, -N);  // tail of the idealized full sum
  return g;
}

GuardedValue phi(const WeightContext& w, const Real& t, const Real& y, int N) {
  return phi_part(w, PsiPart::both, t, y, N);
}

double LipBound::to_double() const {
  if (!finite) return std::numeric_limits<double>::infinity();
  if (lg > 700) return std::numeric_limits<double>::infinity();
  return std::exp(singmin::to_double(lg));
}

LipBound phi_lipschitz_y(const WeightContext& w, const Real& t, int N) {
  LipBound out;
  int top = std::min<int>(N, w.tables.stages);
  for (int i = 0; i <= top; i++) {
    if (t == w.cons->schedule.anchors[i]) {
      out.finite = false;  // psi_i blows up approaching its own anchor
      return out;
    }
  }
  LogMag sum = LogMag::zero();
  for (int i = 0; i <= top; i++) {
    Real s = abs(t - w.cons->schedule.anchors[i]);
    LogMag psi_t = psi_exact_logmag(LogMag::from_real(s), PsiPart::both);
    LogMag frozen = add(w.tables.slope1[i], w.tables.slope2[i]);
    sum = add(sum, psi_t > frozen ? psi_t : frozen);
  }
  out.finite = true;
  out.lg = sum.log_value();
  return out;
}

double phi_d(const WeightContext& w, double t, double y, int N) {
  // copy 0: the two-regime formula, written through |y|/|t| so nothing
  // overflows as t -> 0
  double total = 0.0;
  if (t != 0.0) {
    double a = std::fabs(t);
    double l1 = -std::log(a);
    double l2 = std::log(l1);
    double llog5 = std::log(l1 - std::log(5.0));  // loglog(1/(5a))
    double th = std::log(l2);
    double P = l1 * l2;
    double B = std::cos(th) + (std::sin(th) + (1 + l2) * std::cos(th)) / P;
    double t_d2 = std::fabs(B) / P;  // |t * base''(t)|
    double ay = std::fabs(y);
    if (ay >= 5 * a) {
      total += 2010.0 / llog5 + 5 * a * 3 + 20 * t_d2;
    } else {
      double r = ay / a;
      total += r * 402.0 / llog5 + ay * 3 + 4 * r * t_d2;
    }
  }
  int top = std::min<int>(N, w.tables.stages);
  if (y != 0.0) {
    for (int i = 1; i <= top; i++) {
      if (t == to_double(w.cons->schedule.anchors[i])) continue;
      total += w.tables.cap_total_d[i];
    }
  }
  return total;
}

}  // namespace singmin
