// SPDX-License-Identifier: Apache-2.0
#include "singmin/wlimit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace singmin {

namespace {

LogVal taylor_tail(const StageLocal& st, const LogVal& s, LogMag* err) {
  // w_{n-1}(x_n + s) - beta = m s + w2 s^2/2 + w3 s^3/6 + O(s^4)
  LogVal s2 = s * s, s3 = s2 * s;
  if (err)
    *err = add(*err, scale(pow_int(s.mag(), 4), st.w4b / 24));
  return scale(s, st.m) + scale(s2, st.w2 / 2) + scale(s3, st.w3 / 6);
}

Real taylor_slope_tiny_scale(const StageLocal&) { return Real(0); }

int side_of(const Offset& s) { return s.sign(); }

}  // namespace

LogVal stage_tail_scaled_base(const StageLocal& st, const Offset& s) {
  return scale(eval_base_logval(s), st.alpha);
}

LogVal stage_tail_affine(const StageLocal& st, const Offset& s, LogMag* err) {
  // beta + m s + Delta_side + c_side, with
  // Delta_l = w(x-R)-beta+mR = +w2 R^2/2 - w3 R^3/6 + O(R^4)
  // Delta_r = w(x+R)-beta-mR = +w2 R^2/2 + w3 R^3/6 + O(R^4)
  LogVal R2(1, pow_int(st.Rn, 2));
  LogVal R3(1, pow_int(st.Rn, 3));
  LogVal sv = s.signed_magnitude();
  LogVal delta_part = scale(R2, st.w2 / 2);
  LogVal r3 = scale(R3, st.w3 / 6);
  const CutoffSide& cs = side_of(s) < 0 ? st.left : st.right;
  LogVal Delta = side_of(s) < 0 ? delta_part - r3 : delta_part + r3;
  if (err) {
    *err = add(*err, scale(pow_int(st.Rn, 4), st.w4b / 24));
    *err = add(*err, cs.err);
  }
  return scale(sv, st.m) + Delta + cs.c;
}

LogVal stage_g(const StageLocal& st, const Offset& s) {
  LogVal sv = s.signed_magnitude();
  LogVal Tv(1, st.Tn);
  LogMag Wm = sub_nonneg(scale(st.Tn, Real(1) / 2), st.Rn);
  LogVal Wv(1, Wm);
  LogMag half_T = scale(st.Tn, Real(1) / 2);
  LogMag quarter_T = scale(st.Tn, Real(1) / 4);
  LogMag a = s.magnitude();
  if (side_of(s) < 0) {
    if (a <= st.Rn) return st.left.delta;
    if (a <= half_T) {
      // g = delta (s + T/2)/W, zero at -T/2, delta at -R
      return st.left.delta * (sv + LogVal(1, half_T)) / Wv;
    }
    if (a <= add(half_T, quarter_T)) {
      // falling flank of the d-triangle: g = -4d (s + T/2)/T
      return scale(st.left.d * (sv + LogVal(1, half_T)), Real(-4)) / Tv;
    }
    // rising flank from (-T, 0) to (-3T/4, d): g = 4d (s + T)/T
    return scale(st.left.d * (sv + Tv), Real(4)) / Tv;
  }
  if (a <= st.Rn) return st.right.delta;
  if (a <= half_T) {
    // g = delta (T/2 - s)/W
    return st.right.delta * (LogVal(1, half_T) - sv) / Wv;
  }
  if (a <= add(half_T, quarter_T)) {
    // g = -4 d (s - T/2)/T
    return scale(st.right.d * (sv - LogVal(1, half_T)), Real(-4)) / Tv;
  }
  // g = -d (T - s)/(T/4)
  return scale(st.right.d * (Tv - sv), Real(-4)) / Tv;
}

LogVal stage_chi(const StageLocal& st, const Offset& s) {
  LogVal sv = s.signed_magnitude();
  LogVal Tv(1, st.Tn);
  LogMag Wm = sub_nonneg(scale(st.Tn, Real(1) / 2), st.Rn);
  LogMag half_T = scale(st.Tn, Real(1) / 2);
  LogMag quarter_T = scale(st.Tn, Real(1) / 4);
  LogMag a = s.magnitude();
  if (side_of(s) < 0) {
    const LogVal& d = st.left.d;
    const LogVal& del = st.left.delta;
    LogVal dT4 = scale(d * Tv, Real(1) / 4);
    if (a <= half_T) {
      // chi = d T/4 + delta (s + T/2)^2 / (2W)
      LogVal u = sv + LogVal(1, half_T);
      return dT4 + scale(del * u * u, Real(1) / 2) / LogVal(1, Wm);
    }
    if (a <= add(half_T, quarter_T)) {
      // chi = d T/4 - 2 d (s + T/2)^2 / T
      LogVal u = sv + LogVal(1, half_T);
      return dT4 - scale(d * u * u, Real(2)) / Tv;
    }
    // chi = 2 d (s + T)^2 / T
    LogVal u = sv + Tv;
    return scale(d * u * u, Real(2)) / Tv;
  }
  const LogVal& d = st.right.d;
  const LogVal& del = st.right.delta;
  LogVal dT4 = scale(d * Tv, Real(1) / 4);
  if (a <= half_T) {
    // chi = d T/4 - delta (T/2 - s)^2 / (2W)
    LogVal u = LogVal(1, half_T) - sv;
    return dT4 - scale(del * u * u, Real(1) / 2) / LogVal(1, Wm);
  }
  if (a <= add(half_T, quarter_T)) {
    // chi = d T/8 + 2 d (T^2/16 - (s - T/2)^2)/T
    LogVal u = sv - LogVal(1, half_T);
    LogVal t216(1, scale(pow_int(st.Tn, 2), Real(1) / 16));
    return scale(d * Tv, Real(1) / 8) + scale(d * (t216 - u * u), Real(2)) / Tv;
  }
  // chi = 2 d (T - s)^2 / T
  LogVal u = Tv - sv;
  return scale(d * u * u, Real(2)) / Tv;
}

LogVal stage_tail_cutoff(const StageLocal& st, const Offset& s, LogMag* err) {
  LogVal bg = taylor_tail(st, s.signed_magnitude(), err);
  return bg + stage_chi(st, s);
}

LogVal stage_tail(const StageLocal& st, const Offset& s, LogMag* err) {
  if (s.is_zero()) return LogVal::zero();
  LogMag a = s.magnitude();
  if (st.trivial || a <= st.tau.magnitude())
    return stage_tail_scaled_base(st, s);
  if (a < st.Rn) return stage_tail_affine(st, s, err);
  if (a <= st.Tn) return stage_tail_cutoff(st, s, err);
  return taylor_tail(st, s.signed_magnitude(), err);
}

Real stage_slope_scaled_base(const StageLocal& st, const Offset& s) {
  if (s.is_zero())
    throw std::domain_error("stage slope: undefined at the anchor");
  return st.alpha * base_d1_theta(s.theta());
}

AnchoredSlope stage_slope(const StageLocal& st, const Offset& s) {
  AnchoredSlope out;
  out.err = LogMag::zero();
  if (s.is_zero())
    throw std::domain_error("stage slope: undefined at the anchor");
  LogMag a = s.magnitude();
  if (st.trivial || a <= st.tau.magnitude()) {
    out.main = stage_slope_scaled_base(st, s);
    out.tiny = LogVal::zero();
    if (s.is_theta()) out.err = base_d1_corr_bound(s.theta());
    return out;
  }
  if (a < st.Rn) {
    out.main = st.m;
    out.tiny = LogVal::zero();
    return out;
  }
  // cutoff or beyond: background slope Taylor + g
  LogVal sv = s.signed_magnitude();
  out.main = st.m;
  out.tiny = scale(sv, st.w2) + scale(sv * sv, st.w3 / 2);
  out.err = scale(pow_int(a, 3), st.w4b / 6);
  if (a <= st.Tn) out.tiny = out.tiny + stage_g(st, s);
  (void)taylor_slope_tiny_scale(st);
  return out;
}

namespace {

// Index of the stage (<= depth) whose window contains the plain point t,
// or -1.  Windows are pairwise disjoint by the build certificates.
int covering_stage(const Construction& c, const Real& t, int depth) {
  for (int k = std::min<int>(depth, c.depth()); k >= 1; k--) {
    Real s = t - c.stages[k].x;
    if (s == 0) return k;
    if (LogMag::from_real(abs(s)) <= c.stages[k].Tn) return k;
  }
  return -1;
}

}  // namespace

LogMag limit_tail_bound(const Construction& c, int depth) {
  if (depth + 1 <= c.schedule.top_row())
    return scale(c.schedule.rows[depth + 1].R, Real(20));
  return LogMag::zero();
}

GuardedValue eval_w(const Construction& c, const Real& t, int depth) {
  Real T = c.schedule.domain_T;
  if (t < -T || t > T) throw std::domain_error("eval_w: t outside [-T, T]");
  LogMag tail = limit_tail_bound(c, depth);
  int k = covering_stage(c, t, depth);
  if (k < 0) {
    GuardedValue g = guarded_from_real(eval_base_exact(t));
    g.abs_error += tail.to_double() + 5e-324;
    return g;
  }
  const StageLocal& st = c.stages[k];
  LogMag err = LogMag::zero();
  LogVal tv = stage_tail(st, Offset::from_real(t - st.x), &err);
  GuardedValue g = guarded_from_real(st.beta + tv.to_real(), err.to_real());
  g.abs_error += tail.to_double() + 5e-324;
  return g;
}

GuardedValue eval_w_prime(const Construction& c, const Real& t, int depth) {
  Real T = c.schedule.domain_T;
  if (t < -T || t > T)
    throw std::domain_error("eval_w_prime: t outside [-T, T]");
  for (int i = 0; i <= std::min<int>(depth, c.depth()); i++)
    if (t == c.schedule.anchors[i])
      throw std::domain_error("eval_w_prime: derivative undefined at anchor");
  int k = covering_stage(c, t, depth);
  if (k < 0) return guarded_from_real(eval_base_d1_exact(t));
  const StageLocal& st = c.stages[k];
  AnchoredSlope sl = stage_slope(st, Offset::from_real(t - st.x));
  return guarded_from_real(sl.main + sl.tiny.to_real(), sl.err.to_real());
}

namespace {

void check_anchor_window(const Construction& c, int anchor, const Offset& s) {
  // the offset must stay clear of every other anchor's modification zone
  for (size_t j = 0; j < c.schedule.anchors.size(); j++) {
    if (static_cast<int>(j) == anchor) continue;
    Real gap = abs(c.schedule.anchors[anchor] - c.schedule.anchors[j]);
    if (!(s.magnitude() < scale(LogMag::from_real(gap), Real(1) / 2)))
      throw std::domain_error("anchored evaluation: offset reaches halfway "
                              "to another anchor");
  }
}

}  // namespace

AnchoredValue eval_w_anchored(const Construction& c, int anchor,
                              const Offset& s, int depth) {
  if (anchor < 0 || anchor >= static_cast<int>(c.schedule.anchors.size()))
    throw std::domain_error("eval_w_anchored: no such anchor");
  check_anchor_window(c, anchor, s);
  AnchoredValue out;
  out.err = LogMag::zero();
  const Real& x = c.schedule.anchors[anchor];
  out.head = eval_base_exact(x);  // anchor values are fixed across stages
  if (s.is_zero()) {
    out.tail = LogVal::zero();
    return out;
  }
  if (anchor <= std::min<int>(depth, c.depth()) ) {
    out.tail = stage_tail(c.stages[anchor], s, &out.err);
    return out;
  }
  // stage not built at this depth: the profile is smooth here
  StageLocal bgst;
  bgst.m = eval_base_d1_exact(x);
  bgst.w2 = base_d2_exact(x);
  bgst.w3 = base_d3_exact(x);
  bgst.w4b = base_d4_bound(abs(x) / 2);
  out.tail = taylor_tail(bgst, s.signed_magnitude(), &out.err);
  return out;
}

AnchoredSlope eval_w_prime_anchored(const Construction& c, int anchor,
                                    const Offset& s, int depth) {
  if (anchor < 0 || anchor >= static_cast<int>(c.schedule.anchors.size()))
    throw std::domain_error("eval_w_prime_anchored: no such anchor");
  check_anchor_window(c, anchor, s);
  const Real& x = c.schedule.anchors[anchor];
  if (anchor <= std::min<int>(depth, c.depth()))
    return stage_slope(c.stages[anchor], s);
  AnchoredSlope out;
  LogVal sv = s.signed_magnitude();
  out.main = eval_base_d1_exact(x);
  out.tiny = scale(sv, base_d2_exact(x)) +
             scale(sv * sv, base_d3_exact(x) / 2);
  out.err = scale(pow_int(s.magnitude(), 3), base_d4_bound(abs(x) / 2) / 6);
  return out;
}

LogVal anchored_quotient(const Construction& c, int anchor, const Offset& s,
                         int depth, LogMag* err) {
  AnchoredValue v = eval_w_anchored(c, anchor, s, depth);
  LogMag e = v.err / s.magnitude();
  if (err) *err = e;
  return v.tail / s.signed_magnitude();
}

std::vector<double> plain_breakpoints(const Construction& c, int depth) {
  std::vector<double> b;
  for (int i = 0; i <= std::min<int>(depth, c.depth()); i++)
    b.push_back(to_double(c.schedule.anchors[i]));
  for (int k = 1; k <= std::min<int>(depth, c.depth()); k++) {
    const StageLocal& st = c.stages[k];
    if (st.Tn.representable() && st.Tn.log_value() > -700) {
      double x = to_double(st.x), Tn = st.Tn.to_double();
      b.push_back(x - Tn);
      b.push_back(x + Tn);
    }
  }
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

double w_proxy_d(const Construction& c, double t) {
  for (int k = 1; k <= c.depth(); k++) {
    double x = to_double(c.stages[k].x);
    if (t == x) break;  // anchor values are the base values
    if (c.stages[k].Tn.log_value() > -700 &&
        std::fabs(t - x) <= c.stages[k].Tn.to_double()) {
      // fixture-scale stage window: defer to the exact channel
      GuardedValue g = eval_w(c, Real(t), c.depth());
      return g.value;
    }
  }
  return base_value_d(t);
}

double w_proxy_prime_d(const Construction& c, double t) {
  for (int k = 1; k <= c.depth(); k++) {
    double x = to_double(c.stages[k].x);
    if (c.stages[k].Tn.log_value() > -700 &&
        std::fabs(t - x) <= c.stages[k].Tn.to_double() && t != x) {
      GuardedValue g = eval_w_prime(c, Real(t), c.depth());
      return g.value;
    }
  }
  return base_d1_d(t);
}

}  // namespace singmin
