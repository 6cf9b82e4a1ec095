// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "singmin/stage.hpp"

namespace singmin {

// Value of the stage-n profile near its own anchor, split into the plain
// head w_n(x_n) and a tiny tail that survives only in log scale.
struct AnchoredValue {
  Real head;
  LogVal tail;
  LogMag err;
};

struct AnchoredSlope {
  Real main;
  LogVal tiny;
  LogMag err;
};

// Branch evaluators for one stage, in anchor-relative offset s.
// scaled_base: |s| <= tau; affine: tau < |s| < R; cutoff: R <= |s| <= T.
LogVal stage_tail_scaled_base(const StageLocal& st, const Offset& s);
LogVal stage_tail_affine(const StageLocal& st, const Offset& s, LogMag* err);
LogVal stage_tail_cutoff(const StageLocal& st, const Offset& s, LogMag* err);
// dispatching on |s|; also answers |s| > T_n with the background Taylor
LogVal stage_tail(const StageLocal& st, const Offset& s, LogMag* err);

Real stage_slope_scaled_base(const StageLocal& st, const Offset& s);
AnchoredSlope stage_slope(const StageLocal& st, const Offset& s);

// g and chi of the cut-off construction at offset s (left: s in [-T,-R],
// right: s in [R, T]).
LogVal stage_g(const StageLocal& st, const Offset& s);
LogVal stage_chi(const StageLocal& st, const Offset& s);

// --- whole-profile evaluation ---

// w_depth at the plain point t; abs_error carries rounding plus the
// certified distance 20 R_{depth+1} to the limit.
GuardedValue eval_w(const Construction& c, const Real& t, int depth);
// derivative; throws std::domain_error at anchors
GuardedValue eval_w_prime(const Construction& c, const Real& t, int depth);

// Anchored channel: w_depth(x_k + s) for offsets far below plain range.
AnchoredValue eval_w_anchored(const Construction& c, int anchor,
                              const Offset& s, int depth);
AnchoredSlope eval_w_prime_anchored(const Construction& c, int anchor,
                                    const Offset& s, int depth);

// Difference quotient (w_depth(x_k + s) - w_depth(x_k)) / s, exact in the
// scaled-base range where it collapses to alpha_k sin(theta).
LogVal anchored_quotient(const Construction& c, int anchor, const Offset& s,
                         int depth, LogMag* err);

// 20 R_{depth+1} when a row depth+1 exists; exact zero otherwise (the
// construction then is its own limit).
LogMag limit_tail_bound(const Construction& c, int depth);

// Plain breakpoints a quadrature must split at (anchors; fixture-scale
// stage boundaries when they are representable).
std::vector<double> plain_breakpoints(const Construction& c, int depth);

// fast double path used by the functional/solver hot loop
double w_proxy_d(const Construction& c, double t);
double w_proxy_prime_d(const Construction& c, double t);

}  // namespace singmin
