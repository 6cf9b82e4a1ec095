// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "singmin/offset.hpp"
#include "singmin/schedule.hpp"

namespace singmin {

// Cut-off data for one side of a stage insertion.  All three scalars are
// below R_n in size; g is the piecewise-affine derivative displacement and
// chi its integral.
struct CutoffSide {
  LogVal delta;  // m - w_{n-1}'(x_n -+ R_n)
  LogVal c;      // value correction carried by chi at the R_n breakpoint
  LogVal d;      // inner g-breakpoint value
  LogMag err;    // Taylor remainder absorbed into delta/c/d
};

// One stage of the construction: on [x_n - tau, x_n + tau] the profile is
// alpha * base(t - x_n) + beta; affine with slope m out to R_n; then the
// previous profile displaced by chi out to T_n.
struct StageLocal {
  int n = 0;
  Real x;
  Real alpha;
  Real beta;   // w_{n-1}(x_n)
  Real m;      // w_{n-1}'(x_n)  (unused for the trivial stage 0)
  Real w2, w3;         // background second/third derivative at x_n
  Real w4_bound;       // Taylor remainder scale
  Offset tau;
  LogMag Tn, Rn;
  CutoffSide left, right;
  bool trivial = false;  // stage 0: scaled base across all of [-T, T]
};

struct Construction {
  Schedule schedule;
  std::vector<StageLocal> stages;  // 0 .. schedule.depth
  std::vector<Certificate> stage_certificates;

  int depth() const { return static_cast<int>(stages.size()) - 1; }
  bool all_certificates_pass() const;
};

struct AlphaTau {
  Real alpha;
  Offset tau;
  Real residual;       // |alpha * slope(theta_tau) - m| as evaluated
  Real rho;            // min(|A|, |B|) rounded to working precision
  LogMag rho_excess;   // bound on rho - 1 when it is below precision
  Real theta_tau;
};

// Slope-matching data of the Lemma 2.1 proof: A/B are the sup/inf of the
// base slope over (0, R_n]; for |m| <= 1 no scaling is needed.
AlphaTau find_alpha_tau(const Schedule& sched, int n, const Real& m);

// Smallest theta >= theta_min where the theta-domain base slope equals
// target.  Handles targets slightly beyond +-1 (crest overshoot) and the
// tangency case where the overshoot sits below working precision.
Real solve_slope_theta(const Real& target, const Real& theta_min);

// theta of the first crest of the given sign at or after theta_min.
Real first_crest_theta(int sign, const Real& theta_min);

StageLocal build_stage(const Construction& so_far, int n,
                       std::vector<Certificate>* certs);

// Builds schedule and stages together.  Anchor list must have at least
// depth+1 entries; the default layout passes depth+2 so the limit tail
// bound 20 R_{depth+1} is available.
Construction build_construction(const std::vector<Real>& anchors, int depth);
Construction build_construction_default(int depth);

// --- segment view (ordered partition of [-T, T]) ---

enum class SegmentKind { inherited, cutoff_adjusted, affine, scaled_base };

struct Segment {
  SegmentKind kind;
  int stage;          // stage whose data defines the piece
  int from_stage;     // for inherited: the background stage
  // endpoints as anchor-relative data; lo/hi are offsets from the anchor
  // (whole-domain pieces use anchor index -1 and plain endpoints)
  int anchor;
  LogVal lo, hi;
};

std::vector<Segment> stage_segments(const Construction& c, int n);

}  // namespace singmin
