// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "singmin/weight.hpp"

namespace singmin {

// Piecewise-linear competitor on a node grid over [-T, T].
struct TrialFunction {
  std::vector<double> nodes;   // strictly increasing; ends at -T, T
  std::vector<double> values;
  std::string label;

  size_t elements() const { return nodes.size() - 1; }
  double value_at(double t) const;
  double slope(size_t element) const;
  bool boundary_pinned(const Construction& c, double tol = 1e-12) const;

  static TrialFunction proxy_interpolant(const Construction& c, int M);
  static TrialFunction boundary_chord(const Construction& c, int M);
};

struct QuadOptions {
  int max_depth = 26;
  double tol = 1e-9;           // absolute budget for the whole interval
  double sliver_cutoff = 1e-30;  // analytic bound inside this anchor radius
};

// Decomposed error budget of one functional evaluation.
struct FunctionalValue {
  double value = 0;
  double quad_error = 0;
  double weight_tail_error = 0;
  double singular_interval_bound = 0;
  double total_error() const {
    return quad_error + weight_tail_error + singular_interval_bound;
  }
};

GuardedValue lagrangian(const WeightContext& w, const Real& t, const Real& y,
                        const Real& p, int N);

// integral of (u')^2 + phi(t, u - w_depth) dt; the kinetic part is summed
// exactly from the nodal slopes, only the weight part is quadrature.
FunctionalValue functional(const WeightContext& w, const TrialFunction& u,
                           int N, const QuadOptions& opts,
                           int w_depth = -1 /* default: N */);

// L(w_N proxy): integral of (w')^2; phi term vanishes identically on the
// graph of w, so no weight tail enters.
FunctionalValue functional_of_proxy(const WeightContext& w, int N,
                                    const QuadOptions& opts);

struct JumpReport {
  int n = 0;
  double jump = 0;            // computed |(L(u)-L(w)) - (L_n(u)-L_n(w_n))|
  double combined_error = 0;  // quadrature + tail budgets of the four terms
  double bound_log = 0;       // log of T_{n+1}^2/2
  bool pass = false;
  double margin_log = 0;
  FunctionalValue Lu, Lw, Lnu, Lnwn;
};

// Lemma-style approximation jump audit: the four functionals are evaluated
// on identical deterministic subdivisions, so the plain-scale parts cancel
// exactly and the sub-plain discrepancy is controlled by the bound.
JumpReport approx_jump_check(const WeightContext& w, const TrialFunction& u,
                             int n, int N, const QuadOptions& opts);

// Elementary kinetic inequality on a shared grid:
//   sum ((u')^2 - (v')^2) h  >=  sum 2 (u' - v') v' h,
// returns {lhs, rhs}; equality iff the slopes agree elementwise.
std::pair<double, double> kinetic_gap_identity(const TrialFunction& u,
                                               const TrialFunction& v);

// Chord replacement of u on [a, b] (the Holder replacement trick).
TrialFunction chord_replace(const TrialFunction& u, double a, double b);

}  // namespace singmin
