// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "singmin/logscale.hpp"
#include "singmin/offset.hpp"
#include "singmin/real.hpp"

namespace singmin {

// Base oscillatory profile
//
//   base(t) = t sin log log log 1/|t|   (0 at t = 0),
//
// its derivatives, the weight coefficients psi1/psi2, and the global
// constant C = 1 + sup 5|t| psi(t).  Everything here is a pure function.
//
// The log chain at |t|:  l1 = log 1/|t|,  l2 = log l1,  theta = log l2.
struct TripleLog {
  Real l1;
  Real l2;
  Real theta;
};

// Requires 0 < |t| < 1/e so the chain is real.
TripleLog triple_log_chain(const Real& abs_t);

enum class PsiPart { one, two, both };

// --- plain-Real channel (|t| representable) ---

Real eval_base_exact(const Real& t);     // odd
Real eval_base_d1_exact(const Real& t);  // even; t != 0
Real base_d2_exact(const Real& t);       // odd; t != 0
Real base_d3_exact(const Real& t);       // t != 0
Real base_d2_majorant(const Real& abs_t);
Real base_d4_bound(const Real& abs_t);  // crude, for Taylor remainders
Real psi_exact(const Real& t, PsiPart part);

// --- theta-domain channel ---

// Derivative of the base profile as a function of theta:
//   slope(theta) = sin theta - cos theta * corr(theta),
// corr(theta) = exp(-theta - e^theta).  The correction is dropped exactly
// when it falls below one ulp of 1 at working precision.
Real base_d1_theta(const Real& theta);
// Upper bound on the dropped/kept correction magnitude.
LogMag base_d1_corr_bound(const Real& theta);

// Majorant of |base''| at a magnitude given in log scale.
LogMag base_d2_majorant(const LogMag& abs_t);
// Exact |base''| at a magnitude in log scale (the bracket factor is an
// ordinary Real even when the magnitude is far below plain range).
LogMag base_d2_abs_logmag(const LogMag& abs_t);
// Majorant of psi at a magnitude in log scale; decreasing in the magnitude,
// which makes it usable as an off-cover bound.
LogMag psi_logmag(const LogMag& abs_t, PsiPart part);
// Exact psi at a magnitude in log scale.
LogMag psi_exact_logmag(const LogMag& abs_t, PsiPart part);

// --- offset-facing operations ---

GuardedValue eval_base(const Offset& off);
LogVal eval_base_logval(const Offset& off);
GuardedValue eval_base_d1(const Offset& off);
Real eval_base_d1_real(const Offset& off);
double eval_base_d2_bound(const Offset& off);  // +inf if not representable
GuardedValue psi(const Offset& off, PsiPart part);

// C = 1 + sup_{[-T,T]} 5|t| psi(t), by grid search with refinement plus a
// slope-bound margin so the result over-approximates the true sup.
Real constant_C();
Real constant_C_at_resolution(int uniform_points, int geometric_points,
                              int refine_rounds);

// --- fast double channel (solver / quadrature hot path) ---

double base_value_d(double t);
double base_d1_d(double t);
double base_d2_d(double t);
double psi_d(double t);  // psi1 + psi2 at plain double t != 0

}  // namespace singmin
