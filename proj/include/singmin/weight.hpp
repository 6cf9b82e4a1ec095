// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "singmin/wlimit.hpp"

namespace singmin {

// Tabulated per-stage weight data.  From stage 1 on, the inside-Y_n regime
// of each translated copy lives below plain range; at plain scale the copy
// is the constant cap (cap1 + cap2) for every nonzero y, ramping to zero
// only at sub-plain |y|.
struct WeightTables {
  int stages = 0;  // copies 0..stages available
  Real C;
  std::vector<Real> cap1;      // 5 psi1(T_i) T_i = 2010/loglog(1/(5 T_i))
  std::vector<LogMag> cap2;    // 5 psi2(T_i) T_i
  std::vector<LogMag> slope1;  // psi1(T_i): frozen outside ramp slope
  std::vector<LogMag> slope2;  // psi2(T_i)
  std::vector<LogMag> knee;    // 5 T_i
  std::vector<double> cap_total_d;  // double cap1+cap2 per copy
};

WeightTables build_weight_tables(const Construction& c);

struct WeightContext {
  const Construction* cons;
  WeightTables tables;
};

WeightContext make_weight_context(const Construction& c);

// phi(t, y) truncated at depth N; abs_error carries the 2^{-N} tail of the
// idealized full sum plus rounding.
GuardedValue phi(const WeightContext& w, const Real& t, const Real& y, int N);
GuardedValue phi_part(const WeightContext& w, PsiPart part, const Real& t,
                      const Real& y, int N);

// Lipschitz-in-y bound for phi_N(t, .); +infinity exactly at anchors where
// the local psi copy diverges.
struct LipBound {
  bool finite = true;
  Real lg;  // log of the bound when finite
  double to_double() const;
};
LipBound phi_lipschitz_y(const WeightContext& w, const Real& t, int N);

// single translated copy (exposed for the two-regime/boundary tests)
Real phi_tilde(const WeightContext& w, int i, const Real& t, const Real& y,
               PsiPart part = PsiPart::both);

// fast double channel
double phi_d(const WeightContext& w, double t, double y, int N);

}  // namespace singmin
