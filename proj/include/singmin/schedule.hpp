// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "singmin/base_profile.hpp"
#include "singmin/logscale.hpp"
#include "singmin/real.hpp"

namespace singmin {

// One inequality certificate.  lhs must stay strictly below rhs; the margin
// is log(rhs) - log(lhs), so a safety factor of 0.9 shows up as ~0.105.
struct Certificate {
  std::string name;
  int stage = -1;
  bool pass = false;
  double margin_log = 0.0;
  std::string note;
};

// Per-stage schedule data.  T, R and everything downstream of them are
// triple-exponentially small from stage 1 on and live in log scale.
struct ScheduleRow {
  int n = 0;
  Real x;                       // anchor
  std::optional<Real> sigma;    // min_{i<n} |x_i - x_n| / 2   (n >= 1)
  Real K;                       // second-derivative budget
  LogMag T;                     // half-width of Y_n
  Real eps;                     // 2^{-n} (1 - 1/e)
  LogMag R;                     // half-width of Z_n
  // Extension data, present when T_{n+1} exists:
  std::optional<Real> m_count;      // 2^{-m_n} < T_{n+1}^2 / 256
  std::optional<LogMag> g_radius;   // equal-radius open cover of the anchors
  std::optional<int> g_count;
  std::optional<LogMag> g_measure;
  std::optional<Real> M_log;        // log M_n
};

struct Schedule {
  Real domain_T;
  Real C;
  std::vector<Real> anchors;   // x_0 = 0 first
  int depth = 0;               // stages to build (N)
  std::vector<ScheduleRow> rows;
  std::vector<Certificate> certificates;

  int top_row() const { return static_cast<int>(rows.size()) - 1; }
  bool all_certificates_pass() const;
  const ScheduleRow& row(int n) const { return rows.at(n); }
};

// Anchor layout used by default: 0 followed by dyadics +-T k/2^j in
// breadth-first order.
std::vector<Real> dyadic_anchors(int count);

// Builds every sequence of the construction for the given anchors.  Rows
// exist for every anchor; m/G/M data for rows 0..A-1.  Throws
// std::invalid_argument on duplicate anchors, anchors outside (-T, T),
// a first anchor != 0, or depth out of range.
Schedule build_schedule(const std::vector<Real>& anchors, int depth);

// Re-derives both sides of every schedule inequality from the stored row
// values at elevated precision.  Returns a fresh certificate list.
std::vector<Certificate> verify_schedule(const Schedule& s,
                                         unsigned extra_bits = 64);

// Upper bound for sup_{0<|s|<=Tn} |s psi(s)| given lambda = log(1/Tn).
Real sup_s_psi_bound(const Real& lambda);

}  // namespace singmin
