// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <stdexcept>
#include <string>

namespace singmin {

namespace mp = boost::multiprecision;

// Working scalar for everything construction-critical.  MPFR-backed with
// runtime precision; transcendental functions are correctly rounded, which
// keeps rebuilds bit-identical for a fixed precision.
using Real = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;

inline constexpr unsigned kMinPrecisionBits = 128;
inline constexpr unsigned kDefaultPrecisionBits = 256;

inline unsigned bits_to_digits10(unsigned bits) {
  return static_cast<unsigned>(bits * 0.3010299956639812) + 1;
}

inline void set_precision_bits(unsigned bits) {
  if (bits < kMinPrecisionBits) {
    throw std::invalid_argument("precision must be at least 128 bits");
  }
  Real::default_precision(bits_to_digits10(bits));
}

inline unsigned precision_digits10() { return Real::default_precision(); }

// Re-enters the previous precision on scope exit.  Used by the independent
// certificate checker, which re-evaluates everything with extra bits.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned extra_bits)
      : saved_digits_(Real::default_precision()) {
    Real::default_precision(saved_digits_ +
                            bits_to_digits10(extra_bits));
  }
  ~PrecisionGuard() { Real::default_precision(saved_digits_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  unsigned saved_digits_;
};

inline Real euler_e() { return exp(Real(1)); }

// Domain half-width of the whole problem, T = e^{-e}/2.
inline Real domain_half_width() { return exp(-euler_e()) / 2; }

inline Real pi_value() { return 4 * atan(Real(1)); }

// Unit roundoff at the current working precision.
inline Real rounding_eps() {
  return ldexp(Real(1), -static_cast<int>(
                            Real::default_precision() * 3.32192809488736) +
                            4);
}

inline double to_double(const Real& x) { return x.convert_to<double>(); }

// Evaluation-facing result: a double plus a sound absolute error bound
// covering rounding and any series/quadrature truncation behind it.
struct GuardedValue {
  double value = 0.0;
  double abs_error = 0.0;
};

inline GuardedValue guarded_from_real(const Real& x, const Real& abs_err) {
  GuardedValue g;
  g.value = to_double(x);
  Real rounding = abs(x) * 1e-16 + abs_err;
  g.abs_error = to_double(rounding) + 5e-324;
  return g;
}

inline GuardedValue guarded_from_real(const Real& x) {
  return guarded_from_real(x, Real(0));
}

}  // namespace singmin
