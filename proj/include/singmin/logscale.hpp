// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

#include "singmin/real.hpp"

namespace singmin {

// The schedule constants T_n, R_n and everything derived from them sit at
// scales like exp(-exp(10^4)) after one stage, so no floating-point format
// holds them directly.  LogMag stores a nonnegative quantity q as
// lg = log(q); lg itself stays comfortably inside MPFR's exponent range for
// every quantity this construction produces.
class LogMag {
 public:
  LogMag() : zero_(true) {}

  static LogMag zero() { return LogMag(); }

  static LogMag from_log(const Real& lg) {
    LogMag m;
    m.zero_ = false;
    m.lg_ = lg;
    return m;
  }

  static LogMag from_real(const Real& x) {
    if (x < 0) throw std::domain_error("LogMag: negative value");
    if (x == 0) return zero();
    return from_log(log(x));
  }

  // Triple-log coordinate: q = exp(-exp(exp(theta))).
  static LogMag from_theta(const Real& theta) {
    if (theta > 42) throw std::domain_error("LogMag: theta out of range");
    return from_log(-exp(exp(theta)));
  }

  bool is_zero() const { return zero_; }

  const Real& log_value() const {
    if (zero_) throw std::domain_error("LogMag: log of zero");
    return lg_;
  }

  // theta = log log log (1/q); defined for q < 1/e.
  Real theta() const {
    if (zero_) throw std::domain_error("LogMag: theta of zero");
    if (lg_ >= -1) throw std::domain_error("LogMag: theta needs q < 1/e");
    return log(log(-lg_));
  }

  bool representable() const {
    return zero_ || abs(lg_) < Real(1) * (1ll << 50);
  }

  Real to_real() const {
    if (zero_) return Real(0);
    if (!representable())
      throw std::domain_error("LogMag: magnitude outside Real range");
    return exp(lg_);
  }

  double to_double() const {
    if (zero_) return 0.0;
    if (lg_ < -745) return 0.0;  // below double denormals
    if (lg_ > 710) return std::numeric_limits<double>::infinity();
    return singmin::to_double(exp(lg_));
  }

 private:
  bool zero_;
  Real lg_;
};

inline bool operator<(const LogMag& a, const LogMag& b) {
  if (a.is_zero()) return !b.is_zero();
  if (b.is_zero()) return false;
  return a.log_value() < b.log_value();
}
inline bool operator>(const LogMag& a, const LogMag& b) { return b < a; }
inline bool operator<=(const LogMag& a, const LogMag& b) { return !(b < a); }
inline bool operator>=(const LogMag& a, const LogMag& b) { return !(a < b); }

inline LogMag operator*(const LogMag& a, const LogMag& b) {
  if (a.is_zero() || b.is_zero()) return LogMag::zero();
  return LogMag::from_log(a.log_value() + b.log_value());
}

inline LogMag operator/(const LogMag& a, const LogMag& b) {
  if (b.is_zero()) throw std::domain_error("LogMag: division by zero");
  if (a.is_zero()) return LogMag::zero();
  return LogMag::from_log(a.log_value() - b.log_value());
}

inline LogMag pow_int(const LogMag& a, int k) {
  if (a.is_zero()) {
    if (k <= 0) throw std::domain_error("LogMag: 0^k, k <= 0");
    return LogMag::zero();
  }
  return LogMag::from_log(a.log_value() * k);
}

inline LogMag scale(const LogMag& a, const Real& factor) {
  if (factor < 0) throw std::domain_error("LogMag: negative scale");
  if (factor == 0 || a.is_zero()) return LogMag::zero();
  return LogMag::from_log(a.log_value() + log(factor));
}

// a + b via log-sum-exp; terms more than the working precision apart are
// absorbed exactly (their contribution is below one ulp of the result).
inline LogMag add(const LogMag& a, const LogMag& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  const LogMag& hi = (a.log_value() >= b.log_value()) ? a : b;
  const LogMag& lo = (a.log_value() >= b.log_value()) ? b : a;
  Real d = lo.log_value() - hi.log_value();
  if (d < -40000) return hi;
  return LogMag::from_log(hi.log_value() + log1p(exp(d)));
}

// a - b, requiring a >= b.  Full cancellation returns exact zero.
inline LogMag sub_nonneg(const LogMag& a, const LogMag& b) {
  if (b.is_zero()) return a;
  if (a.is_zero() || a.log_value() < b.log_value())
    throw std::domain_error("LogMag: subtraction would be negative");
  Real d = b.log_value() - a.log_value();
  if (d == 0) return LogMag::zero();
  if (d < -40000) return a;
  Real t = -expm1(d);  // 1 - exp(d) in (0, 1]
  if (t <= 0) return LogMag::zero();
  return LogMag::from_log(a.log_value() + log(t));
}

// Signed companion of LogMag.
class LogVal {
 public:
  LogVal() : sign_(0) {}
  LogVal(int sign, LogMag mag) : sign_(mag.is_zero() ? 0 : sign), mag_(mag) {
    if (sign_ != 0 && sign_ != 1 && sign_ != -1)
      throw std::domain_error("LogVal: bad sign");
  }

  static LogVal zero() { return LogVal(); }
  static LogVal from_real(const Real& x) {
    if (x == 0) return zero();
    return LogVal(x > 0 ? 1 : -1, LogMag::from_real(abs(x)));
  }

  int sign() const { return sign_; }
  bool is_zero() const { return sign_ == 0; }
  const LogMag& mag() const { return mag_; }

  Real to_real() const {
    if (is_zero()) return Real(0);
    return sign_ * mag_.to_real();
  }
  double to_double() const {
    if (is_zero()) return 0.0;
    return sign_ * mag_.to_double();
  }

  LogVal negated() const { return LogVal(-sign_, mag_); }

 private:
  int sign_;
  LogMag mag_;
};

inline LogVal operator*(const LogVal& a, const LogVal& b) {
  if (a.is_zero() || b.is_zero()) return LogVal::zero();
  return LogVal(a.sign() * b.sign(), a.mag() * b.mag());
}

inline LogVal operator/(const LogVal& a, const LogVal& b) {
  if (b.is_zero()) throw std::domain_error("LogVal: division by zero");
  if (a.is_zero()) return LogVal::zero();
  return LogVal(a.sign() * b.sign(), a.mag() / b.mag());
}

inline LogVal operator+(const LogVal& a, const LogVal& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.sign() == b.sign()) return LogVal(a.sign(), add(a.mag(), b.mag()));
  if (a.mag() >= b.mag())
    return LogVal(a.sign(), sub_nonneg(a.mag(), b.mag()));
  return LogVal(b.sign(), sub_nonneg(b.mag(), a.mag()));
}

inline LogVal operator-(const LogVal& a, const LogVal& b) {
  return a + b.negated();
}

inline LogVal scale(const LogVal& a, const Real& factor) {
  if (factor == 0 || a.is_zero()) return LogVal::zero();
  int s = factor > 0 ? a.sign() : -a.sign();
  return LogVal(s, scale(a.mag(), abs(factor)));
}

inline LogMag abs_mag(const LogVal& v) { return v.mag(); }

}  // namespace singmin
