// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

#include "singmin/logscale.hpp"
#include "singmin/real.hpp"

namespace singmin {

// Signed displacement from an anchor.  Plain form is an ordinary Real;
// theta form carries |offset| = exp(-exp(exp(theta))), the coordinate in
// which the base profile's derivative oscillates with unit period scale.
class Offset {
 public:
  enum class Form { plain, theta };

  Offset() : form_(Form::plain), sign_(0), value_(0) {}

  static Offset zero() { return Offset(); }

  static Offset from_real(const Real& v) {
    Offset o;
    o.form_ = Form::plain;
    o.sign_ = v == 0 ? 0 : (v > 0 ? 1 : -1);
    o.value_ = v;
    return o;
  }

  static Offset from_theta(int sign, const Real& theta) {
    if (sign != 1 && sign != -1)
      throw std::domain_error("Offset: theta form must carry a sign");
    Offset o;
    o.form_ = Form::theta;
    o.sign_ = sign;
    o.value_ = theta;
    return o;
  }

  Form form() const { return form_; }
  int sign() const { return sign_; }
  bool is_zero() const { return sign_ == 0; }
  bool is_theta() const { return form_ == Form::theta; }

  const Real& plain_value() const {
    if (form_ != Form::plain) throw std::domain_error("Offset: not plain");
    return value_;
  }

  // Triple-log coordinate of the magnitude.  For plain offsets this walks
  // the log chain and therefore needs |value| < 1/e.
  Real theta() const {
    if (is_zero()) throw std::domain_error("Offset: theta of zero offset");
    if (form_ == Form::theta) return value_;
    Real a = abs(value_);
    if (a >= exp(Real(-1)))
      throw std::domain_error("Offset: |value| >= 1/e has no theta");
    return log(log(log(1 / a)));
  }

  LogMag magnitude() const {
    if (is_zero()) return LogMag::zero();
    if (form_ == Form::plain) return LogMag::from_real(abs(value_));
    return LogMag::from_theta(value_);
  }

  LogVal signed_magnitude() const { return LogVal(sign_, magnitude()); }

  bool plain_representable() const {
    return is_zero() || magnitude().representable();
  }

  Real to_real() const {
    if (is_zero()) return Real(0);
    if (form_ == Form::plain) return value_;
    return sign_ * magnitude().to_real();
  }

  Offset negated() const {
    Offset o = *this;
    o.sign_ = -o.sign_;
    return o;
  }

 private:
  Form form_;
  int sign_;
  Real value_;  // plain value (signed) or theta, by form_
};

}  // namespace singmin
