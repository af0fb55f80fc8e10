// SPDX-License-Identifier: Apache-2.0
//
// Arbitrary-precision real number backed by MPFR.
//
// Every arithmetic result is rounded to the calling thread's current
// precision (see PrecisionScope). Copies keep the precision of their source.
#pragma once

#include <mpfr.h>

#include <compare>
#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace dsr {

constexpr int kDefaultPrecisionBits = 256;

/// Current precision (bits) of newly produced values on this thread.
int precision_bits() noexcept;
void set_precision_bits(int bits);

/// Sets the thread precision for the lifetime of the scope.
class PrecisionScope {
 public:
  explicit PrecisionScope(int bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  int saved_;
};

class Real {
 public:
  Real();
  Real(double x);
  template <std::integral I>
  Real(I x) : Real() {
    if constexpr (std::is_signed_v<I>)
      mpfr_set_si(v_, static_cast<long>(x), MPFR_RNDN);
    else
      mpfr_set_ui(v_, static_cast<unsigned long>(x), MPFR_RNDN);
  }
  /// Parses a decimal string ("1.25", "-3e-40", "inf").
  explicit Real(std::string_view text);

  Real(const Real& o);
  Real(Real&& o) noexcept;
  Real& operator=(const Real& o);
  Real& operator=(Real&& o) noexcept;
  ~Real();

  int bits() const { return static_cast<int>(mpfr_get_prec(v_)); }
  Real rounded(int bits) const;

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  /// Scientific decimal text. digits == 0 gives enough digits to round-trip.
  std::string str(int digits = 0) const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  Real operator-() const;
  Real& operator+=(const Real& b);
  Real& operator-=(const Real& b);
  Real& operator*=(const Real& b);
  Real& operator/=(const Real& b);

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const Real& a, const Real& b);

 private:
  void widen_to_default();
  mpfr_t v_;
};

std::ostream& operator<<(std::ostream& os, const Real& x);

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real expm1(const Real& x);
Real log(const Real& x);
Real log1p(const Real& x);
Real log2(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real pow(const Real& x, const Real& y);
Real pow(const Real& x, long n);
Real floor(const Real& x);
Real ldexp(const Real& x, long e);
Real min(const Real& a, const Real& b);
Real max(const Real& a, const Real& b);
Real pi();
Real infinity();

/// Decimal digits needed to round-trip a value of the given precision.
int roundtrip_digits(int bits);

}  // namespace dsr
