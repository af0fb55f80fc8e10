// SPDX-License-Identifier: Apache-2.0
#include "dsr/real.hpp"

#include <cctype>
#include <cmath>
#include <ostream>

#include "dsr/error.hpp"

namespace dsr {

namespace {
thread_local int t_bits = kDefaultPrecisionBits;
}

int precision_bits() noexcept { return t_bits; }

void set_precision_bits(int bits) {
  require(bits >= MPFR_PREC_MIN && bits <= (1 << 24), Errc::invalid_argument,
          "precision bits out of range: " + std::to_string(bits));
  t_bits = bits;
}

PrecisionScope::PrecisionScope(int bits) : saved_(t_bits) { set_precision_bits(bits); }
PrecisionScope::~PrecisionScope() { t_bits = saved_; }

Real::Real() {
  mpfr_init2(v_, t_bits);
  mpfr_set_zero(v_, 1);
}

Real::Real(double x) {
  mpfr_init2(v_, t_bits);
  mpfr_set_d(v_, x, MPFR_RNDN);
}

Real::Real(std::string_view text) {
  mpfr_init2(v_, t_bits);
  std::string s(text);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  s = s.substr(b);
  char* end = nullptr;
  if (!s.empty()) mpfr_strtofr(v_, s.c_str(), &end, 10, MPFR_RNDN);
  if (s.empty() || end == nullptr || *end != '\0') {
    mpfr_clear(v_);
    fail(Errc::invalid_argument, "not a decimal number: '" + std::string(text) + "'");
  }
}

Real::Real(const Real& o) {
  mpfr_init2(v_, mpfr_get_prec(o.v_));
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

Real::Real(Real&& o) noexcept {
  v_[0] = o.v_[0];
  o.v_[0]._mpfr_d = nullptr;
}

Real& Real::operator=(const Real& o) {
  if (this != &o) {
    if (v_[0]._mpfr_d == nullptr)
      mpfr_init2(v_, mpfr_get_prec(o.v_));
    else
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& o) noexcept {
  if (this != &o) {
    if (v_[0]._mpfr_d != nullptr) mpfr_clear(v_);
    v_[0] = o.v_[0];
    o.v_[0]._mpfr_d = nullptr;
  }
  return *this;
}

Real::~Real() {
  if (v_[0]._mpfr_d != nullptr) mpfr_clear(v_);
}

Real Real::rounded(int bits) const {
  PrecisionScope scope(bits);
  Real r;
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

int roundtrip_digits(int bits) {
  return 1 + static_cast<int>(std::ceil(bits * 0.30102999566398120));
}

std::string Real::str(int digits) const {
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(v_)) return "0";
  if (digits <= 0) digits = roundtrip_digits(bits());
  mpfr_exp_t e = 0;
  char* s = mpfr_get_str(nullptr, &e, 10, static_cast<size_t>(digits), v_, MPFR_RNDN);
  std::string m(s);
  mpfr_free_str(s);
  std::string out;
  if (m[0] == '-') {
    out = "-";
    m.erase(0, 1);
  }
  while (m.size() > 1 && m.back() == '0') m.pop_back();
  out += m[0];
  if (m.size() > 1) {
    out += '.';
    out += m.substr(1);
  }
  long exp10 = static_cast<long>(e) - 1;
  if (exp10 != 0) out += "e" + std::to_string(exp10);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Real& x) {
  return os << x.str(os.precision() > 0 ? static_cast<int>(os.precision()) : 0);
}

void Real::widen_to_default() {
  if (mpfr_get_prec(v_) != t_bits) mpfr_prec_round(v_, t_bits, MPFR_RNDN);
}

Real Real::operator-() const {
  Real r;
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

Real& Real::operator+=(const Real& b) {
  widen_to_default();
  mpfr_add(v_, v_, b.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator-=(const Real& b) {
  widen_to_default();
  mpfr_sub(v_, v_, b.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator*=(const Real& b) {
  widen_to_default();
  mpfr_mul(v_, v_, b.v_, MPFR_RNDN);
  return *this;
}
Real& Real::operator/=(const Real& b) {
  widen_to_default();
  mpfr_div(v_, v_, b.v_, MPFR_RNDN);
  return *this;
}

Real operator+(const Real& a, const Real& b) {
  Real r;
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator-(const Real& a, const Real& b) {
  Real r;
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator*(const Real& a, const Real& b) {
  Real r;
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
Real operator/(const Real& a, const Real& b) {
  Real r;
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.v_, b.v_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

#define DSR_UNARY(name, fn)              \
  Real name(const Real& x) {             \
    Real r;                              \
    fn(r.raw(), x.raw(), MPFR_RNDN);     \
    return r;                            \
  }

DSR_UNARY(abs, mpfr_abs)
DSR_UNARY(sqrt, mpfr_sqrt)
DSR_UNARY(exp, mpfr_exp)
DSR_UNARY(expm1, mpfr_expm1)
DSR_UNARY(log, mpfr_log)
DSR_UNARY(log1p, mpfr_log1p)
DSR_UNARY(log2, mpfr_log2)
DSR_UNARY(sin, mpfr_sin)
DSR_UNARY(cos, mpfr_cos)
#undef DSR_UNARY

Real floor(const Real& x) {
  Real r;
  mpfr_floor(r.raw(), x.raw());
  return r;
}

Real pow(const Real& x, const Real& y) {
  Real r;
  mpfr_pow(r.raw(), x.raw(), y.raw(), MPFR_RNDN);
  return r;
}

Real pow(const Real& x, long n) {
  Real r;
  mpfr_pow_si(r.raw(), x.raw(), n, MPFR_RNDN);
  return r;
}

Real ldexp(const Real& x, long e) {
  Real r;
  mpfr_mul_2si(r.raw(), x.raw(), e, MPFR_RNDN);
  return r;
}

Real min(const Real& a, const Real& b) { return b < a ? b : a; }
Real max(const Real& a, const Real& b) { return a < b ? b : a; }

Real pi() {
  Real r;
  mpfr_const_pi(r.raw(), MPFR_RNDN);
  return r;
}

Real infinity() {
  Real r;
  mpfr_set_inf(r.raw(), 1);
  return r;
}

}  // namespace dsr
