// SPDX-License-Identifier: Apache-2.0
#include "dsr/sensor.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "dsr/error.hpp"

namespace dsr {

namespace {

class Parser {
 public:
  Parser(const std::string& s, const Real& mu) : s_(s), mu_(mu) {}

  Real parse() {
    Real v = sum();
    skip();
    if (pos_ != s_.size()) bad("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void bad(const std::string& why) {
    fail(Errc::invalid_argument, "cannot parse sensor expression '" + s_ + "': " + why);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  Real sum() {
    Real v = product();
    for (;;) {
      if (eat('+'))
        v += product();
      else if (eat('-'))
        v -= product();
      else
        return v;
    }
  }
  Real product() {
    Real v = power();
    for (;;) {
      if (eat('*'))
        v *= power();
      else if (eat('/'))
        v /= power();
      else
        return v;
    }
  }
  Real power() {
    Real v = unary();
    if (eat('^')) return pow(v, power());
    return v;
  }
  Real unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return atom();
  }
  Real atom() {
    skip();
    if (pos_ >= s_.size()) bad("unexpected end");
    if (eat('(')) {
      Real v = sum();
      if (!eat(')')) bad("missing ')'");
      return v;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t b = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
        size_t save = pos_++;
        if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
          while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        } else {
          pos_ = save;
        }
      }
      return Real(std::string_view(s_).substr(b, pos_ - b));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      size_t b = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string id = s_.substr(b, pos_ - b);
      if (eat('(')) {
        Real arg = sum();
        if (!eat(')')) bad("missing ')' after " + id);
        if (id == "sqrt") return sqrt(arg);
        if (id == "sin") return sin(arg);
        if (id == "cos") return cos(arg);
        if (id == "exp") return exp(arg);
        if (id == "log") return log(arg);
        bad("unknown function " + id);
      }
      if (id == "pi") return pi();
      if (id == "e") return exp(Real(1));
      if (id == "mu") return mu_;
      if (id == "phi") return (sqrt(Real(5)) - 1) / 2;
      if (id == "golden") return mu_ * pi() * (sqrt(Real(5)) - 1) / 2;
      if (id == "silver") return mu_ * pi() * (sqrt(Real(2)) - 1);
      bad("unknown name " + id);
    }
    bad("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  Real mu_;
  size_t pos_ = 0;
};

int guard_bits(size_t K) { return 2 * static_cast<int>(std::ceil(std::log2(static_cast<double>(K) + 1))) + 32; }

}  // namespace

Real eval_expression(const std::string& expr, const Real& mu) { return Parser(expr, mu).parse(); }

std::string to_string(SensorStrategy s) {
  switch (s) {
    case SensorStrategy::golden:
      return "golden";
    case SensorStrategy::silver:
      return "silver";
    default:
      return "explicit";
  }
}

SensorPoint propose_point(SensorStrategy strategy, const Real& mu) {
  require(mu > 0, Errc::invalid_argument, "sensor scale mu must be positive");
  SensorPoint p;
  p.mu = mu;
  p.strategy = strategy;
  switch (strategy) {
    case SensorStrategy::golden:
      p.expression = "golden";
      break;
    case SensorStrategy::silver:
      p.expression = "silver";
      break;
    default:
      fail(Errc::invalid_argument, "explicit sensor points need a value");
  }
  p.x0 = eval_expression(p.expression, mu);
  return p;
}

SensorPoint explicit_point(const std::string& expression, const Real& mu) {
  SensorPoint p;
  p.mu = mu;
  p.expression = expression;
  p.x0 = eval_expression(expression, mu);
  if (expression == "golden") p.strategy = SensorStrategy::golden;
  if (expression == "silver") p.strategy = SensorStrategy::silver;
  return p;
}

SensorPoint explicit_point(const Real& x0, const Real& mu) {
  SensorPoint p;
  p.mu = mu;
  p.x0 = x0;
  return p;
}

SensorCheck verify_point(const SensorPoint& pt, size_t K) {
  require(K >= 1, Errc::invalid_argument, "verify_point needs K >= 1");
  const int base = precision_bits();
  // an explicit binary value is exact; expressions are re-evaluated at the scan precision
  const int need = std::max(base, pt.expression.empty() ? pt.x0.bits() : 0) + guard_bits(K);
  require(need <= (1 << 24), Errc::precision,
          "argument reduction up to K = " + std::to_string(K) + " needs more precision than supported");
  SensorCheck out;
  out.bits_used = need;
  PrecisionScope hi(need);
  Real y;
  if (!pt.expression.empty())
    y = eval_expression(pt.expression, pt.mu.rounded(need)) / pt.mu;
  else
    y = pt.x0 / pt.mu;
  require(y > 0 && y < pi(), Errc::domain, "sensor point outside (0, mu pi)");
  const Real unit = ldexp(abs(y), 4 - need);
  Real best;
  Real arg, s, v;
  for (size_t k = 1; k <= K; ++k) {
    mpfr_mul_ui(arg.raw(), y.raw(), static_cast<unsigned long>(k), MPFR_RNDN);
    mpfr_sin(s.raw(), arg.raw(), MPFR_RNDN);
    mpfr_abs(s.raw(), s.raw(), MPFR_RNDN);
    Real kk(k);
    if (s <= kk * unit) {
      out.first_zero = k;
      out.d0_empirical = 0;
      out.argmin_k = k;
      out.pass = false;
      out.d0_empirical = out.d0_empirical.rounded(base);
      return out;
    }
    mpfr_mul_ui(v.raw(), s.raw(), static_cast<unsigned long>(k), MPFR_RNDN);
    if (k == 1 || v < best) {
      best = v;
      out.argmin_k = k;
    }
  }
  out.d0_empirical = best.rounded(base);
  out.pass = best > 0;
  return out;
}

SensorPoint certify(SensorPoint pt, size_t K) {
  SensorCheck c = verify_point(pt, K);
  require(c.pass, Errc::refused,
          "sensor point fails verification: sin(k x0/mu) vanishes at k = " + std::to_string(c.first_zero));
  pt.d0_empirical = c.d0_empirical;
  pt.K = K;
  pt.argmin_k = c.argmin_k;
  return pt;
}

CoefficientSequence mode_to_series(const InitialDatum& f, const SensorPoint& pt) {
  require(pt.verified(), Errc::refused, "sensor point not verified");
  require(f.coeffs.support() <= pt.K, Errc::refused, "datum support exceeds the verified range");
  Vector a(f.coeffs.size());
  for (size_t k = 1; k <= a.size(); ++k) a[k - 1] = sin(Real(k) * pt.x0 / pt.mu) * f.coeffs.at(k);
  return CoefficientSequence(std::move(a));
}

InitialDatum series_to_mode(const CoefficientSequence& a, const SensorPoint& pt) {
  require(pt.verified(), Errc::refused, "sensor point not verified");
  require(a.support() <= pt.K, Errc::refused,
          "support " + std::to_string(a.support()) + " exceeds the verified range K = " + std::to_string(pt.K));
  InitialDatum f;
  f.mu = pt.mu;
  Vector v(a.size());
  for (size_t k = 1; k <= v.size(); ++k) v[k - 1] = a.at(k) / sin(Real(k) * pt.x0 / pt.mu);
  f.coeffs = CoefficientSequence(std::move(v));
  return f;
}

}  // namespace dsr
