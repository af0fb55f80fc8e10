// SPDX-License-Identifier: Apache-2.0
#include "dsr/sequences.hpp"

#include <algorithm>
#include <utility>

#include "dsr/error.hpp"

namespace dsr {

namespace {

Real slack(const Real& x) { return abs(x) * ldexp(Real(1), 16 - precision_bits()); }

void check_increasing(const Vector& v, size_t upto) {
  for (size_t i = 0; i < upto; ++i) {
    if (!(v[i] > 0)) fail(Errc::structural, "exponent " + std::to_string(i + 1) + " is not positive");
    if (i > 0 && !(v[i] > v[i - 1]))
      fail(Errc::structural, "exponents not strictly increasing at index " + std::to_string(i + 1));
  }
}

}  // namespace

EigenvalueSequence EigenvalueSequence::power(const Real& alpha, const Real& mu, size_t count) {
  require(alpha > 0 && mu > 0, Errc::invalid_argument, "power family needs alpha > 0 and mu > 0");
  require(count >= 1, Errc::invalid_argument, "power family needs count >= 1");
  EigenvalueSequence s;
  const Real two_alpha = 2 * alpha;
  for (size_t k = 1; k <= count; ++k) s.values_.push_back(pow(Real(k) / mu, two_alpha));
  s.power_ = PowerFamily{alpha, mu};
  const Real scale = pow(mu, -two_alpha);
  if (two_alpha <= 1)
    s.gap_ = GapParams{1 - two_alpha, two_alpha, scale, two_alpha * scale};
  else
    s.gap_ = GapParams{Real(0), two_alpha, scale, (pow(Real(2), two_alpha) - 1) * scale};
  s.asym_ = AsymptoticParams{scale, Real(0), two_alpha};
  return s;
}

EigenvalueSequence EigenvalueSequence::explicit_values(Vector values) {
  require(!values.empty(), Errc::invalid_argument, "explicit family needs at least one value");
  check_increasing(values, values.size());
  EigenvalueSequence s;
  s.values_ = std::move(values);
  return s;
}

const Real& EigenvalueSequence::at(size_t k) const {
  require(k >= 1 && k <= values_.size(), Errc::invalid_argument,
          "exponent index " + std::to_string(k) + " out of range 1.." + std::to_string(values_.size()));
  return values_[k - 1];
}

EigenvalueSequence EigenvalueSequence::prefix(size_t n) const {
  require(n >= 1 && n <= values_.size(), Errc::invalid_argument, "prefix length out of range");
  EigenvalueSequence s = *this;
  s.values_.resize(n);
  return s;
}

EigenvalueSequence EigenvalueSequence::with_gap(GapParams g) const {
  require(g.beta0 >= 0 && g.beta1 > 0 && g.c > 0 && g.d > 0, Errc::invalid_argument,
          "gap parameters need beta0 >= 0 and beta1, c, d > 0");
  EigenvalueSequence s = *this;
  s.gap_ = std::move(g);
  return s;
}

EigenvalueSequence EigenvalueSequence::with_asymptotic(AsymptoticParams a) const {
  require(a.K > 0 && a.alpha_shift >= 0 && a.beta > 1, Errc::invalid_argument,
          "asymptotic parameters need K > 0, shift >= 0, beta > 1");
  EigenvalueSequence s = *this;
  s.asym_ = std::move(a);
  return s;
}

EigenvalueSequence EigenvalueSequence::with_tail_exponent(const Real& e) const {
  require(e > 0, Errc::invalid_argument, "tail exponent must be positive");
  EigenvalueSequence s = *this;
  s.tail_ = e;
  return s;
}

void EigenvalueSequence::check_invariants() const {
  check_increasing(values_, values_.size());
  if (power_) {
    const Real two_alpha = 2 * power_->alpha;
    if (two_alpha > 1) {
      Real sum = 0;
      for (const auto& v : values_) sum += 1 / v;
      Real bound = pow(power_->mu, two_alpha) * (1 + 1 / (two_alpha - 1));
      if (sum > bound + slack(bound))
        fail(Errc::structural, "reciprocal sum exceeds the analytic tail bound");
    }
  }
  if (gap_ && !validate_gap(*this, values_.size()).pass)
    fail(Errc::structural, "declared gap parameters do not hold on the stored prefix");
}

CoefficientSequence CoefficientSequence::unit(size_t k) {
  require(k >= 1, Errc::invalid_argument, "unit index is 1-based");
  Vector v(k);
  v[k - 1] = 1;
  return CoefficientSequence(std::move(v));
}

size_t CoefficientSequence::support() const {
  for (size_t i = entries_.size(); i > 0; --i)
    if (!entries_[i - 1].is_zero()) return i;
  return 0;
}

const Real& CoefficientSequence::at(size_t k) const {
  require(k >= 1 && k <= entries_.size(), Errc::invalid_argument, "coefficient index out of range");
  return entries_[k - 1];
}

Real& CoefficientSequence::at(size_t k) {
  require(k >= 1, Errc::invalid_argument, "coefficient index is 1-based");
  if (k > entries_.size()) entries_.resize(k);
  return entries_[k - 1];
}

CoefficientSequence CoefficientSequence::truncated(size_t n) const {
  Vector v(n);
  for (size_t i = 0; i < std::min(n, entries_.size()); ++i) v[i] = entries_[i];
  return CoefficientSequence(std::move(v));
}

CoefficientSequence operator*(const Real& s, const CoefficientSequence& a) {
  Vector v;
  v.reserve(a.size());
  for (const auto& x : a.entries()) v.push_back(s * x);
  return CoefficientSequence(std::move(v));
}

CoefficientSequence operator+(const CoefficientSequence& a, const CoefficientSequence& b) {
  Vector v(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) v[i] += a.entries()[i];
  for (size_t i = 0; i < b.size(); ++i) v[i] += b.entries()[i];
  return CoefficientSequence(std::move(v));
}

CoefficientSequence operator-(const CoefficientSequence& a, const CoefficientSequence& b) {
  return a + Real(-1) * b;
}

Real japanese_bracket(size_t k) {
  Real kk(k);
  return sqrt(1 + kk * kk);
}

Real norm(const CoefficientSequence& a, const NormKind& kind) {
  switch (kind.tag) {
    case NormKind::h_theta:
    case NormKind::l1_theta:
      require(kind.theta > 0, Errc::invalid_argument, "norm needs theta > 0");
      break;
    case NormKind::l1_exp:
      require(kind.alpha > 0 && kind.beta > 0, Errc::invalid_argument, "norm needs alpha, beta > 0");
      break;
    default:
      break;
  }
  Real acc = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    const Real& x = a.entries()[i];
    if (x.is_zero()) continue;
    const size_t k = i + 1;
    switch (kind.tag) {
      case NormKind::l1:
        acc += abs(x);
        break;
      case NormKind::l2:
        acc += x * x;
        break;
      case NormKind::linf:
        acc = max(acc, abs(x));
        break;
      case NormKind::h_theta:
        acc += pow(1 + Real(k) * Real(k), kind.theta) * x * x;
        break;
      case NormKind::l1_theta:
        acc += pow(Real(k), kind.theta) * abs(x);
        break;
      case NormKind::l1_exp:
        acc += exp(kind.alpha * pow(Real(k), kind.beta)) * abs(x);
        break;
    }
  }
  if (kind.tag == NormKind::l2 || kind.tag == NormKind::h_theta) return sqrt(acc);
  return acc;
}

GapReport validate_gap(const EigenvalueSequence& seq, size_t upto, const GapParams& declared) {
  require(upto >= 1 && upto <= seq.size(), Errc::invalid_argument, "validate_gap: upto out of range");
  const Vector& v = seq.values();
  check_increasing(v, upto);
  GapReport r;
  r.d_star = infinity();
  r.c_star = 0;
  for (size_t i = 1; i <= upto; ++i) {
    r.c_star = max(r.c_star, v[i - 1] / pow(Real(i), declared.beta1));
    if (i < upto) r.d_star = min(r.d_star, (v[i] - v[i - 1]) * pow(Real(i + 1), declared.beta0));
  }
  r.pass = r.d_star + slack(r.d_star) >= declared.d && r.c_star <= declared.c + slack(declared.c);
  return r;
}

GapReport validate_gap(const EigenvalueSequence& seq, size_t upto) {
  require(seq.gap().has_value(), Errc::invalid_argument, "validate_gap: no gap parameters declared");
  return validate_gap(seq, upto, *seq.gap());
}

ReciprocalClass reciprocal_sum_class(const EigenvalueSequence& seq) {
  if (seq.family()) return 2 * seq.family()->alpha > 1 ? ReciprocalClass::summable : ReciprocalClass::divergent;
  if (seq.tail_exponent()) return *seq.tail_exponent() > 1 ? ReciprocalClass::summable : ReciprocalClass::divergent;
  return ReciprocalClass::unknown;
}

std::string to_string(ReciprocalClass c) {
  switch (c) {
    case ReciprocalClass::summable:
      return "summable";
    case ReciprocalClass::divergent:
      return "divergent";
    default:
      return "unknown";
  }
}

}  // namespace dsr
