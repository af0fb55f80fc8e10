// SPDX-License-Identifier: Apache-2.0
//
// Exponent sequences, coefficient sequences and weighted sequence norms.
// Indices are 1-based in every public accessor.
#pragma once

#include <optional>
#include <string>

#include "dsr/linalg.hpp"

namespace dsr {

/// lambda_n = K (n + alpha_shift)^beta + lower order.
struct AsymptoticParams {
  Real K, alpha_shift, beta;
};

/// lambda_{i+1} - lambda_i >= d/(i+1)^beta0 and lambda_i <= c i^beta1.
struct GapParams {
  Real beta0, beta1, c, d;
};

struct PowerFamily {
  Real alpha, mu;  // lambda_k = (k/mu)^(2 alpha)
};

class EigenvalueSequence {
 public:
  /// (k/mu)^(2 alpha) for k = 1..count, with default gap and asymptotic metadata.
  static EigenvalueSequence power(const Real& alpha, const Real& mu, size_t count);
  static EigenvalueSequence explicit_values(Vector values);

  size_t size() const { return values_.size(); }
  const Real& at(size_t k) const;  // 1-based
  const Vector& values() const { return values_; }
  EigenvalueSequence prefix(size_t n) const;

  const std::optional<PowerFamily>& family() const { return power_; }
  const std::optional<AsymptoticParams>& asymptotic() const { return asym_; }
  const std::optional<GapParams>& gap() const { return gap_; }
  /// Growth exponent s of an explicit list, lambda_k ~ k^s (tail model).
  const std::optional<Real>& tail_exponent() const { return tail_; }

  EigenvalueSequence with_gap(GapParams g) const;
  EigenvalueSequence with_asymptotic(AsymptoticParams a) const;
  EigenvalueSequence with_tail_exponent(const Real& s) const;

  /// Throws Errc::structural naming the first violated invariant.
  void check_invariants() const;

 private:
  Vector values_;
  std::optional<PowerFamily> power_;
  std::optional<AsymptoticParams> asym_;
  std::optional<GapParams> gap_;
  std::optional<Real> tail_;
};

class CoefficientSequence {
 public:
  CoefficientSequence() = default;
  explicit CoefficientSequence(Vector entries) : entries_(std::move(entries)) {}
  static CoefficientSequence unit(size_t k);

  size_t size() const { return entries_.size(); }
  /// Largest index with a nonzero entry (0 for the zero sequence).
  size_t support() const;
  const Real& at(size_t k) const;  // 1-based
  Real& at(size_t k);
  const Vector& entries() const { return entries_; }
  Vector& entries() { return entries_; }
  CoefficientSequence truncated(size_t n) const;

 private:
  Vector entries_;
};

CoefficientSequence operator*(const Real& s, const CoefficientSequence& a);
CoefficientSequence operator+(const CoefficientSequence& a, const CoefficientSequence& b);
CoefficientSequence operator-(const CoefficientSequence& a, const CoefficientSequence& b);

struct NormKind {
  enum Tag { l1, l2, linf, h_theta, l1_theta, l1_exp } tag = l2;
  Real theta = 0;  // h_theta, l1_theta
  Real alpha = 0;  // l1_exp
  Real beta = 0;   // l1_exp

  static NormKind L1() { return {l1}; }
  static NormKind L2() { return {l2}; }
  static NormKind Linf() { return {linf}; }
  static NormKind H(const Real& th) { return {h_theta, th}; }
  static NormKind L1Theta(const Real& th) { return {l1_theta, th}; }
  static NormKind L1Exp(const Real& a, const Real& b) { return {l1_exp, 0, a, b}; }
};

/// <k> = (1 + k^2)^(1/2)
Real japanese_bracket(size_t k);

Real norm(const CoefficientSequence& a, const NormKind& kind);

struct GapReport {
  bool pass = false;
  Real d_star;  // largest d on the prefix
  Real c_star;  // smallest c on the prefix
};

/// Best gap constants on the first `upto` entries, checked against declared params.
GapReport validate_gap(const EigenvalueSequence& seq, size_t upto);
/// Same, for explicit exponents beta0, beta1 when no params are declared.
GapReport validate_gap(const EigenvalueSequence& seq, size_t upto, const GapParams& declared);

enum class ReciprocalClass { summable, divergent, unknown };
ReciprocalClass reciprocal_sum_class(const EigenvalueSequence& seq);
std::string to_string(ReciprocalClass c);

}  // namespace dsr
