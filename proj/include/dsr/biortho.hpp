// SPDX-License-Identifier: Apache-2.0
//
// Biorthogonal family to {exp(-lambda_k t)} in L2(0, T) and the
// log-stable coefficient recovery built on it.
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dsr/forward.hpp"
#include "dsr/report.hpp"

namespace dsr {

struct BiorthoFamily {
  Real T;
  size_t N = 0;
  EigenvalueSequence lambda;  // first N exponents
  Matrix combo;               // psi_n(t) = sum_k combo(n, k) exp(-lambda_k t)
  Vector psi_norms;
  int precision_bits = 0;
  Real residual;              // max |<psi_n, e_m> - delta_nm|
  bool summable = true;

  Real psi(size_t n, const Real& t) const;  // 1-based n
};

/// G_jk = (1 - exp(-(lambda_j + lambda_k) T)) / (lambda_j + lambda_k); T may be infinite.
Matrix gram_matrix(const EigenvalueSequence& lambda, const Real& T, size_t N);

/// Solves G C^T = I at twice the requested precision and stores C at `precision_bits`.
/// Throws Errc::precision with a required-precision estimate when the stored
/// family misses the residual target 2^(-precision_bits/4).
BiorthoFamily build_family(const EigenvalueSequence& lambda, const Real& T, size_t N, int precision_bits);

/// Residual of the stored combination against the exact Gram matrix.
Real biorthogonality_residual(const BiorthoFamily& fam);

/// Quadrature nodes at which extraction reads the data.
QuadratureRule extraction_rule(const BiorthoFamily& fam, int quadrature_order);

/// ahat_n = int_0^T F psi_n dt, n <= N.
CoefficientSequence extract_coefficients(const SeriesInput& F, const BiorthoFamily& fam, int quadrature_order);

/// Greatest N with exp(C N) (eps/m)^2 <= N^(-2 theta); 1 when none qualifies.
size_t select_truncation(const Real& epsilon, double C, double theta, double m = 1.0, size_t n_max = 100000);

/// max_N ln(sum_{n<=N} psi_n^2) / N: the constant entering select_truncation.
double truncation_constant(const BiorthoFamily& fam);
/// max_n ln(psi_n) / lambda_n^(1/beta).
double psi_growth_constant(const BiorthoFamily& fam, double beta);

struct Interval {
  Real lo, hi;
};

/// Measurement set default [T/4, 3T/4].
std::vector<Interval> default_measurement_set(const Real& T);

/// Empirical lower bound for sup_(0,T)|F| / sup_B|F| over random unit vectors.
Real restriction_constant(const EigenvalueSequence& lambda, const Real& T, const std::vector<Interval>& B,
                          size_t N, size_t draws = 1000, uint64_t seed = 0, size_t grid = 256);

struct BiorthoConfig {
  std::optional<size_t> section_size;       // family size; must cover the data's modes
  int quadrature_order = 32;
  std::optional<double> truncation_C;       // overrides the calibrated constant
  std::optional<Real> noise_level;          // overrides the sample's declared level
  std::optional<std::vector<Interval>> B;
  std::optional<double> theorem_C;          // calibrated constant of the theorem-shaped bound
  int precision_bits = 0;                   // 0: current precision
};

RecoveryReport recover_log(const SeriesInput& F, const EigenvalueSequence& lambda, const Real& T, double theta,
                           double m, const BiorthoConfig& config = {});

/// ||f_k|| / ||F_{f_k}||_{L2(0,T)} for the single-mode inputs f_k = <k>^(-theta) e_k.
std::vector<Real> no_holder_ratios(const EigenvalueSequence& lambda, const Real& T, double theta, size_t kmax);

}  // namespace dsr
