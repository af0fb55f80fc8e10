// SPDX-License-Identifier: Apache-2.0
//
// Sequential (peeling) estimation of Dirichlet coefficients for exponent
// sequences satisfying the gap condition.
#pragma once

#include <optional>
#include <string>

#include "dsr/forward.hpp"
#include "dsr/report.hpp"

namespace dsr {

struct PeelingTrace {
  CoefficientSequence estimates;  // normalized by m
  Vector sample_times;            // s_k
  Real rho;                       // sup |F/m| on the dense grid
  Vector products;                // p_k
  Vector q;                       // q_k
  Vector residual_scales;         // rho_k
  Vector step_bounds;             // certified |ahat_k - a_k| (normalized)
  Vector cumulative_bounds;       // C_k rho_1^(p_k)
  Vector chain_bounds;            // 3^k rho_k^(p_k)
  int internal_bits = 0;
  Real m = 1;
};

struct PeelStep {
  Real estimate;
  Real s;
};

/// One subtract-and-rescale step: s_k = ln(1/rho_k)/lambda_{k+1} (0 when rho_k >= 1),
/// ahat_k = (F(s_k) - sum_{i<k} ahat_i exp(-lambda_i s_k)) exp(lambda_k s_k).
PeelStep peel_step(const SeriesEvaluator& F, const Vector& partial, size_t k, const EigenvalueSequence& lambda,
                   const Real& rho_k, const Real& s_max);

/// p_k = prod_{i<=k} (1 - lambda_i / lambda_{i+1}).
Vector peeling_products(const EigenvalueSequence& lambda, size_t kmax);
/// C_1 = 2, C_{k+1} = 3 C_k + 2.
std::vector<double> chain_constants(size_t kmax);

struct KTilde {
  size_t k = 0;
  bool fallback = false;  // rho >= rho_0
};

/// Greatest k with 3^k rho^(q_k) <= k^(-theta), q_k = c_*^k / (k+1)^(beta k).
KTilde select_k_tilde(const Real& rho, double theta, double beta, double c_star);
/// Threshold rho_0 = 3^(-1/q_1) below which k_tilde >= 1.
double rho_zero(double beta, double c_star);

struct PeelingConfig {
  std::optional<size_t> modes;          // overrides k_tilde
  std::optional<size_t> support_bound;  // data known to vanish beyond this index
  int internal_bits = 0;                // 0: automatic for exact evaluators
  double target = 1e-12;                // normalized accuracy goal of the automatic precision
  int max_internal_bits = 1 << 17;
  size_t sup_grid = 2000;
  std::optional<double> theorem_C;
  int precision_bits = 0;
};

RecoveryReport recover_peeling(const SeriesInput& F, const EigenvalueSequence& lambda, double theta, double m,
                               const PeelingConfig& config = {}, PeelingTrace* trace = nullptr);

std::string trace_to_csv(const PeelingTrace& trace);

}  // namespace dsr
