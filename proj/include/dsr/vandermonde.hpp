// SPDX-License-Identifier: Apache-2.0
//
// Hoelder-stable recovery from samples at t = tau * (0, ..., N-1): the moment
// system sum_n x_n^j a_n = F(tau j) with nodes x_n = exp(-tau lambda_n).
#pragma once

#include <optional>

#include "dsr/forward.hpp"
#include "dsr/report.hpp"

namespace dsr {

struct VandermondeSystem {
  Vector nodes;  // strictly decreasing in (0, 1)
  Vector rhs;    // F(tau j), j = 0..N-1
  Real inv_norm_bound;
  Real tau = 1;
  size_t size() const { return nodes.size(); }
};

/// Entrywise bound sum_j prod_{i != j} (1 + |x_i|) / |x_i - x_j| on the inverse
/// (attained for positive nodes).
Real inv_norm_bound(const Vector& nodes);
/// The same sum with (1 + |x_j|) in each factor.
Real inv_norm_bound_alt(const Vector& nodes);

VandermondeSystem build_system(const EigenvalueSequence& lambda, size_t N, const SeriesInput& F,
                               const Real& tau = 1);

struct PrimalSolution {
  CoefficientSequence a;
  Real residual;  // max_j |(V a)_j - B_j|
};

/// Bjoerck-Pereyra O(N^2) solve of V a = B.
PrimalSolution solve_primal(const VandermondeSystem& sys);

/// N in [n0, n_max] minimizing exp(C N^beta1) eps/m + exp(-c N^beta); ties go to the smaller N.
size_t select_N_holder(const Real& epsilon, double C, double c, double beta1, double beta, double m = 1.0,
                       size_t n0 = 1, size_t n_max = 64);

struct HolderConfig {
  std::optional<size_t> N;              // fixed system size
  size_t N_max = 20;
  std::optional<size_t> support_bound;  // data known to vanish beyond this index
  Real tau = 1;
  std::optional<Real> noise_level;
  std::optional<double> theorem_C;
  int precision_bits = 0;
};

/// a priori a in m B with sum exp(alpha_w n^beta_w) |a_n| <= m.
RecoveryReport recover_holder(const SeriesInput& F, const EigenvalueSequence& lambda, double m, double alpha_w,
                              double beta_w, const HolderConfig& config = {});

}  // namespace dsr
