// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace dsr {

/// Ordinary least squares y = intercept + slope * x.
struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  bool degenerate = false;  // constant x or constant y
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

double median(std::vector<double> v);

}  // namespace dsr
