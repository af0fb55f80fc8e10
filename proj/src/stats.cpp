// SPDX-License-Identifier: Apache-2.0
#include "dsr/stats.hpp"

#include <algorithm>
#include <cmath>

#include "dsr/error.hpp"

namespace dsr {

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, Errc::invalid_argument, "linear_fit needs >= 2 points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  if (sxx <= 0 || syy <= 0) {
    f.degenerate = true;
    f.intercept = my;
    f.r2 = syy <= 0 ? 1 : 0;
    return f;
  }
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return f;
}

double median(std::vector<double> v) {
  require(!v.empty(), Errc::invalid_argument, "median of an empty list");
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace dsr
