// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>

#include "dsr/sequences.hpp"

namespace dsr {

enum class Method { biortho, peeling, vandermonde };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct RecoveryReport {
  Method method = Method::biortho;
  CoefficientSequence estimate;  // length == truncation
  size_t truncation = 0;
  std::optional<Real> certified_bound;
  std::map<std::string, Real> diagnostics;
  std::map<std::string, std::string> notes;
  std::map<std::string, double> timings;  // seconds
};

}  // namespace dsr
