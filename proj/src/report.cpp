// SPDX-License-Identifier: Apache-2.0
#include "dsr/report.hpp"

#include "dsr/error.hpp"

namespace dsr {

std::string to_string(Method m) {
  switch (m) {
    case Method::biortho:
      return "biortho";
    case Method::peeling:
      return "peeling";
    default:
      return "vandermonde";
  }
}

Method method_from_string(const std::string& s) {
  if (s == "biortho") return Method::biortho;
  if (s == "peeling") return Method::peeling;
  if (s == "vandermonde") return Method::vandermonde;
  fail(Errc::invalid_argument, "unknown method '" + s + "' (biortho, peeling, vandermonde)");
}

}  // namespace dsr
