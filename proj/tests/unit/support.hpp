// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include "bisph/error.hpp"

namespace testing {

/// Kind of the bisph::Error thrown by fn, or empty when nothing is thrown.
template <class Fn>
std::optional<bisph::ErrorKind> error_of(Fn&& fn) {
  try {
    fn();
  } catch (const bisph::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

inline double rel_diff(double a, double b) {
  double scale = a < 0 ? -a : a;
  double d = a - b;
  if (d < 0) d = -d;
  return scale > 0 ? d / scale : d;
}

} // namespace testing
