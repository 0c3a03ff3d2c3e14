// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace bisph {

enum class ErrorKind {
  InvalidDimension,
  Domain,
  UndefinedExponent,
  ExponentOrder,
  Boundary,
  Resolution,
  Shape,
  Unsupported,
  Io,
  Parse,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

} // namespace bisph
