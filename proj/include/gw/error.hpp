#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gw {

/// Base class for every error raised by the workbench.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad JSON shape, unknown ids, syntax errors.
class InputError : public Error {
public:
  using Error::Error;
};

/// A computation would exceed the configured element cap.
class ResourceCapExceeded : public Error {
public:
  using Error::Error;
};

/// One violated axiom instance, e.g. kind "NonAssociative" with the
/// witnessing triple in `detail`.
struct Violation {
  std::string kind;
  std::string detail;
};

/// Raised by validators; carries every violation found, not just the first.
class ValidationError : public Error {
public:
  explicit ValidationError(std::vector<Violation> violations)
      : Error(summarize(violations)), violations_(std::move(violations)) {}
  ValidationError(std::string kind, std::string detail)
      : ValidationError(std::vector<Violation>{{std::move(kind), std::move(detail)}}) {}

  const std::vector<Violation> &violations() const { return violations_; }

  bool has(const std::string &kind) const {
    for (const auto &v : violations_)
      if (v.kind == kind) return true;
    return false;
  }

private:
  static std::string summarize(const std::vector<Violation> &vs) {
    std::string out;
    for (const auto &v : vs) {
      if (!out.empty()) out += "; ";
      out += v.kind + "(" + v.detail + ")";
    }
    return out.empty() ? "validation failed" : out;
  }

  std::vector<Violation> violations_;
};

} // namespace gw
