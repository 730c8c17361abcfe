#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace smoothcode {

enum class ErrorKind {
  NotNormalized,
  Empty,
  TooLarge,
  BadEpsilon,
  BadAlpha,
  BadLambda,
  KraftViolated,
  Misaligned,
  Infeasible,
  SandwichViolated,
  InvalidInput,
};

std::string_view to_string(ErrorKind kind) noexcept;

// All library failures are reported through this one exception type; the
// kind distinguishes validation problems from size limits and internal bugs.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

namespace detail {
void check_epsilon(double eps);
void check_alpha(double alpha);
void check_lambda(double lambda);
}  // namespace detail

}  // namespace smoothcode
