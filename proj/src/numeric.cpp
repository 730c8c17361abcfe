#include "smoothcode/numeric.hpp"

#include <algorithm>
#include <string>

#include "smoothcode/error.hpp"

namespace smoothcode {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::Empty: return "Empty";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::BadEpsilon: return "BadEpsilon";
    case ErrorKind::BadAlpha: return "BadAlpha";
    case ErrorKind::BadLambda: return "BadLambda";
    case ErrorKind::KraftViolated: return "KraftViolated";
    case ErrorKind::Misaligned: return "Misaligned";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::SandwichViolated: return "SandwichViolated";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

namespace detail {

void check_epsilon(double eps) {
  if (!(eps >= 0.0 && eps < 1.0))
    throw Error(ErrorKind::BadEpsilon, "eps must be in [0,1)");
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw Error(ErrorKind::BadAlpha, "alpha must be in (0,1)");
}

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw Error(ErrorKind::BadLambda, "lambda must be > 0");
}

}  // namespace detail

double log_count(const Count& c) {
  if (c <= 0) return kNegInf;
  const auto msb = boost::multiprecision::msb(c);
  if (msb < 1000) return std::log(c.convert_to<double>());
  // Keep the top 64 bits; the discarded tail is below double precision.
  const auto shift = static_cast<unsigned>(msb - 63);
  const Count top = c >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * kLn2;
}

Count count_from_log(double log_value) {
  if (log_value < 0.0) return 0;
  if (log_value < 700.0) {
    const double v = std::floor(std::exp(log_value));
    if (v < 9007199254740992.0) return Count(static_cast<std::uint64_t>(v));
    // Beyond 2^53 the low bits of a double are zero anyway.
    int exp2 = 0;
    const double mant = std::frexp(v, &exp2);
    const auto top = static_cast<std::uint64_t>(std::ldexp(mant, 53));
    return Count(top) << (exp2 - 53);
  }
  const double log2_value = log_value / kLn2;
  const double whole = std::floor(log2_value);
  const double frac = log2_value - whole;
  const auto top = static_cast<std::uint64_t>(std::ldexp(std::exp2(frac), 52));
  return Count(top) << static_cast<unsigned>(whole - 52.0);
}

std::uint64_t to_u64(const Count& c) {
  if (c < 0 || c > Count(std::numeric_limits<std::uint64_t>::max()))
    throw Error(ErrorKind::TooLarge, "count does not fit in 64 bits");
  return c.convert_to<std::uint64_t>();
}

double log_sum_exp(std::span<const double> terms) {
  LogSumExp acc;
  for (double t : terms) acc.add(t);
  return acc.value();
}

void LogSumExp::add(double log_term) {
  if (log_term == kNegInf) return;
  if (log_term <= max_) {
    scaled_sum_ += std::exp(log_term - max_);
  } else {
    scaled_sum_ = scaled_sum_ * std::exp(max_ - log_term) + 1.0;
    max_ = log_term;
  }
}

double LogSumExp::value() const {
  if (max_ == kNegInf) return kNegInf;
  return max_ + std::log(scaled_sum_);
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    compensation_ += (sum_ - t) + x;
  else
    compensation_ += (x - t) + sum_;
  sum_ = t;
}

}  // namespace smoothcode
