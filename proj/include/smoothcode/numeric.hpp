#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

#include <boost/multiprecision/cpp_int.hpp>

namespace smoothcode {

/// Exact nonnegative count (multiplicities, symbol indices of product alphabets).
using Count = boost::multiprecision::cpp_int;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kLn2 = 0.69314718055994530942;

/// Natural log of an exact count; returns -inf for zero.
double log_count(const Count& c);

/// floor(exp(log_value)) as an exact count, for log_value of any size.
Count count_from_log(double log_value);

/// Converts a count to uint64, throwing Error(TooLarge) if it does not fit.
std::uint64_t to_u64(const Count& c);

double log_sum_exp(std::span<const double> terms);

// Streaming log-sum-exp: keeps a running maximum so that terms far below the
// current max cost one exp each and never overflow.
class LogSumExp {
 public:
  void add(double log_term);
  double value() const;  // -inf when empty

 private:
  double max_ = kNegInf;
  double scaled_sum_ = 0.0;
};

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace smoothcode
