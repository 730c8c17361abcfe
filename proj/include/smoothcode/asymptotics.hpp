#pragma once

#include <cstddef>
#include <vector>

#include "smoothcode/distribution.hpp"

namespace smoothcode {

struct RateEntry {
  unsigned n = 0;
  double value = 0.0;  // (1/n) H^eps_alpha(P_{X^n}), nats per symbol
};

struct RateSeries {
  std::vector<RateEntry> entries;
  double alpha = 0.0;
  double eps = 0.0;
  double limit = 0.0;
};

RateSeries entropy_rate_series(const MixtureSpec& spec, double alpha, double eps,
                               const std::vector<unsigned>& n_list,
                               std::size_t cap = kDefaultTypeClassCap);

struct LimitComponent {
  std::size_t index = 1;  // 1-based component index
  double entropy = 0.0;
};

/// Component i with A_i <= eps < A_{i+1} and its entropy.
LimitComponent theoretical_limit(const MixtureSpec& spec, double eps);

/// lambda * H(X_i) for the component selected by eps.
double achievable_exponent(const MixtureSpec& spec, double lambda, double eps);

enum class SpectrumDirection { AtLeast, AtMost, Within };

struct SpectrumQuery {
  unsigned n = 1;
  double threshold = 0.0;  // nats per symbol
  SpectrumDirection direction = SpectrumDirection::Within;
  double width = 0.0;      // half-width for Within
};

/// Exact Pr{(1/n) log 1/P(X^n) satisfies the query}.
double spectrum_probability(const MixtureSpec& spec, const SpectrumQuery& query,
                            std::size_t cap = kDefaultTypeClassCap);

/// Same, for an extension that has already been built.
double spectrum_probability(const Distribution& pn, const SpectrumQuery& query);

struct RateWindow {
  double lower = 0.0;
  double upper = 0.0;
};

/// Finite-n two-sided bounds on (1/n) H^eps_alpha(P_{X^n}) for eps interior
/// to [A_i, A_{i+1}) at spectrum resolution gamma:
///   H_i -+ (1+alpha)/(1-alpha) gamma, widened by log(beta)/(n(1-alpha))
///   below and log(m)/n above, beta = min(m gamma, alpha_i).
RateWindow finite_n_window(const MixtureSpec& spec, double alpha, double eps,
                           double gamma, unsigned n);

/// Log-spaced default schedule 1, 2, 4, ... up to max_n.
std::vector<unsigned> power_of_two_schedule(unsigned max_n);

}  // namespace smoothcode
