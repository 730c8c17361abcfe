#include "smoothcode/asymptotics.hpp"

#include <algorithm>

#include "smoothcode/error.hpp"
#include "smoothcode/smooth_renyi.hpp"

namespace smoothcode {

namespace {

constexpr double kPredicateSlack = 1e-12;

bool satisfies(double self_info, const SpectrumQuery& q) {
  switch (q.direction) {
    case SpectrumDirection::AtLeast: return self_info >= q.threshold - kPredicateSlack;
    case SpectrumDirection::AtMost: return self_info <= q.threshold + kPredicateSlack;
    case SpectrumDirection::Within:
      return std::abs(self_info - q.threshold) <= q.width + kPredicateSlack;
  }
  return false;
}

}  // namespace

RateSeries entropy_rate_series(const MixtureSpec& spec, double alpha, double eps,
                               const std::vector<unsigned>& n_list, std::size_t cap) {
  detail::check_alpha(alpha);
  detail::check_epsilon(eps);
  RateSeries s;
  s.alpha = alpha;
  s.eps = eps;
  s.limit = theoretical_limit(spec, eps).entropy;
  for (unsigned n : n_list) {
    const auto pn = mixture_extension(spec, n, cap);
    s.entries.push_back({n, smooth_renyi_entropy(pn, alpha, eps) / n});
  }
  return s;
}

LimitComponent theoretical_limit(const MixtureSpec& spec, double eps) {
  detail::check_epsilon(eps);
  const auto& a = spec.cumulative_weights();
  // a has m + 1 entries; find i with a[i-1] <= eps < a[i] (1-based component i).
  std::size_t i = 1;
  while (i < spec.size() && eps >= a[i]) ++i;
  return {i, spec.entropies()[i - 1]};
}

double achievable_exponent(const MixtureSpec& spec, double lambda, double eps) {
  detail::check_lambda(lambda);
  return lambda * theoretical_limit(spec, eps).entropy;
}

double spectrum_probability(const Distribution& pn, const SpectrumQuery& query) {
  const double n = pn.blocklength();
  CompensatedSum mass;
  for (const auto& a : pn.atoms())
    if (satisfies(-a.log_prob / n, query)) mass.add(a.mass());
  return mass.value();
}

double spectrum_probability(const MixtureSpec& spec, const SpectrumQuery& query, std::size_t cap) {
  if (query.n == 0) throw Error(ErrorKind::InvalidInput, "blocklength must be positive");
  if (query.direction == SpectrumDirection::Within && !(query.width >= 0.0))
    throw Error(ErrorKind::InvalidInput, "spectrum width must be nonnegative");
  return spectrum_probability(mixture_extension(spec, query.n, cap), query);
}

RateWindow finite_n_window(const MixtureSpec& spec, double alpha, double eps, double gamma,
                           unsigned n) {
  detail::check_alpha(alpha);
  const auto limit = theoretical_limit(spec, eps);
  const double m = static_cast<double>(spec.size());
  const double spread = (1.0 + alpha) / (1.0 - alpha) * gamma;
  const double beta = std::min(m * gamma, spec.components()[limit.index - 1].weight);
  RateWindow w;
  w.lower = limit.entropy - spread + std::log(beta) / (n * (1.0 - alpha));
  w.upper = limit.entropy + spread + std::log(m) / n;
  return w;
}

std::vector<unsigned> power_of_two_schedule(unsigned max_n) {
  std::vector<unsigned> out;
  for (unsigned n = 1; n <= max_n && n != 0; n *= 2) out.push_back(n);
  return out;
}

}  // namespace smoothcode
