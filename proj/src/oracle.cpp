#include "smoothcode/oracle.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "smoothcode/code_builder.hpp"
#include "smoothcode/error.hpp"

namespace smoothcode {

namespace {

constexpr double kErrorSlack = 1e-12;

}  // namespace

std::vector<std::vector<unsigned>> enumerate_kraft_length_multisets(unsigned k, unsigned max_len,
                                                                    const OracleLimits& limits) {
  if (k == 0) throw Error(ErrorKind::InvalidInput, "need at least one codeword");
  if (k > limits.max_codewords || max_len > limits.max_len)
    throw Error(ErrorKind::TooLarge, "length enumeration exceeds configured caps");

  std::vector<std::vector<unsigned>> out;
  if (k == 1) out.push_back({0});

  // Kraft budget in units of 2^-max_len.
  const std::uint64_t budget = std::uint64_t{1} << max_len;
  std::vector<unsigned> cur;
  std::function<void(unsigned, std::uint64_t)> rec = [&](unsigned min_len, std::uint64_t used) {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (unsigned len = min_len; len <= max_len; ++len) {
      const std::uint64_t cost = std::uint64_t{1} << (max_len - len);
      // Each remaining word costs at least one unit (length max_len).
      if (used + cost + (k - cur.size() - 1) > budget) continue;
      cur.push_back(len);
      rec(len, used + cost);
      cur.pop_back();
    }
  };
  if (max_len >= 1) rec(1, 0);
  return out;
}

OracleResult optimal_code_bruteforce(const Distribution& p, double eps, double lambda,
                                     unsigned max_len, const OracleLimits& limits) {
  detail::check_epsilon(eps);
  detail::check_lambda(lambda);
  if (p.support_size() > Count(limits.max_support) || max_len > limits.max_len)
    throw Error(ErrorKind::TooLarge, "oracle instance exceeds configured caps");

  const auto probs = p.expanded_probs();
  const std::size_t k = probs.size();

  OracleResult best;
  best.best_moment = std::numeric_limits<double>::infinity();
  std::vector<unsigned> best_lengths;
  std::vector<std::size_t> best_assign;
  std::vector<std::string> best_words;

  std::vector<std::size_t> assign(k, 0);
  for (unsigned c = 1; c <= k; ++c) {
    for (const auto& lengths : enumerate_kraft_length_multisets(c, max_len, limits)) {
      const auto words = assign_canonical_codewords(lengths);
      // Every encoder map symbol -> codeword, as a base-c counter.
      std::fill(assign.begin(), assign.end(), 0);
      while (true) {
        ++best.search_space_size;
        // Decoder: each codeword decodes to its most likely preimage.
        std::vector<double> decoded(c, 0.0);
        double moment = 0.0;
        for (std::size_t x = 0; x < k; ++x) {
          decoded[assign[x]] = std::max(decoded[assign[x]], probs[x]);
          moment += probs[x] * std::exp2(lambda * lengths[assign[x]]);
        }
        double correct = 0.0;
        for (double d : decoded) correct += d;
        const double error = std::max(0.0, 1.0 - correct);
        if (error <= eps + kErrorSlack && moment < best.best_moment) {
          best.best_moment = moment;
          best.credited_error = error;
          best_lengths = lengths;
          best_assign = assign;
          best_words = words.codewords;
        }

        std::size_t pos = 0;
        while (pos < k && ++assign[pos] == c) assign[pos++] = 0;
        if (pos == k) break;
      }
    }
  }
  if (best_assign.empty())
    throw Error(ErrorKind::Infeasible, "no code within the length cap meets the error budget");

  best.encoder.resize(k);
  std::vector<double> decoded_prob(best_words.size(), -1.0);
  for (std::size_t x = 0; x < k; ++x) {
    const auto& w = best_words[best_assign[x]];
    best.encoder[x] = w;
    // Strict '>' keeps the lowest index on ties.
    if (probs[x] > decoded_prob[best_assign[x]]) {
      decoded_prob[best_assign[x]] = probs[x];
      best.decoder[w] = x;
    }
  }
  return best;
}

double smoothing_feasible_search(const Distribution& p, double alpha, double eps, unsigned trials,
                                 std::uint64_t seed, std::size_t max_support) {
  detail::check_alpha(alpha);
  detail::check_epsilon(eps);
  if (p.support_size() > Count(max_support))
    throw Error(ErrorKind::TooLarge, "feasible search support exceeds cap");

  const auto probs = p.expanded_probs();
  const std::size_t k = probs.size();
  auto power_sum = [&](const std::vector<double>& q) {
    double s = 0.0;
    for (double v : q)
      if (v > 0.0) s += std::pow(v, alpha);
    return s;
  };

  double best = power_sum(probs);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> share(k), q(k);
  for (unsigned t = 0; t < trials; ++t) {
    // Propose removing a total b <= eps, spread over symbols by random
    // shares; rejected when some symbol would go below zero.
    const double b = eps * std::sqrt(unit(rng));
    const double sharpness = 1.0 + 8.0 * unit(rng);
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      share[i] = std::pow(unit(rng), sharpness) * probs[i];
      total += share[i];
    }
    if (total <= 0.0) continue;
    bool feasible = true;
    double mass = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      q[i] = probs[i] - b * share[i] / total;
      if (q[i] < 0.0) {
        if (q[i] < -1e-15) feasible = false;
        q[i] = 0.0;
      }
      mass += q[i];
    }
    if (!feasible || mass < 1.0 - eps - 1e-15) continue;
    best = std::min(best, power_sum(q));
  }
  return best;
}

}  // namespace smoothcode
