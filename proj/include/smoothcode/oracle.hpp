#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "smoothcode/distribution.hpp"

namespace smoothcode {

struct OracleLimits {
  unsigned max_codewords = 8;
  unsigned max_len = 8;
  unsigned max_support = 5;
};

/// All nondecreasing length tuples of size k in [1, max_len] with Kraft
/// sum <= 1, plus the empty-word tuple (0) when k == 1.
std::vector<std::vector<unsigned>> enumerate_kraft_length_multisets(
    unsigned k, unsigned max_len, const OracleLimits& limits = {});

struct OracleResult {
  double best_moment = 0.0;
  double credited_error = 0.0;
  std::vector<std::string> encoder;          // codeword of each sorted symbol
  std::map<std::string, std::size_t> decoder;  // codeword -> sorted symbol
  std::uint64_t search_space_size = 0;
};

/// Exhaustive minimum of E[2^{lambda |phi(X)|}] over deterministic prefix
/// codes with codeword length <= max_len and error <= eps.
OracleResult optimal_code_bruteforce(const Distribution& p, double eps, double lambda,
                                     unsigned max_len, const OracleLimits& limits = {});

/// Smallest sum Q^alpha seen over `trials` random members of the smoothing
/// ball, deterministic in `seed`.
double smoothing_feasible_search(const Distribution& p, double alpha, double eps,
                                 unsigned trials, std::uint64_t seed,
                                 std::size_t max_support = 8);

}  // namespace smoothcode
