#pragma once

#include <cstddef>
#include <vector>

#include "smoothcode/distribution.hpp"

namespace smoothcode {

/// One run of equal sub-probabilities inside a parent atom.
struct SubAtom {
  std::size_t parent = 0;  // index into the parent Distribution's atoms
  double log_q = 0.0;
  Count multiplicity = 1;
  double log_multiplicity = 0.0;
};

// Minimizer of sum Q^alpha over the smoothing ball: keep the k*-1 most likely
// symbols, clip the k*-th to gamma_eps, drop the rest. Only the support of Q
// is stored; the atoms follow the parent's sorted order.
struct SubDistribution {
  std::vector<SubAtom> atoms;
  double eps = 0.0;
  Count k_star = 1;             // 1-based expanded index of the clipped symbol
  std::size_t split_atom = 0;   // parent atom holding symbol k*
  Count kept_in_split = 0;      // symbols of split_atom fully kept before k*
  double gamma_eps = 0.0;       // Q(k*), in (0, P(k*)]
  double log_gamma_eps = 0.0;
  double total_mass = 0.0;

  /// Mass of the symbols strictly before k*.
  double mass_before_k_star() const;

  /// Q of every expanded symbol of `parent`, aligned to its sorted order.
  std::vector<double> expanded(const Distribution& parent,
                               std::size_t limit = 1u << 20) const;
};

SubDistribution optimal_smoothing(const Distribution& p, double eps);

/// log of sum_x Q(x)^alpha over the support of q.
double log_power_sum(const SubDistribution& q, double alpha);

double r_alpha_eps(const Distribution& p, double alpha, double eps);
double log_r_alpha_eps(const Distribution& p, double alpha, double eps);

/// Smooth Renyi entropy of order alpha in (0, 1), nats.
double smooth_renyi_entropy(const Distribution& p, double alpha, double eps);

/// Smooth max entropy: log of the fewest symbols carrying mass >= 1 - eps.
double smooth_max_entropy(const Distribution& p, double eps);

}  // namespace smoothcode
