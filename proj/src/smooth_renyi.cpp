#include "smoothcode/smooth_renyi.hpp"

#include <algorithm>

#include "smoothcode/error.hpp"

namespace smoothcode {

namespace {

// A cumulative mass this close to 1 - eps counts as reaching it, so that
// boundaries such as eps + gamma_eps land on the intended symbol.
constexpr double kBoundarySnap = 1e-12;

// Relative distance at which a symbol count is treated as an integer.
constexpr double kIntegerSnap = 1e-9;

}  // namespace

double SubDistribution::mass_before_k_star() const {
  CompensatedSum s;
  for (std::size_t i = 0; i + 1 < atoms.size(); ++i)
    s.add(std::exp(atoms[i].log_q + atoms[i].log_multiplicity));
  return s.value();
}

std::vector<double> SubDistribution::expanded(const Distribution& parent,
                                              std::size_t limit) const {
  std::vector<double> q(parent.expanded_probs(limit).size(), 0.0);
  std::vector<std::size_t> next(parent.atom_count(), 0);
  std::size_t offset = 0;
  for (std::size_t i = 0; i < parent.atom_count(); ++i) {
    next[i] = offset;
    offset += parent.atom(i).multiplicity.convert_to<std::size_t>();
  }
  for (const auto& a : atoms) {
    const auto mult = a.multiplicity.convert_to<std::size_t>();
    const double v = std::exp(a.log_q);
    for (std::size_t r = 0; r < mult; ++r) q[next[a.parent]++] = v;
  }
  return q;
}

SubDistribution optimal_smoothing(const Distribution& p, double eps) {
  detail::check_epsilon(eps);
  const auto& atoms = p.atoms();

  SubDistribution q;
  q.eps = eps;

  if (eps == 0.0) {
    // No smoothing: Q = P and k* is the last symbol.
    Count before = 0;
    for (std::size_t j = 0; j < atoms.size(); ++j) {
      q.atoms.push_back({j, atoms[j].log_prob, atoms[j].multiplicity, atoms[j].log_multiplicity});
      before += atoms[j].multiplicity;
    }
    // Present the last symbol as its own clipped run for uniformity.
    auto& last = q.atoms.back();
    q.split_atom = last.parent;
    q.kept_in_split = last.multiplicity - 1;
    if (q.kept_in_split == 0) {
      q.atoms.pop_back();
    } else {
      last.multiplicity = q.kept_in_split;
      last.log_multiplicity = log_count(last.multiplicity);
    }
    q.atoms.push_back({q.split_atom, atoms[q.split_atom].log_prob, Count(1), 0.0});
    q.k_star = before;
    q.log_gamma_eps = atoms[q.split_atom].log_prob;
    q.gamma_eps = std::exp(q.log_gamma_eps);
    q.total_mass = p.total_mass();
    return q;
  }

  const double target = 1.0 - eps;
  CompensatedSum cum;
  Count before = 0;
  std::size_t j = 0;
  for (; j < atoms.size(); ++j) {
    if (j + 1 == atoms.size() || cum.value() + atoms[j].mass() >= target - kBoundarySnap) break;
    cum.add(atoms[j].mass());
    before += atoms[j].multiplicity;
    q.atoms.push_back({j, atoms[j].log_prob, atoms[j].multiplicity, atoms[j].log_multiplicity});
  }

  const auto& a = atoms[j];
  const double remaining = std::max(target - cum.value(), 0.0);
  // t = remaining / P(x): how many symbols of atom j the remaining mass covers.
  const double log_t = std::log(remaining) - a.log_prob;

  Count kept = 0;
  double frac = 1.0;
  if (log_t >= std::log(2.0) * 52) {
    // Far beyond double resolution: the clip lands on a whole symbol.
    kept = count_from_log(log_t) - 1;
  } else {
    double t = a.log_prob > -700.0 ? remaining / a.prob() : std::exp(log_t);
    const double nearest = std::round(t);
    if (std::abs(t - nearest) <= kIntegerSnap * std::max(1.0, t)) t = nearest;
    if (t <= 0.0) t = std::numeric_limits<double>::min();
    const double whole = std::ceil(t) - 1.0;
    kept = Count(static_cast<std::uint64_t>(whole));
    frac = t - whole;
  }
  if (kept >= a.multiplicity) {
    kept = a.multiplicity - 1;
    frac = 1.0;
  }

  if (kept > 0) q.atoms.push_back({j, a.log_prob, kept, log_count(kept)});
  q.split_atom = j;
  q.kept_in_split = kept;
  q.log_gamma_eps = a.log_prob + std::log(frac);
  q.gamma_eps = std::exp(q.log_gamma_eps);
  q.atoms.push_back({j, q.log_gamma_eps, Count(1), 0.0});
  q.k_star = before + kept + 1;

  cum.add(std::exp(a.log_prob + log_count(kept)));
  cum.add(q.gamma_eps);
  q.total_mass = cum.value();
  return q;
}

double log_power_sum(const SubDistribution& q, double alpha) {
  LogSumExp acc;
  for (const auto& a : q.atoms) acc.add(alpha * a.log_q + a.log_multiplicity);
  return acc.value();
}

double log_r_alpha_eps(const Distribution& p, double alpha, double eps) {
  detail::check_alpha(alpha);
  detail::check_epsilon(eps);
  return log_power_sum(optimal_smoothing(p, eps), alpha);
}

double r_alpha_eps(const Distribution& p, double alpha, double eps) {
  return std::exp(log_r_alpha_eps(p, alpha, eps));
}

double smooth_renyi_entropy(const Distribution& p, double alpha, double eps) {
  return log_r_alpha_eps(p, alpha, eps) / (1.0 - alpha);
}

double smooth_max_entropy(const Distribution& p, double eps) {
  detail::check_epsilon(eps);
  return log_count(optimal_smoothing(p, eps).k_star);
}

}  // namespace smoothcode
