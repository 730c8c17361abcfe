#include "smoothcode/distribution.hpp"

#include <algorithm>
#include <functional>
#include <string>

#include "smoothcode/error.hpp"

namespace smoothcode {

namespace {

constexpr double kMassTolerance = 1e-9;
constexpr double kSpecTolerance = 1e-12;

void check_cap(unsigned n, std::size_t letters, std::size_t cap) {
  const Count classes = type_class_count(n, letters);
  if (classes > Count(cap))
    throw Error(ErrorKind::TooLarge, "type-class count " + classes.str() +
                                         " exceeds cap " + std::to_string(cap));
}

// Visits every composition (c_0, ..., c_{k-1}) of n together with its
// multinomial coefficient n! / prod c_s!.
void for_each_type(unsigned n, std::size_t k,
                   const std::function<void(const std::vector<unsigned>&, const Count&)>& visit) {
  std::vector<unsigned> counts(k, 0);
  std::function<void(std::size_t, unsigned, const Count&)> rec =
      [&](std::size_t s, unsigned remaining, const Count& coef) {
        if (s + 1 == k) {
          counts[s] = remaining;
          visit(counts, coef);
          return;
        }
        // C(remaining, c) for c = 0, 1, ... by the multiplicative recurrence.
        Count binom = 1;
        for (unsigned c = 0; c <= remaining; ++c) {
          counts[s] = c;
          rec(s + 1, remaining - c, coef * binom);
          binom = binom * (remaining - c) / (c + 1);
        }
      };
  rec(0, n, Count(1));
}

}  // namespace

WeightedAtom::WeightedAtom(double lp, Count m, std::optional<std::uint64_t> t)
    : log_prob(lp), multiplicity(std::move(m)), log_multiplicity(log_count(multiplicity)), tag(t) {}

Distribution Distribution::from_atoms(std::vector<WeightedAtom> atoms, unsigned blocklength) {
  std::erase_if(atoms, [](const WeightedAtom& a) { return a.log_prob == kNegInf; });
  if (atoms.empty()) throw Error(ErrorKind::Empty, "distribution has no positive mass");
  for (const auto& a : atoms) {
    if (!std::isfinite(a.log_prob) || a.log_prob > 1e-12)
      throw Error(ErrorKind::InvalidInput, "atom log_prob must be finite and <= 0");
    if (a.multiplicity < 1)
      throw Error(ErrorKind::InvalidInput, "atom multiplicity must be >= 1");
  }

  std::stable_sort(atoms.begin(), atoms.end(), [](const WeightedAtom& a, const WeightedAtom& b) {
    if (a.log_prob != b.log_prob) return a.log_prob > b.log_prob;
    if (a.tag && b.tag) return *a.tag < *b.tag;
    return false;
  });

  Distribution d;
  d.blocklength_ = blocklength;
  for (auto& a : atoms) {
    if (!d.atoms_.empty() &&
        d.atoms_.back().log_prob - a.log_prob <= kMergeTolerance) {
      auto& rep = d.atoms_.back();
      rep.multiplicity += a.multiplicity;
      rep.log_multiplicity = log_count(rep.multiplicity);
      if (a.tag && (!rep.tag || *a.tag < *rep.tag)) rep.tag = a.tag;
      continue;
    }
    d.atoms_.push_back(std::move(a));
  }
  for (const auto& a : d.atoms_) d.support_size_ += a.multiplicity;

  const double mass = d.total_mass();
  if (std::abs(mass - 1.0) > kMassTolerance)
    throw Error(ErrorKind::NotNormalized, "total mass " + std::to_string(mass) + " is not 1");
  return d;
}

double Distribution::total_mass() const {
  CompensatedSum s;
  for (const auto& a : atoms_) s.add(a.mass());
  return s.value();
}

std::vector<double> Distribution::expanded_probs(std::size_t limit) const {
  if (support_size_ > Count(limit))
    throw Error(ErrorKind::TooLarge, "support too large to expand");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(support_size_));
  for (const auto& a : atoms_)
    out.insert(out.end(), a.multiplicity.convert_to<std::size_t>(), a.prob());
  return out;
}

std::vector<std::size_t> Distribution::expanded_atom_index(std::size_t limit) const {
  if (support_size_ > Count(limit))
    throw Error(ErrorKind::TooLarge, "support too large to expand");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    out.insert(out.end(), atoms_[i].multiplicity.convert_to<std::size_t>(), i);
  return out;
}

Distribution new_distribution(std::span<const double> probs) {
  CompensatedSum total;
  bool any_positive = false;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw Error(ErrorKind::InvalidInput, "probabilities must be finite and nonnegative");
    any_positive = any_positive || p > 0.0;
    total.add(p);
  }
  if (!any_positive) throw Error(ErrorKind::Empty, "distribution has no positive entry");
  const double sum = total.value();
  if (std::abs(sum - 1.0) > kMassTolerance)
    throw Error(ErrorKind::NotNormalized,
                "probabilities sum to " + std::to_string(sum) + ", not 1");

  std::vector<WeightedAtom> atoms;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] == 0.0) continue;
    atoms.emplace_back(std::log(probs[i] / sum), Count(1), i);
  }
  return Distribution::from_atoms(std::move(atoms), 1);
}

Count type_class_count(unsigned n, std::size_t k) {
  // C(n + k - 1, k - 1)
  Count c = 1;
  for (std::size_t i = 1; i < k; ++i) c = c * (n + i) / i;
  return c;
}

Distribution iid_extension(const Distribution& base, unsigned n, std::size_t cap) {
  if (base.blocklength() != 1)
    throw Error(ErrorKind::InvalidInput, "iid_extension needs a base distribution (n = 1)");
  if (n == 0) throw Error(ErrorKind::InvalidInput, "blocklength must be positive");
  if (n == 1) return base;

  const auto& atoms = base.atoms();
  const std::size_t k = atoms.size();
  check_cap(n, k, cap);

  // Types are taken over base atoms: a sequence choosing c_j symbols from
  // atom j has probability prod p_j^{c_j}, and there are
  // multinomial(n; c) * prod m_j^{c_j} such sequences.
  std::vector<WeightedAtom> out;
  std::uint64_t tag = 0;
  for_each_type(n, k, [&](const std::vector<unsigned>& c, const Count& coef) {
    double lp = 0.0;
    Count mult = coef;
    for (std::size_t j = 0; j < k; ++j) {
      if (c[j] == 0) continue;
      lp += static_cast<double>(c[j]) * atoms[j].log_prob;
      if (atoms[j].multiplicity != 1) mult *= boost::multiprecision::pow(atoms[j].multiplicity, c[j]);
    }
    out.emplace_back(lp, std::move(mult), tag++);
  });
  return Distribution::from_atoms(std::move(out), n);
}

double shannon_entropy(std::span<const double> probs) {
  CompensatedSum total, h;
  for (double p : probs) {
    if (!(p >= 0.0)) throw Error(ErrorKind::InvalidInput, "negative probability");
    total.add(p);
    if (p > 0.0) h.add(-p * std::log(p));
  }
  if (std::abs(total.value() - 1.0) > kMassTolerance)
    throw Error(ErrorKind::NotNormalized, "probabilities do not sum to 1");
  return h.value();
}

MixtureSpec::MixtureSpec(std::vector<MixtureComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw Error(ErrorKind::Empty, "mixture has no components");
  const std::size_t k = components_.front().probs.size();
  if (k == 0) throw Error(ErrorKind::Empty, "mixture alphabet is empty");

  CompensatedSum weights;
  for (const auto& c : components_) {
    if (!(c.weight > 0.0 && c.weight <= 1.0))
      throw Error(ErrorKind::InvalidInput, "mixture weights must be in (0,1]");
    if (c.probs.size() != k)
      throw Error(ErrorKind::InvalidInput, "mixture components must share one alphabet");
    CompensatedSum mass;
    for (double p : c.probs) {
      if (!(p >= 0.0)) throw Error(ErrorKind::InvalidInput, "negative probability");
      mass.add(p);
    }
    if (std::abs(mass.value() - 1.0) > kSpecTolerance)
      throw Error(ErrorKind::NotNormalized, "component probabilities do not sum to 1");
    weights.add(c.weight);
  }
  if (std::abs(weights.value() - 1.0) > kSpecTolerance)
    throw Error(ErrorKind::NotNormalized, "mixture weights do not sum to 1");

  cumulative_.push_back(0.0);
  CompensatedSum acc;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    entropies_.push_back(shannon_entropy(components_[i].probs));
    if (i > 0 && !(entropies_[i - 1] > entropies_[i]))
      throw Error(ErrorKind::InvalidInput,
                  "mixture components must have strictly decreasing entropy");
    if (i + 1 < components_.size()) {
      acc.add(components_[i].weight);
      cumulative_.push_back(acc.value());
    }
  }
  cumulative_.push_back(1.0);
}

Distribution mixture_extension(const MixtureSpec& spec, unsigned n, std::size_t cap) {
  if (n == 0) throw Error(ErrorKind::InvalidInput, "blocklength must be positive");
  const std::size_t k = spec.alphabet_size();
  const std::size_t m = spec.size();
  check_cap(n, k, cap);

  std::vector<double> log_weight(m);
  std::vector<std::vector<double>> log_p(m, std::vector<double>(k));
  for (std::size_t i = 0; i < m; ++i) {
    log_weight[i] = std::log(spec.components()[i].weight);
    for (std::size_t s = 0; s < k; ++s) log_p[i][s] = std::log(spec.components()[i].probs[s]);
  }

  std::vector<WeightedAtom> out;
  std::uint64_t tag = 0;
  for_each_type(n, k, [&](const std::vector<unsigned>& c, const Count& coef) {
    LogSumExp mix;
    for (std::size_t i = 0; i < m; ++i) {
      double lp = log_weight[i];
      for (std::size_t s = 0; s < k && lp != kNegInf; ++s)
        if (c[s] > 0) lp += static_cast<double>(c[s]) * log_p[i][s];
      mix.add(lp);
    }
    const double lp = mix.value();
    if (lp != kNegInf) out.emplace_back(lp, coef, tag);
    ++tag;
  });
  return Distribution::from_atoms(std::move(out), n);
}

}  // namespace smoothcode
