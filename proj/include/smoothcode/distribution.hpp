#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "smoothcode/numeric.hpp"

namespace smoothcode {

inline constexpr std::size_t kDefaultTypeClassCap = 2'000'000;

/// Atoms whose log-probabilities differ by at most this much are merged.
inline constexpr double kMergeTolerance = 1e-12;

/// A class of `multiplicity` elements, each of probability exp(log_prob).
struct WeightedAtom {
  double log_prob = 0.0;
  Count multiplicity = 1;
  double log_multiplicity = 0.0;  // cached log(multiplicity)
  std::optional<std::uint64_t> tag;

  WeightedAtom() = default;
  WeightedAtom(double log_prob, Count multiplicity,
               std::optional<std::uint64_t> tag = std::nullopt);

  double log_mass() const { return log_prob + log_multiplicity; }
  double prob() const { return std::exp(log_prob); }
  double mass() const { return std::exp(log_mass()); }
};

// A finite distribution stored as atoms sorted by strictly descending
// probability. The expanded symbol order (each atom repeated multiplicity
// times) is the canonical "sorted symbol order" used everywhere else.
class Distribution {
 public:
  /// Validates, drops zero-probability atoms, sorts and merges equal ones.
  /// Throws NotNormalized if the total mass is off by more than 1e-9.
  static Distribution from_atoms(std::vector<WeightedAtom> atoms,
                                 unsigned blocklength = 1);

  const std::vector<WeightedAtom>& atoms() const { return atoms_; }
  std::size_t atom_count() const { return atoms_.size(); }
  const WeightedAtom& atom(std::size_t i) const { return atoms_[i]; }
  unsigned blocklength() const { return blocklength_; }

  /// Number of expanded symbols with positive probability.
  const Count& support_size() const { return support_size_; }
  double total_mass() const;

  /// Probability of every expanded symbol, largest first.
  /// Throws TooLarge when the support exceeds `limit`.
  std::vector<double> expanded_probs(std::size_t limit = 1u << 20) const;

  /// Atom index of every expanded symbol.
  std::vector<std::size_t> expanded_atom_index(std::size_t limit = 1u << 20) const;

 private:
  Distribution() = default;

  std::vector<WeightedAtom> atoms_;
  unsigned blocklength_ = 1;
  Count support_size_ = 0;
};

/// Builds a base distribution from plain probabilities. Zero entries are
/// dropped and the remaining masses rescaled to sum exactly to one.
Distribution new_distribution(std::span<const double> probs);

/// i.i.d. extension of a base (n = 1) distribution, one atom per type class
/// over the base atoms.
Distribution iid_extension(const Distribution& base, unsigned n,
                           std::size_t cap = kDefaultTypeClassCap);

/// Shannon entropy in nats.
double shannon_entropy(std::span<const double> probs);

struct MixtureComponent {
  double weight = 0.0;
  std::vector<double> probs;
};

// Mixture of i.i.d. sources over a common finite alphabet, components sorted
// by strictly decreasing entropy.
class MixtureSpec {
 public:
  explicit MixtureSpec(std::vector<MixtureComponent> components);

  const std::vector<MixtureComponent>& components() const { return components_; }
  std::size_t size() const { return components_.size(); }
  std::size_t alphabet_size() const { return components_.front().probs.size(); }

  /// Component entropies in nats.
  const std::vector<double>& entropies() const { return entropies_; }

  /// Cumulative weights A_1..A_{m+1}: front() == 0, back() == 1.
  const std::vector<double>& cumulative_weights() const { return cumulative_; }

 private:
  std::vector<MixtureComponent> components_;
  std::vector<double> entropies_;
  std::vector<double> cumulative_;
};

/// Blocklength-n distribution of the mixture, one atom per type class.
Distribution mixture_extension(const MixtureSpec& spec, unsigned n,
                               std::size_t cap = kDefaultTypeClassCap);

/// Number of type classes C(n + k - 1, k - 1) of length-n sequences over k letters.
Count type_class_count(unsigned n, std::size_t k);

}  // namespace smoothcode
