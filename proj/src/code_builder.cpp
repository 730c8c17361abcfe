#include "smoothcode/code_builder.hpp"

#include <algorithm>
#include <numeric>

#include "smoothcode/error.hpp"

namespace smoothcode {

namespace {

// -log2 Qt within this of an integer is taken to be that integer.
constexpr double kLengthSnap = 1e-9;
constexpr double kRejectTie = 1e-12;

}  // namespace

TiltedDistribution tilted_distribution(const SubDistribution& q, double lambda) {
  detail::check_lambda(lambda);
  if (q.atoms.empty()) throw Error(ErrorKind::Empty, "cannot tilt an empty sub-distribution");
  const double alpha = 1.0 / (1.0 + lambda);
  const double log_norm = log_power_sum(q, alpha);

  TiltedDistribution t;
  t.lambda = lambda;
  t.atoms.reserve(q.atoms.size());
  for (const auto& a : q.atoms)
    t.atoms.push_back({a.parent, alpha * a.log_q - log_norm, a.multiplicity, a.log_multiplicity});
  return t;
}

bool kraft_holds(std::span<const unsigned> lengths, std::span<const Count> multiplicities) {
  if (lengths.empty()) return true;
  const unsigned top = *std::max_element(lengths.begin(), lengths.end());
  Count sum = 0;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    const Count m = multiplicities.empty() ? Count(1) : multiplicities[i];
    sum += m << (top - lengths[i]);
  }
  return sum <= (Count(1) << top);
}

bool kraft_holds(std::span<const unsigned> lengths) { return kraft_holds(lengths, {}); }

std::vector<unsigned> shannon_lengths(const TiltedDistribution& qt) {
  const std::size_t k = qt.atoms.size();
  std::vector<double> exact(k);
  std::vector<unsigned> lengths(k);
  std::vector<Count> mults(k);
  for (std::size_t i = 0; i < k; ++i) {
    exact[i] = std::max(0.0, -qt.atoms[i].log_qt / kLn2);
    lengths[i] = static_cast<unsigned>(std::ceil(exact[i] - kLengthSnap));
    mults[i] = qt.atoms[i].multiplicity;
  }
  if (kraft_holds(lengths, mults)) return lengths;

  // Snapping pulled some length below -log2 Qt by rounding noise and broke
  // Kraft. Undo snaps first (keeps the length within one bit of -log2 Qt),
  // then lengthen, least slack first.
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lengths[a] - exact[a] < lengths[b] - exact[b];
  });
  for (std::size_t i : order) {
    if (static_cast<double>(lengths[i]) < exact[i]) {
      lengths[i] = static_cast<unsigned>(std::ceil(exact[i]));
      if (kraft_holds(lengths, mults)) return lengths;
    }
  }
  while (!kraft_holds(lengths, mults))
    for (std::size_t i : order) {
      ++lengths[i];
      if (kraft_holds(lengths, mults)) break;
    }
  return lengths;
}

PrefixCode assign_canonical_codewords(std::span<const unsigned> lengths_bits) {
  if (!kraft_holds(lengths_bits))
    throw Error(ErrorKind::KraftViolated, "lengths violate the Kraft inequality");

  std::vector<std::size_t> order(lengths_bits.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return lengths_bits[a] < lengths_bits[b];
  });

  PrefixCode code;
  code.lengths_bits.assign(lengths_bits.begin(), lengths_bits.end());
  code.codewords.resize(lengths_bits.size());
  std::string current;
  bool first = true;
  for (std::size_t idx : order) {
    if (!first) {
      // Binary increment; Kraft guarantees no carry out of the top bit.
      std::size_t pos = current.size();
      while (pos > 0 && current[pos - 1] == '1') current[--pos] = '0';
      if (pos == 0) throw Error(ErrorKind::KraftViolated, "codeword space exhausted");
      current[pos - 1] = '1';
    }
    current.resize(lengths_bits[idx], '0');
    code.codewords[idx] = current;
    first = false;
  }
  return code;
}

bool is_prefix_free(std::span<const std::string> codewords) {
  std::vector<std::string> sorted(codewords.begin(), codewords.end());
  std::sort(sorted.begin(), sorted.end());
  // After sorting, a prefix is always immediately followed by one of its extensions.
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
    if (sorted[i + 1].compare(0, sorted[i].size(), sorted[i]) == 0) return false;
  return true;
}

std::vector<double> ideal_real_lengths(const SubDistribution& q, double lambda) {
  const auto t = tilted_distribution(q, lambda);
  std::vector<double> out;
  out.reserve(t.atoms.size());
  for (const auto& a : t.atoms) out.push_back(-a.log_qt);
  return out;
}

std::optional<unsigned> FlagCode::accepted_bits(const CodeSegment& s) const {
  if (!s.inner_bits) return std::nullopt;
  return 1 + *s.inner_bits;
}

unsigned FlagCode::max_bits() const {
  unsigned top = 0;
  for (const auto& s : segments) {
    if (s.gamma > 0.0 && s.inner_bits) top = std::max(top, 1 + *s.inner_bits);
    if (s.gamma < 1.0) top = std::max(top, 1u);
  }
  return top;
}

FlagCode make_flag_code(CodeKind kind, const Distribution& p, std::vector<CodeSegment> segments) {
  FlagCode code;
  code.kind = kind;
  for (auto& s : segments) {
    if (s.multiplicity < 1) continue;
    if (!(s.gamma >= 0.0 && s.gamma <= 1.0))
      throw Error(ErrorKind::InvalidInput, "acceptance probability outside [0,1]");
    if (s.gamma > 0.0 && !s.inner_bits)
      throw Error(ErrorKind::InvalidInput, "accepted symbol without a codeword");
    if (s.gamma == 0.0) s.inner_bits.reset();
    if (kind == CodeKind::Deterministic && s.gamma != 0.0 && s.gamma != 1.0)
      throw Error(ErrorKind::InvalidInput, "deterministic code needs gamma in {0,1}");
    if (!code.segments.empty()) {
      auto& prev = code.segments.back();
      if (prev.parent == s.parent && prev.gamma == s.gamma && prev.inner_bits == s.inner_bits) {
        prev.multiplicity += s.multiplicity;
        continue;
      }
    }
    code.segments.push_back(std::move(s));
  }

  // Alignment: segments must tile the parent's atoms in order.
  std::size_t atom = 0;
  Count used = 0;
  Count position = 0;
  for (auto& s : code.segments) {
    if (s.parent != atom || atom >= p.atom_count())
      throw Error(ErrorKind::Misaligned, "code segments do not follow the distribution's atoms");
    s.first_symbol = position;
    position += s.multiplicity;
    used += s.multiplicity;
    if (used > p.atom(atom).multiplicity)
      throw Error(ErrorKind::Misaligned, "code segment overruns its atom");
    if (used == p.atom(atom).multiplicity) {
      ++atom;
      used = 0;
    }
  }
  if (atom != p.atom_count() || used != 0)
    throw Error(ErrorKind::Misaligned, "code does not cover the distribution's support");
  code.support_size = position;

  // The reject word decodes to the symbol with the largest P(x)(1 - gamma(x)),
  // lowest sorted index on ties.
  double best = kNegInf;
  for (std::size_t i = 0; i < code.segments.size(); ++i) {
    const auto& s = code.segments[i];
    if (s.gamma >= 1.0) continue;
    const double score = p.atom(s.parent).log_prob + std::log1p(-s.gamma);
    if (score > best + kRejectTie) {
      best = score;
      code.reject_segment = i;
      code.reject_decodes_to = s.first_symbol;
    }
  }
  return code;
}

FlagCode build_stochastic_code(const Distribution& p, double eps, double lambda) {
  detail::check_lambda(lambda);
  const auto q = optimal_smoothing(p, eps);
  const auto lengths = shannon_lengths(tilted_distribution(q, lambda));

  std::vector<CodeSegment> segs;
  for (std::size_t i = 0; i < q.atoms.size(); ++i) {
    const auto& a = q.atoms[i];
    const double gamma = std::min(1.0, std::exp(a.log_q - p.atom(a.parent).log_prob));
    segs.push_back({a.parent, 0, a.multiplicity, gamma, lengths[i]});
  }
  const Count dropped = p.atom(q.split_atom).multiplicity - q.kept_in_split - 1;
  if (dropped > 0) segs.push_back({q.split_atom, 0, dropped, 0.0, std::nullopt});
  for (std::size_t j = q.split_atom + 1; j < p.atom_count(); ++j)
    segs.push_back({j, 0, p.atom(j).multiplicity, 0.0, std::nullopt});
  return make_flag_code(CodeKind::Stochastic, p, std::move(segs));
}

FlagCode build_deterministic_code(const Distribution& p, double eps, double lambda) {
  detail::check_lambda(lambda);
  // Keep the k*-1 most likely symbols intact and reject everything else.
  auto q = optimal_smoothing(p, eps);
  q.atoms.pop_back();

  std::vector<CodeSegment> segs;
  if (!q.atoms.empty()) {
    const auto lengths = shannon_lengths(tilted_distribution(q, lambda));
    for (std::size_t i = 0; i < q.atoms.size(); ++i)
      segs.push_back({q.atoms[i].parent, 0, q.atoms[i].multiplicity, 1.0, lengths[i]});
  }
  segs.push_back({q.split_atom, 0, p.atom(q.split_atom).multiplicity - q.kept_in_split, 0.0,
                  std::nullopt});
  for (std::size_t j = q.split_atom + 1; j < p.atom_count(); ++j)
    segs.push_back({j, 0, p.atom(j).multiplicity, 0.0, std::nullopt});
  return make_flag_code(CodeKind::Deterministic, p, std::move(segs));
}

std::vector<CodebookEntry> materialize(const FlagCode& code, std::size_t limit) {
  if (code.support_size > Count(limit))
    throw Error(ErrorKind::TooLarge, "code support too large to materialize");

  std::vector<unsigned> inner;
  for (const auto& s : code.segments)
    if (s.inner_bits) inner.insert(inner.end(), s.multiplicity.convert_to<std::size_t>(), *s.inner_bits);
  const auto pc = assign_canonical_codewords(inner);

  std::vector<CodebookEntry> out;
  out.reserve(code.support_size.convert_to<std::size_t>());
  std::size_t next = 0;
  for (const auto& s : code.segments) {
    const auto m = s.multiplicity.convert_to<std::size_t>();
    for (std::size_t r = 0; r < m; ++r) {
      CodebookEntry e;
      e.gamma = s.gamma;
      if (s.inner_bits) e.codeword = "0" + pc.codewords[next++];
      out.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace smoothcode
