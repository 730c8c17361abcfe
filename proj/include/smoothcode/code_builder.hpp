#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smoothcode/distribution.hpp"
#include "smoothcode/smooth_renyi.hpp"

namespace smoothcode {

struct TiltedAtom {
  std::size_t parent = 0;
  double log_qt = 0.0;
  Count multiplicity = 1;
  double log_multiplicity = 0.0;
};

/// Normalized Q^{1/(1+lambda)} over the support of Q, aligned to its atoms.
struct TiltedDistribution {
  std::vector<TiltedAtom> atoms;
  double lambda = 0.0;
};

TiltedDistribution tilted_distribution(const SubDistribution& q, double lambda);

/// ceil(-log2 Qt(x)) per tilted atom. The result always satisfies Kraft.
std::vector<unsigned> shannon_lengths(const TiltedDistribution& qt);

/// Exact Kraft test sum_i multiplicity_i * 2^-length_i <= 1.
bool kraft_holds(std::span<const unsigned> lengths, std::span<const Count> multiplicities);
bool kraft_holds(std::span<const unsigned> lengths);

struct PrefixCode {
  std::vector<std::string> codewords;
  std::vector<unsigned> lengths_bits;
};

/// Canonical codewords for the given lengths, assigned in (length, index)
/// order. Throws KraftViolated if no prefix code has these lengths.
PrefixCode assign_canonical_codewords(std::span<const unsigned> lengths_bits);

bool is_prefix_free(std::span<const std::string> codewords);

/// Real-valued lengths -log Qt(x) in nats, per atom of q.
std::vector<double> ideal_real_lengths(const SubDistribution& q, double lambda);

enum class CodeKind { Stochastic, Deterministic };

// A run of consecutive expanded symbols sharing parent atom, acceptance
// probability and inner codeword length.
struct CodeSegment {
  std::size_t parent = 0;
  Count first_symbol = 0;       // 0-based expanded index
  Count multiplicity = 1;
  double gamma = 0.0;           // probability of emitting '0' + inner codeword
  std::optional<unsigned> inner_bits;  // empty when gamma == 0
};

// Flag-bit code: an accepted symbol emits '0' followed by its inner prefix
// codeword, a rejected one emits the single string "1".
struct FlagCode {
  CodeKind kind = CodeKind::Stochastic;
  std::vector<CodeSegment> segments;
  Count support_size = 0;
  std::size_t reject_segment = 0;  // segment whose first symbol "1" decodes to
  Count reject_decodes_to = 0;     // 0-based expanded symbol index

  /// Total emitted length in bits when accepted; empty when never accepted.
  std::optional<unsigned> accepted_bits(const CodeSegment& s) const;
  unsigned max_bits() const;
};

inline constexpr const char* kRejectCodeword = "1";

FlagCode build_stochastic_code(const Distribution& p, double eps, double lambda);
FlagCode build_deterministic_code(const Distribution& p, double eps, double lambda);

/// Builds a code from explicit per-segment data, merging adjacent segments
/// that agree and picking the reject decoding. Used by both builders and by
/// codebook deserialization so equal inputs yield identical codes.
FlagCode make_flag_code(CodeKind kind, const Distribution& p,
                        std::vector<CodeSegment> segments);

struct CodebookEntry {
  std::optional<std::string> codeword;  // '0' + inner; empty if never accepted
  double gamma = 0.0;
};

/// Per-symbol codebook in sorted symbol order. Throws TooLarge if the
/// support exceeds `limit`.
std::vector<CodebookEntry> materialize(const FlagCode& code, std::size_t limit = 1u << 16);

}  // namespace smoothcode
