#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "smoothcode/asymptotics.hpp"
#include "smoothcode/code_builder.hpp"
#include "smoothcode/distribution.hpp"
#include "smoothcode/evaluator.hpp"
#include "smoothcode/oracle.hpp"

namespace smoothcode::io {

using nlohmann::json;

/// Accepts {"probs": [...]} or {"atoms": [{"log_prob": r, "multiplicity": k}, ...]}.
/// Multiplicities may be JSON integers or decimal strings.
Distribution distribution_from_json(const json& j);
json distribution_to_json(const Distribution& p);

/// {"components": [{"weight": w, "probs": [...]}, ...]}
MixtureSpec mixture_from_json(const json& j);

/// {"reject": "1", "reject_decodes_to": i, "mode": ..., "entries": [{"codeword": "0..." | null, "gamma": g}, ...]}
json codebook_to_json(const FlagCode& code, std::size_t limit = 1u << 16);

/// Rebuilds a code from a codebook aligned to the sorted symbol order of p.
/// Throws Misaligned or InvalidInput when the codebook does not fit p.
FlagCode codebook_from_json(const json& j, const Distribution& p);

json report_to_json(const CodeReport& r);
json oracle_to_json(const OracleResult& r);

/// CSV with header n,value,limit and 12 significant digits.
void write_series_csv(std::ostream& os, const RateSeries& s, double scale = 1.0);

/// Locale-independent %.12g.
std::string format_number(double x);

json read_json_file(const std::string& path);

}  // namespace smoothcode::io
