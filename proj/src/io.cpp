#include "smoothcode/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "smoothcode/error.hpp"

namespace smoothcode::io {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::InvalidInput, what); }

Count count_from_json(const json& j) {
  if (j.is_number_unsigned()) return Count(j.get<std::uint64_t>());
  if (j.is_number_integer()) {
    const auto v = j.get<std::int64_t>();
    if (v < 1) invalid("multiplicity must be positive");
    return Count(v);
  }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      invalid("multiplicity string must be a decimal integer");
    return Count(s);
  }
  invalid("multiplicity must be an integer or decimal string");
}

json count_to_json(const Count& c) {
  if (c <= Count(std::uint64_t{1} << 53)) return c.convert_to<std::uint64_t>();
  return c.str();
}

bool is_binary(const std::string& s) { return s.find_first_not_of("01") == std::string::npos; }

}  // namespace

Distribution distribution_from_json(const json& j) {
  if (!j.is_object()) invalid("distribution JSON must be an object");
  if (j.contains("probs")) {
    if (!j["probs"].is_array()) invalid("\"probs\" must be an array");
    std::vector<double> probs;
    for (const auto& v : j["probs"]) {
      if (!v.is_number()) invalid("\"probs\" entries must be numbers");
      probs.push_back(v.get<double>());
    }
    return new_distribution(probs);
  }
  if (j.contains("atoms")) {
    if (!j["atoms"].is_array()) invalid("\"atoms\" must be an array");
    std::vector<WeightedAtom> atoms;
    std::uint64_t tag = 0;
    for (const auto& a : j["atoms"]) {
      if (!a.is_object() || !a.contains("log_prob") || !a["log_prob"].is_number())
        invalid("each atom needs a numeric \"log_prob\"");
      const Count mult = a.contains("multiplicity") ? count_from_json(a["multiplicity"]) : Count(1);
      atoms.emplace_back(a["log_prob"].get<double>(), mult, tag++);
    }
    const unsigned n = j.value("n", 1u);
    return Distribution::from_atoms(std::move(atoms), n);
  }
  invalid("distribution JSON needs \"probs\" or \"atoms\"");
}

json distribution_to_json(const Distribution& p) {
  json atoms = json::array();
  for (const auto& a : p.atoms())
    atoms.push_back({{"log_prob", a.log_prob}, {"multiplicity", count_to_json(a.multiplicity)}});
  return {{"n", p.blocklength()}, {"atoms", std::move(atoms)}};
}

MixtureSpec mixture_from_json(const json& j) {
  if (!j.is_object() || !j.contains("components") || !j["components"].is_array())
    invalid("mixture JSON needs a \"components\" array");
  std::vector<MixtureComponent> comps;
  for (const auto& c : j["components"]) {
    if (!c.is_object() || !c.contains("weight") || !c.contains("probs"))
      invalid("each mixture component needs \"weight\" and \"probs\"");
    MixtureComponent mc;
    mc.weight = c["weight"].get<double>();
    mc.probs = c["probs"].get<std::vector<double>>();
    comps.push_back(std::move(mc));
  }
  return MixtureSpec(std::move(comps));
}

json codebook_to_json(const FlagCode& code, std::size_t limit) {
  json entries = json::array();
  for (const auto& e : materialize(code, limit)) {
    json row;
    row["codeword"] = e.codeword ? json(*e.codeword) : json(nullptr);
    row["gamma"] = e.gamma;
    entries.push_back(std::move(row));
  }
  return {{"mode", code.kind == CodeKind::Stochastic ? "stochastic" : "deterministic"},
          {"reject", kRejectCodeword},
          {"reject_decodes_to", code.reject_decodes_to.convert_to<std::uint64_t>()},
          {"entries", std::move(entries)}};
}

FlagCode codebook_from_json(const json& j, const Distribution& p) {
  if (!j.is_object() || !j.contains("entries") || !j["entries"].is_array())
    invalid("codebook JSON needs an \"entries\" array");
  if (j.value("reject", std::string(kRejectCodeword)) != kRejectCodeword)
    invalid("only the reject word \"1\" is supported");
  const auto& entries = j["entries"];
  if (Count(entries.size()) != p.support_size())
    throw Error(ErrorKind::Misaligned, "codebook size differs from the distribution's support");

  const auto kind = j.value("mode", std::string("stochastic")) == "deterministic"
                        ? CodeKind::Deterministic
                        : CodeKind::Stochastic;
  const auto atom_of = p.expanded_atom_index();

  std::vector<CodeSegment> segs;
  std::vector<std::string> words{kRejectCodeword};
  for (std::size_t x = 0; x < entries.size(); ++x) {
    const auto& e = entries[x];
    if (!e.is_object() || !e.contains("gamma") || !e["gamma"].is_number())
      invalid("each codebook entry needs a numeric \"gamma\"");
    CodeSegment s;
    s.parent = atom_of[x];
    s.multiplicity = 1;
    s.gamma = e["gamma"].get<double>();
    if (e.contains("codeword") && !e["codeword"].is_null()) {
      const auto w = e["codeword"].get<std::string>();
      if (w.empty() || w[0] != '0' || !is_binary(w))
        invalid("accepted codewords must be binary strings starting with '0'");
      s.inner_bits = static_cast<unsigned>(w.size() - 1);
      words.push_back(w);
    }
    segs.push_back(std::move(s));
  }
  if (!is_prefix_free(words)) invalid("codebook is not prefix-free");

  auto code = make_flag_code(kind, p, std::move(segs));
  if (j.contains("reject_decodes_to")) {
    const Count target(j["reject_decodes_to"].get<std::uint64_t>());
    if (target >= code.support_size) throw Error(ErrorKind::Misaligned, "reject target out of range");
    for (std::size_t i = 0; i < code.segments.size(); ++i) {
      const auto& s = code.segments[i];
      if (target >= s.first_symbol && target < s.first_symbol + s.multiplicity) {
        code.reject_segment = i;
        code.reject_decodes_to = target;
      }
    }
  }
  return code;
}

json report_to_json(const CodeReport& r) {
  return {{"error_prob", r.error_prob},   {"error_prob_raw", r.error_prob_raw},
          {"exp_moment", r.exp_moment},   {"lambda", r.lambda},
          {"eps", r.eps},                 {"direct_bound", r.direct_bound},
          {"converse_bound", r.converse_bound}};
}

json oracle_to_json(const OracleResult& r) {
  json decoder = json::object();
  for (const auto& [word, symbol] : r.decoder) decoder[word] = symbol;
  return {{"best_moment", r.best_moment},
          {"credited_error", r.credited_error},
          {"encoder", r.encoder},
          {"decoder", std::move(decoder)},
          {"search_space_size", r.search_space_size}};
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  // snprintf honours LC_NUMERIC; force '.' regardless of locale.
  for (char* c = buf; *c; ++c)
    if (*c == ',') *c = '.';
  return buf;
}

void write_series_csv(std::ostream& os, const RateSeries& s, double scale) {
  os << "n,value,limit\n";
  for (const auto& e : s.entries)
    os << e.n << ',' << format_number(e.value * scale) << ',' << format_number(s.limit * scale)
       << '\n';
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    invalid("malformed JSON in " + path + ": " + e.what());
  }
}

}  // namespace smoothcode::io
