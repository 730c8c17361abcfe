#include "smoothcode/cli.hpp"

#include <cstdlib>
#include <future>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "smoothcode/asymptotics.hpp"
#include "smoothcode/error.hpp"
#include "smoothcode/evaluator.hpp"
#include "smoothcode/io.hpp"
#include "smoothcode/oracle.hpp"
#include "smoothcode/smooth_renyi.hpp"

namespace smoothcode::cli {

namespace {

using io::json;

struct RunConfig {
  std::string dist_path;
  std::string probs;
  std::string mixture_path;
  std::string codebook_path;
  double alpha = 0.5;
  double eps = 0.0;
  double lambda = 1.0;
  std::string n_list;
  std::string eps_list = "0,0.05,0.1,0.3";
  std::string lambda_list = "0.5,1,2";
  std::string unit = "nats";
  std::string format;  // empty: csv for mixture, json otherwise
  std::string mode = "stochastic";
  std::string direction = "within";
  double threshold = 0.0;
  double width = 0.0;
  unsigned n = 1;
  unsigned max_len = 5;
  unsigned trials = 0;
  std::uint64_t seed = 0;
  std::size_t cap = kDefaultTypeClassCap;
};

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  ss.imbue(std::locale::classic());
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    is.imbue(std::locale::classic());
    double v = 0.0;
    if (!(is >> v) || !(is >> std::ws).eof())
      throw Error(ErrorKind::InvalidInput, "cannot parse number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::vector<unsigned> parse_blocklengths(const std::string& text) {
  std::vector<unsigned> out;
  for (double v : parse_reals(text)) {
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e9)
      throw Error(ErrorKind::InvalidInput, "blocklengths must be positive integers");
    out.push_back(static_cast<unsigned>(v));
  }
  return out;
}

double unit_scale(const RunConfig& c) { return c.unit == "bits" ? 1.0 / kLn2 : 1.0; }

Distribution load_distribution(const RunConfig& c) {
  if (!c.dist_path.empty()) return io::distribution_from_json(io::read_json_file(c.dist_path));
  if (!c.probs.empty()) return new_distribution(parse_reals(c.probs));
  throw Error(ErrorKind::InvalidInput, "a distribution is required (--dist or --probs)");
}

MixtureSpec load_mixture(const RunConfig& c) {
  if (c.mixture_path.empty()) throw Error(ErrorKind::InvalidInput, "--mixture is required");
  return io::mixture_from_json(io::read_json_file(c.mixture_path));
}

json entropy_report(const RunConfig& c) {
  detail::check_alpha(c.alpha);
  detail::check_epsilon(c.eps);
  const auto p = load_distribution(c);
  const auto q = optimal_smoothing(p, c.eps);
  const double scale = unit_scale(c);
  json j;
  j["alpha"] = c.alpha;
  j["eps"] = c.eps;
  j["unit"] = c.unit;
  j["smooth_renyi_entropy"] = smooth_renyi_entropy(p, c.alpha, c.eps) * scale;
  j["smooth_max_entropy"] = smooth_max_entropy(p, c.eps) * scale;
  j["log_r_alpha_eps"] = log_power_sum(q, c.alpha);
  j["k_star"] = q.k_star.str();
  j["gamma_eps"] = q.gamma_eps;
  j["blocklength"] = p.blocklength();
  if (c.trials > 0 && p.support_size() <= 8)
    j["feasible_search_min"] =
        smoothing_feasible_search(p, c.alpha, c.eps, c.trials, c.seed);
  return j;
}

FlagCode build_code(const RunConfig& c, const Distribution& p) {
  if (c.mode == "deterministic") return build_deterministic_code(p, c.eps, c.lambda);
  return build_stochastic_code(p, c.eps, c.lambda);
}

json evaluate_report(const Distribution& p, double eps, double lambda, const std::string& mode) {
  if (mode == "stochastic") return io::report_to_json(sandwich_report(p, eps, lambda));
  auto j = io::report_to_json(
      evaluate_code(build_deterministic_code(p, eps, lambda), p, eps, lambda));
  j["deterministic_direct_bound"] = deterministic_direct_bound(p, eps, lambda);
  return j;
}

json run_evaluate(const RunConfig& c) {
  detail::check_epsilon(c.eps);
  detail::check_lambda(c.lambda);
  const auto p = load_distribution(c);
  if (c.codebook_path.empty()) return evaluate_report(p, c.eps, c.lambda, c.mode);
  const auto cb = io::read_json_file(c.codebook_path);
  const auto code = io::codebook_from_json(cb, p);
  auto j = io::report_to_json(evaluate_code(code, p, c.eps, c.lambda));
  if (code.kind == CodeKind::Deterministic)
    j["deterministic_direct_bound"] = deterministic_direct_bound(p, c.eps, c.lambda);
  return j;
}

void run_sweep(const RunConfig& c, std::ostream& out) {
  const auto p = load_distribution(c);
  const auto eps_grid = parse_reals(c.eps_list);
  const auto lambda_grid = parse_reals(c.lambda_list);
  for (double e : eps_grid) detail::check_epsilon(e);
  for (double l : lambda_grid) detail::check_lambda(l);

  // Grid points run concurrently; results are collected in grid order.
  std::vector<std::future<json>> jobs;
  for (double l : lambda_grid)
    for (double e : eps_grid)
      jobs.push_back(std::async(std::launch::async, [&, e, l] {
        return evaluate_report(p, e, l, c.mode);
      }));

  json rows = json::array();
  for (auto& f : jobs) rows.push_back(f.get());
  if (c.format == "csv") {
    out << "lambda,eps,error_prob,error_prob_raw,exp_moment,converse_bound,direct_bound\n";
    for (const auto& r : rows)
      out << io::format_number(r["lambda"]) << ',' << io::format_number(r["eps"]) << ','
          << io::format_number(r["error_prob"]) << ',' << io::format_number(r["error_prob_raw"])
          << ',' << io::format_number(r["exp_moment"]) << ','
          << io::format_number(r["converse_bound"]) << ','
          << io::format_number(r["direct_bound"]) << '\n';
    return;
  }
  out << json{{"mode", c.mode}, {"reports", rows}}.dump(2) << '\n';
}

void run_mixture(const RunConfig& c, std::ostream& out) {
  detail::check_alpha(c.alpha);
  detail::check_epsilon(c.eps);
  const auto spec = load_mixture(c);
  const auto ns = c.n_list.empty() ? power_of_two_schedule(1024) : parse_blocklengths(c.n_list);
  const auto series = entropy_rate_series(spec, c.alpha, c.eps, ns, c.cap);
  const double scale = unit_scale(c);
  if (c.format == "json") {
    json entries = json::array();
    for (const auto& e : series.entries) entries.push_back({{"n", e.n}, {"value", e.value * scale}});
    out << json{{"alpha", c.alpha}, {"eps", c.eps}, {"unit", c.unit},
                {"limit", series.limit * scale}, {"entries", entries}}.dump(2)
        << '\n';
    return;
  }
  io::write_series_csv(out, series, scale);
}

json run_spectrum(const RunConfig& c) {
  const auto spec = load_mixture(c);
  SpectrumQuery q;
  q.n = c.n;
  // Thresholds are read in the selected unit.
  q.threshold = c.threshold / unit_scale(c);
  q.width = c.width / unit_scale(c);
  if (c.direction == "ge") q.direction = SpectrumDirection::AtLeast;
  else if (c.direction == "le") q.direction = SpectrumDirection::AtMost;
  else q.direction = SpectrumDirection::Within;
  return {{"n", c.n},
          {"threshold", c.threshold},
          {"direction", c.direction},
          {"width", c.width},
          {"unit", c.unit},
          {"probability", spectrum_probability(spec, q, c.cap)}};
}

std::size_t cap_from_env() {
  if (const char* v = std::getenv("SMOOTHCODE_CAP")) {
    char* end = nullptr;
    const unsigned long long cap = std::strtoull(v, &end, 10);
    if (end != v && *end == '\0' && cap > 0) return static_cast<std::size_t>(cap);
    throw Error(ErrorKind::InvalidInput, "SMOOTHCODE_CAP must be a positive integer");
  }
  return kDefaultTypeClassCap;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Smooth Renyi entropy and epsilon-error variable-length codes", "smoothcode"};
  app.require_subcommand(1);

  auto add_dist = [&](CLI::App* s) {
    s->add_option("--dist", c.dist_path, "distribution JSON file");
    s->add_option("--probs", c.probs, "comma-separated probabilities");
  };
  auto add_common = [&](CLI::App* s) {
    s->add_option("--unit", c.unit)->check(CLI::IsMember({"nats", "bits"}));
    s->add_option("--format", c.format)->check(CLI::IsMember({"json", "csv"}));
    s->add_option("--seed", c.seed);
    s->add_option("--cap", c.cap, "type-class cap (default: $SMOOTHCODE_CAP or 2000000)");
  };

  auto* entropy = app.add_subcommand("entropy", "smooth Renyi entropy of a distribution");
  add_dist(entropy);
  entropy->add_option("--alpha", c.alpha);
  entropy->add_option("--eps", c.eps);
  entropy->add_option("--trials", c.trials, "also run the random feasible-point search");

  auto* code = app.add_subcommand("code", "emit the codebook of the epsilon-error code");
  add_dist(code);
  code->add_option("--eps", c.eps);
  code->add_option("--lambda", c.lambda);
  code->add_option("--mode", c.mode)->check(CLI::IsMember({"stochastic", "deterministic"}));

  auto* evaluate = app.add_subcommand("evaluate", "exact error and exponential moment report");
  add_dist(evaluate);
  evaluate->add_option("--eps", c.eps);
  evaluate->add_option("--lambda", c.lambda);
  evaluate->add_option("--mode", c.mode)->check(CLI::IsMember({"stochastic", "deterministic"}));
  evaluate->add_option("--codebook", c.codebook_path, "evaluate a codebook emitted by 'code'");

  auto* oracle = app.add_subcommand("oracle", "exhaustive search over small prefix codes");
  add_dist(oracle);
  oracle->add_option("--eps", c.eps);
  oracle->add_option("--lambda", c.lambda);
  oracle->add_option("--max-len", c.max_len);

  auto* mixture = app.add_subcommand("mixture", "entropy-rate series of a mixture source");
  mixture->add_option("--mixture", c.mixture_path, "mixture JSON file");
  mixture->add_option("--alpha", c.alpha);
  mixture->add_option("--eps", c.eps);
  mixture->add_option("--n", c.n_list, "comma-separated blocklengths");

  auto* spectrum = app.add_subcommand("spectrum", "probability of an information-spectrum set");
  spectrum->add_option("--mixture", c.mixture_path, "mixture JSON file");
  spectrum->add_option("--n", c.n);
  spectrum->add_option("--threshold", c.threshold);
  spectrum->add_option("--direction", c.direction)->check(CLI::IsMember({"ge", "le", "within"}));
  spectrum->add_option("--width", c.width);

  auto* sweep = app.add_subcommand("sweep", "grid of code reports");
  add_dist(sweep);
  sweep->add_option("--eps-list", c.eps_list);
  sweep->add_option("--lambda-list", c.lambda_list);
  sweep->add_option("--mode", c.mode)->check(CLI::IsMember({"stochastic", "deterministic"}));

  for (auto* s : {entropy, code, evaluate, oracle, mixture, spectrum, sweep}) add_common(s);

  std::vector<const char*> argv{"smoothcode"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    c.cap = cap_from_env();
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  if (c.format.empty()) c.format = mixture->parsed() ? "csv" : "json";

  try {
    if (entropy->parsed()) {
      out << entropy_report(c).dump(2) << '\n';
    } else if (code->parsed()) {
      detail::check_epsilon(c.eps);
      detail::check_lambda(c.lambda);
      out << io::codebook_to_json(build_code(c, load_distribution(c))).dump(2) << '\n';
    } else if (evaluate->parsed()) {
      out << run_evaluate(c).dump(2) << '\n';
    } else if (oracle->parsed()) {
      detail::check_epsilon(c.eps);
      detail::check_lambda(c.lambda);
      const auto p = load_distribution(c);
      out << io::oracle_to_json(optimal_code_bruteforce(p, c.eps, c.lambda, c.max_len)).dump(2)
          << '\n';
    } else if (mixture->parsed()) {
      run_mixture(c, out);
    } else if (spectrum->parsed()) {
      out << run_spectrum(c).dump(2) << '\n';
    } else if (sweep->parsed()) {
      run_sweep(c, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::TooLarge ? kExitTooLarge : kExitValidation;
  } catch (const io::json::exception& e) {
    err << "error: malformed input: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace smoothcode::cli
