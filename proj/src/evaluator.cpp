#include "smoothcode/evaluator.hpp"

#include <string>

#include "smoothcode/error.hpp"
#include "smoothcode/smooth_renyi.hpp"

namespace smoothcode {

namespace {

constexpr double kLinearLimit = 700.0;  // nats
constexpr double kSandwichSlack = 1e-9;
constexpr double kErrorSlack = 1e-12;

void check_aligned(const FlagCode& code, const Distribution& p) {
  if (code.support_size != p.support_size())
    throw Error(ErrorKind::Misaligned, "code and distribution supports differ");
  for (const auto& s : code.segments)
    if (s.parent >= p.atom_count())
      throw Error(ErrorKind::Misaligned, "code refers to a missing atom");
}

// log P(segment) and the log of each of its two contributions.
struct SegmentTerms {
  double log_accept = kNegInf;
  double log_reject = kNegInf;
};

SegmentTerms segment_terms(const FlagCode& code, const CodeSegment& s, const Distribution& p,
                           double lambda) {
  const double log_mass = p.atom(s.parent).log_prob + log_count(s.multiplicity);
  SegmentTerms t;
  if (s.gamma > 0.0)
    t.log_accept = log_mass + std::log(s.gamma) + lambda * (*code.accepted_bits(s)) * kLn2;
  if (s.gamma < 1.0) t.log_reject = log_mass + std::log1p(-s.gamma) + lambda * kLn2;
  return t;
}

}  // namespace

ErrorProbability error_probability(const FlagCode& code, const Distribution& p) {
  check_aligned(code, p);
  CompensatedSum raw;
  for (const auto& s : code.segments) {
    if (s.gamma >= 1.0) continue;
    raw.add(std::exp(p.atom(s.parent).log_prob + log_count(s.multiplicity)) * (1.0 - s.gamma));
  }
  ErrorProbability e;
  e.raw = raw.value();
  const auto& x0 = code.segments[code.reject_segment];
  e.credited = e.raw;
  if (x0.gamma < 1.0) {
    raw.add(-p.atom(x0.parent).prob() * (1.0 - x0.gamma));
    e.credited = std::max(0.0, raw.value());
  }
  return e;
}

double log_exponential_moment(const FlagCode& code, const Distribution& p, double lambda) {
  detail::check_lambda(lambda);
  check_aligned(code, p);
  LogSumExp acc;
  for (const auto& s : code.segments) {
    const auto t = segment_terms(code, s, p, lambda);
    acc.add(t.log_accept);
    acc.add(t.log_reject);
  }
  return acc.value();
}

double exponential_moment(const FlagCode& code, const Distribution& p, double lambda) {
  detail::check_lambda(lambda);
  check_aligned(code, p);
  if (lambda * code.max_bits() * kLn2 > kLinearLimit)
    return std::exp(log_exponential_moment(code, p, lambda));

  CompensatedSum sum;
  for (const auto& s : code.segments) {
    const double mass = std::exp(p.atom(s.parent).log_prob + log_count(s.multiplicity));
    if (s.gamma > 0.0) sum.add(mass * s.gamma * std::exp2(lambda * (*code.accepted_bits(s))));
    if (s.gamma < 1.0) sum.add(mass * (1.0 - s.gamma) * std::exp2(lambda));
  }
  return sum.value();
}

double log_converse_bound(const Distribution& p, double eps, double lambda) {
  detail::check_lambda(lambda);
  return lambda * smooth_renyi_entropy(p, 1.0 / (1.0 + lambda), eps);
}

double converse_bound(const Distribution& p, double eps, double lambda) {
  return std::exp(log_converse_bound(p, eps, lambda));
}

double direct_bound(const Distribution& p, double eps, double lambda) {
  const double log_c = log_converse_bound(p, eps, lambda);
  return std::exp(2.0 * lambda * kLn2 + log_c) + eps * std::exp2(lambda);
}

double deterministic_direct_bound(const Distribution& p, double eps, double lambda) {
  detail::check_lambda(lambda);
  const auto q = optimal_smoothing(p, eps);
  const double eps_det = eps + q.gamma_eps;
  if (q.k_star == 1) return eps_det * std::exp2(lambda);
  return direct_bound(p, eps_det, lambda);
}

CodeReport evaluate_code(const FlagCode& code, const Distribution& p, double eps, double lambda) {
  const auto err = error_probability(code, p);
  CodeReport r;
  r.error_prob = err.credited;
  r.error_prob_raw = err.raw;
  r.exp_moment = exponential_moment(code, p, lambda);
  r.lambda = lambda;
  r.eps = eps;
  r.direct_bound = direct_bound(p, eps, lambda);
  r.converse_bound = converse_bound(p, eps, lambda);
  return r;
}

CodeReport sandwich_report(const Distribution& p, double eps, double lambda) {
  const auto r = evaluate_code(build_stochastic_code(p, eps, lambda), p, eps, lambda);
  const bool lower = r.converse_bound <= r.exp_moment * (1.0 + kSandwichSlack);
  const bool upper = r.exp_moment <= r.direct_bound * (1.0 + kSandwichSlack);
  const bool error = r.error_prob <= eps + kErrorSlack;
  if (!(lower && upper && error))
    throw Error(ErrorKind::SandwichViolated,
                "sandwich violated: converse " + std::to_string(r.converse_bound) + ", moment " +
                    std::to_string(r.exp_moment) + ", direct " + std::to_string(r.direct_bound) +
                    ", error " + std::to_string(r.error_prob));
  return r;
}

}  // namespace smoothcode
