#pragma once

#include "smoothcode/code_builder.hpp"
#include "smoothcode/distribution.hpp"

namespace smoothcode {

struct ErrorProbability {
  double raw = 0.0;       // total rejected mass
  double credited = 0.0;  // minus the mass the reject word decodes correctly
};

ErrorProbability error_probability(const FlagCode& code, const Distribution& p);

/// E[exp(lambda * l(X))] over the source and the encoder's randomness,
/// with l measured in nats.
double exponential_moment(const FlagCode& code, const Distribution& p, double lambda);
double log_exponential_moment(const FlagCode& code, const Distribution& p, double lambda);

/// 2^{2 lambda} exp(lambda H^eps_{1/(1+lambda)}(P)) + eps 2^lambda
double direct_bound(const Distribution& p, double eps, double lambda);

/// exp(lambda H^eps_{1/(1+lambda)}(P))
double converse_bound(const Distribution& p, double eps, double lambda);
double log_converse_bound(const Distribution& p, double eps, double lambda);

/// The direct bound at eps + gamma_eps that governs the deterministic code.
/// When k* = 1 the smoothing target is the whole mass and the bound is
/// its limiting value 2^lambda.
double deterministic_direct_bound(const Distribution& p, double eps, double lambda);

struct CodeReport {
  double error_prob = 0.0;
  double error_prob_raw = 0.0;
  double exp_moment = 0.0;
  double lambda = 0.0;
  double eps = 0.0;
  double direct_bound = 0.0;
  double converse_bound = 0.0;
};

/// Exact evaluation of an arbitrary code against both bounds (no checks).
CodeReport evaluate_code(const FlagCode& code, const Distribution& p, double eps,
                         double lambda);

/// Builds the stochastic code, evaluates it and checks
/// converse <= moment <= direct and credited error <= eps.
/// Throws SandwichViolated otherwise.
CodeReport sandwich_report(const Distribution& p, double eps, double lambda);

}  // namespace smoothcode
