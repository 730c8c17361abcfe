#include <doctest.h>

#include <random>

#include "smoothcode/code_builder.hpp"
#include "smoothcode/distribution.hpp"
#include "smoothcode/error.hpp"
#include "smoothcode/evaluator.hpp"
#include "test_support.hpp"

using namespace smoothcode;

namespace {

Distribution dist(std::vector<double> p) { return new_distribution(p); }

const std::vector<double> kWorked{0.5, 0.3, 0.2};

// Moment straight from the materialized codebook, through exp(lambda * nats).
double reference_moment(const FlagCode& code, const Distribution& p, double lambda) {
  const auto pe = p.expanded_probs();
  const auto entries = materialize(code);
  double s = 0.0;
  for (std::size_t i = 0; i < pe.size(); ++i) {
    const double g = entries[i].gamma;
    double m = (1.0 - g) * std::exp(lambda * kLn2);
    if (entries[i].codeword) m += g * std::exp(lambda * entries[i].codeword->size() * kLn2);
    s += pe[i] * m;
  }
  return s;
}

}  // namespace

TEST_CASE("error_probability examples") {
  const auto p = dist(kWorked);
  const auto all = build_stochastic_code(p, 0.0, 1.0);
  const auto e0 = error_probability(all, p);
  CHECK(e0.raw == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(e0.credited == doctest::Approx(0.0).epsilon(1e-12));

  const auto sc = build_stochastic_code(p, 0.1, 1.0);
  const auto es = error_probability(sc, p);
  CHECK(es.raw == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(std::abs(es.credited) <= 1e-12);

  const auto dc = build_deterministic_code(p, 0.1, 1.0);
  const auto ed = error_probability(dc, p);
  CHECK(ed.raw == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(std::abs(ed.credited) <= 1e-12);

  // Two rejected symbols: credit only the likelier one.
  const auto dc2 = build_deterministic_code(p, 0.45, 1.0);
  const auto ed2 = error_probability(dc2, p);
  CHECK(ed2.raw == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ed2.credited == doctest::Approx(0.2).epsilon(1e-12));

  CHECK_THROWS_AS(error_probability(sc, dist({0.25, 0.25, 0.25, 0.25})), Error);
  try {
    error_probability(sc, dist({0.6, 0.4}));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Misaligned);
  }
}

TEST_CASE("exponential_moment examples") {
  const auto p = dist(kWorked);
  CHECK(exponential_moment(build_stochastic_code(p, 0.1, 1.0), p, 1.0) ==
        doctest::Approx(8.2).epsilon(1e-12));
  const auto u = dist({0.25, 0.25, 0.25, 0.25});
  CHECK(exponential_moment(build_stochastic_code(u, 0.0, 1.0), u, 1.0) ==
        doctest::Approx(8.0).epsilon(1e-12));
  const auto pm = dist({1.0});
  for (double lam : {0.3, 1.0, 4.0})
    CHECK(exponential_moment(build_stochastic_code(pm, 0.0, lam), pm, lam) ==
          doctest::Approx(std::exp2(lam)).epsilon(1e-12));
}

TEST_CASE("direct and converse bound examples") {
  const auto p = dist(kWorked);
  CHECK(direct_bound(p, 0.0, 1.0) == doctest::Approx(11.58780059932718).epsilon(1e-12));
  CHECK(direct_bound(p, 0.1, 1.0) == doctest::Approx(10.072881705020869).epsilon(1e-12));
  CHECK(direct_bound(dist({1.0}), 0.0, 1.0) == doctest::Approx(4.0));
  CHECK(converse_bound(p, 0.0, 1.0) == doctest::Approx(2.896950149831795).epsilon(1e-12));
  CHECK(converse_bound(p, 0.1, 1.0) == doctest::Approx(2.4682204262552174).epsilon(1e-12));
  CHECK(converse_bound(dist({1.0}), 0.0, 1.0) == doctest::Approx(1.0));
  CHECK(log_converse_bound(p, 0.1, 1.0) == doctest::Approx(std::log(2.4682204262552174)));
  CHECK_THROWS_AS(direct_bound(p, 0.1, 0.0), Error);
  CHECK_THROWS_AS(converse_bound(p, 1.0, 1.0), Error);
}

TEST_CASE("sandwich_report examples") {
  const auto r = sandwich_report(dist(kWorked), 0.1, 1.0);
  CHECK(r.converse_bound == doctest::Approx(2.4682204262552174).epsilon(1e-12));
  CHECK(r.exp_moment == doctest::Approx(8.2).epsilon(1e-12));
  CHECK(r.direct_bound == doctest::Approx(10.072881705020869).epsilon(1e-12));
  CHECK(r.lambda == 1.0);
  CHECK(r.eps == 0.1);

  const auto ru = sandwich_report(dist({0.25, 0.25, 0.25, 0.25}), 0.0, 1.0);
  CHECK(ru.converse_bound == doctest::Approx(4.0));
  CHECK(ru.exp_moment == doctest::Approx(8.0));
  CHECK(ru.direct_bound == doctest::Approx(16.0));

  const auto rp = sandwich_report(dist({1.0}), 0.0, 1.0);
  CHECK(rp.converse_bound == doctest::Approx(1.0));
  CHECK(rp.exp_moment == doctest::Approx(2.0));
  CHECK(rp.direct_bound == doctest::Approx(4.0));
}

TEST_CASE("randomized sandwich and deterministic code bound") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const auto p = dist(testing::random_probs(rng, 1 + trial % 9));
    const double eps = trial % 3 == 0 ? 0.0 : 0.6 * u(rng);
    const double lambda = 0.05 + 4.0 * u(rng);
    const auto r = sandwich_report(p, eps, lambda);
    CHECK(r.error_prob <= eps + 1e-12);
    CHECK(r.converse_bound <= r.exp_moment * (1 + 1e-9));
    CHECK(r.exp_moment <= r.direct_bound * (1 + 1e-9));

    const auto dc = build_deterministic_code(p, eps, lambda);
    const auto q = optimal_smoothing(p, eps);
    const auto ed = error_probability(dc, p);
    CHECK(ed.raw == doctest::Approx(eps + q.gamma_eps).epsilon(1e-12));
    CHECK(exponential_moment(dc, p, lambda) <= deterministic_direct_bound(p, eps, lambda) * (1 + 1e-9));
    // Converse universality for the deterministic construction at its own error.
    if (ed.credited < 1.0)
      CHECK(exponential_moment(dc, p, lambda) >=
            converse_bound(p, std::min(ed.credited, 0.999999), lambda) * (1 - 1e-9));
  }
}

TEST_CASE("moment units, log domain and monotonicity") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = dist(testing::random_probs(rng, 2 + trial % 7));
    const double eps = 0.05 * (trial % 6);
    const auto code = build_stochastic_code(p, eps, 1.0);
    double prev = 0.0;
    for (double lambda : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      const double m = exponential_moment(code, p, lambda);
      CHECK(testing::rel_close(m, reference_moment(code, p, lambda), 1e-12));
      CHECK(testing::rel_close(std::log(m), log_exponential_moment(code, p, lambda), 1e-12));
      CHECK(m >= prev);
      prev = m;
    }
    double prev_direct = direct_bound(p, 0.0, 1.0);
    double prev_conv = converse_bound(p, 0.0, 1.0);
    for (int k = 1; k < 20; ++k) {
      const double e = k / 20.0;
      CHECK(direct_bound(p, e, 1.0) <= prev_direct * (1 + 1e-12));
      CHECK(converse_bound(p, e, 1.0) <= prev_conv * (1 + 1e-12));
      prev_direct = direct_bound(p, e, 1.0);
      prev_conv = converse_bound(p, e, 1.0);
    }
  }
}

TEST_CASE("moments of long codes use the log domain") {
  const auto pn = iid_extension(dist({0.5, 0.5}), 2000);
  const auto code = build_stochastic_code(pn, 0.0, 1.0);
  const double lm = log_exponential_moment(code, pn, 1.0);
  CHECK(lm == doctest::Approx(2001 * kLn2).epsilon(1e-12));
  CHECK(std::isinf(exponential_moment(code, pn, 1.0)));
  CHECK(log_converse_bound(pn, 0.0, 1.0) == doctest::Approx(2000 * kLn2).epsilon(1e-12));
}

TEST_CASE("deterministic bound at k* = 1 takes its limiting value") {
  const auto p = dist(kWorked);
  CHECK(deterministic_direct_bound(p, 0.6, 1.0) == doctest::Approx(2.0));
  const auto dc = build_deterministic_code(p, 0.6, 1.0);
  CHECK(exponential_moment(dc, p, 1.0) == doctest::Approx(2.0));
  CHECK(error_probability(dc, p).raw == doctest::Approx(1.0));
  CHECK(deterministic_direct_bound(p, 0.1, 1.0) == doctest::Approx(direct_bound(p, 0.2, 1.0)));
}

TEST_CASE("evaluate_code reports hand-built codes") {
  const auto p = dist(kWorked);
  // Everything rejected: error 1 - max P after credit, moment 2^lambda.
  std::vector<CodeSegment> segs{{0, 0, 1, 0.0, std::nullopt}, {1, 0, 1, 0.0, std::nullopt},
                                {2, 0, 1, 0.0, std::nullopt}};
  const auto code = make_flag_code(CodeKind::Deterministic, p, segs);
  const auto r = evaluate_code(code, p, 0.5, 2.0);
  CHECK(r.error_prob_raw == doctest::Approx(1.0));
  CHECK(r.error_prob == doctest::Approx(0.5));
  CHECK(r.exp_moment == doctest::Approx(4.0));
  CHECK(r.converse_bound <= r.exp_moment);
}
