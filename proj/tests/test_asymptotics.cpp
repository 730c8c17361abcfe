#include <doctest.h>

#include <random>

#include "smoothcode/asymptotics.hpp"
#include "smoothcode/distribution.hpp"
#include "smoothcode/error.hpp"
#include "smoothcode/smooth_renyi.hpp"
#include "test_support.hpp"

using namespace smoothcode;

namespace {

const double kH1 = std::log(2.0);
const double kH2 = 0.34651533691866615;

MixtureSpec two_coins() { return MixtureSpec({{0.6, {0.5, 0.5}}, {0.4, {0.89, 0.11}}}); }

}  // namespace

TEST_CASE("theoretical_limit and achievable_exponent examples") {
  const auto spec = two_coins();
  auto l = theoretical_limit(spec, 0.3);
  CHECK(l.index == 1);
  CHECK(l.entropy == doctest::Approx(kH1));
  l = theoretical_limit(spec, 0.6);
  CHECK(l.index == 2);
  CHECK(l.entropy == doctest::Approx(kH2));
  CHECK(theoretical_limit(spec, 0.0).index == 1);
  CHECK(theoretical_limit(spec, 0.999).index == 2);
  const MixtureSpec single({{1.0, {0.7, 0.2, 0.1}}});
  for (double e : {0.0, 0.5, 0.99})
    CHECK(theoretical_limit(single, e).entropy ==
          doctest::Approx(shannon_entropy(std::vector<double>{0.7, 0.2, 0.1})));
  CHECK_THROWS_AS(theoretical_limit(spec, 1.0), Error);

  CHECK(achievable_exponent(spec, 1.0, 0.3) == doctest::Approx(0.693147).epsilon(1e-6));
  CHECK(achievable_exponent(spec, 2.0, 0.7) == doctest::Approx(2 * kH2).epsilon(1e-12));
  const MixtureSpec point({{0.5, {0.5, 0.5}}, {0.5, {1.0, 0.0}}});
  CHECK(achievable_exponent(point, 3.0, 0.8) == doctest::Approx(0.0));
  CHECK_THROWS_AS(achievable_exponent(spec, 0.0, 0.3), Error);
}

TEST_CASE("entropy_rate_series examples") {
  const MixtureSpec coin({{1.0, {0.5, 0.5}}});
  const auto s = entropy_rate_series(coin, 0.5, 0.0, {1, 2, 7, 64, 500});
  REQUIRE(s.entries.size() == 5);
  for (const auto& e : s.entries) CHECK(e.value == doctest::Approx(kH1).epsilon(1e-12));
  CHECK(s.limit == doctest::Approx(kH1));

  const auto spec = two_coins();
  const auto a = entropy_rate_series(spec, 0.5, 0.3, {1024});
  CHECK(std::abs(a.entries[0].value - kH1) <= 0.05);
  CHECK(a.limit == doctest::Approx(kH1));
  const auto b = entropy_rate_series(spec, 0.5, 0.7, {1024});
  CHECK(std::abs(b.entries[0].value - kH2) <= 0.05);
  CHECK(b.alpha == 0.5);
  CHECK(b.eps == 0.7);

  CHECK_THROWS_AS(entropy_rate_series(spec, 1.0, 0.3, {4}), Error);
  CHECK_THROWS_AS(entropy_rate_series(MixtureSpec({{1.0, {0.5, 0.3, 0.2}}}), 0.5, 0.3, {4000}, 1000),
                  Error);
}

TEST_CASE("series values are nonincreasing in eps") {
  const auto spec = two_coins();
  for (unsigned n : {8u, 64u, 256u}) {
    const auto pn = mixture_extension(spec, n);
    double prev = smooth_renyi_entropy(pn, 0.5, 0.0) / n;
    for (int k = 1; k < 20; ++k) {
      const double v = smooth_renyi_entropy(pn, 0.5, k / 20.0) / n;
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("spectrum_probability examples") {
  const MixtureSpec coin({{1.0, {0.5, 0.5}}});
  for (unsigned n : {1u, 10u, 300u})
    CHECK(spectrum_probability(coin, {n, kH1, SpectrumDirection::Within, 0.01}) ==
          doctest::Approx(1.0).epsilon(1e-12));
  const auto spec = two_coins();
  const double p3 = spectrum_probability(spec, {2048, kH1, SpectrumDirection::Within, 0.05});
  CHECK(p3 >= 0.5);
  CHECK(p3 <= 0.7);
  CHECK(spectrum_probability(spec, {2048, kH2 - 0.05, SpectrumDirection::AtLeast, 0.0}) >= 0.95);
  CHECK_THROWS_AS(spectrum_probability(spec, {0, kH1, SpectrumDirection::AtLeast, 0.0}), Error);
  CHECK_THROWS_AS(spectrum_probability(spec, {8, kH1, SpectrumDirection::Within, -1.0}), Error);
}

TEST_CASE("spectrum probabilities match brute-force enumeration") {
  const auto spec = two_coins();
  for (unsigned n : {1u, 4u, 9u}) {
    const auto seqs = testing::enumerate_mixture_sequences({{0.6, {0.5, 0.5}}, {0.4, {0.89, 0.11}}}, n);
    for (double th : {0.2, 0.35, 0.5, 0.69, 0.9}) {
      double ge = 0.0, le = 0.0, within = 0.0;
      for (double p : seqs) {
        const double si = -std::log(p) / n;
        if (si >= th) ge += p;
        if (si <= th) le += p;
        if (std::abs(si - th) <= 0.1) within += p;
      }
      CHECK(spectrum_probability(spec, {n, th, SpectrumDirection::AtLeast, 0.0}) ==
            doctest::Approx(ge).epsilon(1e-12));
      CHECK(spectrum_probability(spec, {n, th, SpectrumDirection::AtMost, 0.0}) ==
            doctest::Approx(le).epsilon(1e-12));
      CHECK(spectrum_probability(spec, {n, th, SpectrumDirection::Within, 0.1}) ==
            doctest::Approx(within).epsilon(1e-12));
    }
  }
}

TEST_CASE("spectrum tail bounds hold from some blocklength on") {
  const auto spec = two_coins();
  const auto& a = spec.cumulative_weights();
  const auto& h = spec.entropies();
  const double gamma = 0.05;
  const std::vector<unsigned> ns{16, 32, 64, 128, 256, 512, 1024, 2048};
  for (std::size_t i = 0; i < spec.size(); ++i) {
    // Record the first n from which all three bounds hold, then require them at all larger n.
    std::optional<std::size_t> first;
    for (std::size_t t = 0; t < ns.size(); ++t) {
      const unsigned n = ns[t];
      const double l1 = spectrum_probability(spec, {n, h[i] - gamma, SpectrumDirection::AtLeast, 0.0});
      const double l2 = spectrum_probability(spec, {n, h[i] + gamma, SpectrumDirection::AtMost, 0.0});
      const double l3 = spectrum_probability(spec, {n, h[i], SpectrumDirection::Within, gamma});
      const double w = spec.components()[i].weight;
      const bool ok = l1 >= a[i + 1] - gamma && l2 >= 1.0 - a[i] - gamma && l3 >= w - 2 * gamma &&
                      l3 <= w + 2 * gamma;
      if (ok && !first) first = t;
      if (first) CHECK(ok);
    }
    REQUIRE(first.has_value());
    MESSAGE("component " << i + 1 << ": tail bounds hold from n = " << ns[*first]);
    if (i == 0) CHECK(ns[*first] <= 256);
  }
}

TEST_CASE("lower-tail probability of the second component matches a binomial sum") {
  // Sequences of the low-entropy component dominate this event; the other
  // component contributes below 1e-12 at n = 256.
  const auto spec = two_coins();
  const unsigned n = 256;
  const double th = kH2 + 0.05;
  double want = 0.0;
  for (unsigned k = 0; k <= n; ++k) {
    const double lp1 = n * std::log(0.5);
    const double lp2 = k * std::log(0.11) + (n - k) * std::log(0.89);
    const double lmix = std::log(0.6 * std::exp(lp1) + 0.4 * std::exp(lp2));
    if (-lmix / n <= th) {
      const double lbin = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
      want += std::exp(lbin + lmix);
    }
  }
  const double got = spectrum_probability(spec, {n, th, SpectrumDirection::AtMost, 0.0});
  CHECK(got == doctest::Approx(want).epsilon(1e-9));
  CHECK(got < 0.35);
}

TEST_CASE("finite-n window squeezes the series") {
  const auto spec = two_coins();
  // eps interior to [0, 0.6) with margin 6 m gamma = 0.24.
  const double gamma = 0.02;
  for (double eps : {0.24, 0.3, 0.36})
    for (double alpha : {0.3, 0.5, 0.7})
      for (unsigned n : {256u, 512u, 1024u, 2048u}) {
        const auto pn = mixture_extension(spec, n);
        const double v = smooth_renyi_entropy(pn, alpha, eps) / n;
        const auto w = finite_n_window(spec, alpha, eps, gamma, n);
        CHECK(w.lower <= v);
        CHECK(v <= w.upper);
      }
}

TEST_CASE("per-n lower bound by the smooth max entropy") {
  const auto spec = two_coins();
  for (unsigned n : {16u, 128u, 1024u})
    for (double alpha : {0.2, 0.5, 0.8})
      for (double eps : {0.0, 0.3, 0.7})
        for (double eps2 : {0.01, 0.1, 0.25}) {
          const auto pn = mixture_extension(spec, n);
          const double lhs = smooth_renyi_entropy(pn, alpha, eps) / n;
          const double rhs =
              smooth_max_entropy(pn, eps + eps2) / n - std::log(1.0 / eps2) / (n * (1.0 - alpha));
          CHECK(lhs >= rhs - 1e-9);
        }
}

TEST_CASE("power_of_two_schedule") {
  CHECK(power_of_two_schedule(1) == std::vector<unsigned>{1});
  CHECK(power_of_two_schedule(100) == std::vector<unsigned>{1, 2, 4, 8, 16, 32, 64});
  CHECK(power_of_two_schedule(0).empty());
}
