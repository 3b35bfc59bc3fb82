#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "tgk/sampling.hpp"

using namespace tgk;

TEST_CASE("sample size bound") {
  const auto s = sample_size({100, 1000, 0.05, 0.1});
  CHECK(s == static_cast<std::uint64_t>(std::ceil(std::log(4e6) / (2 * 1e-8))));
  CHECK(std::abs(static_cast<double>(s) - 7.6009e8) < 1e5);

  const double base = static_cast<double>(sample_size({10, 50, 0.1, 0.05}));
  const double wider = static_cast<double>(sample_size({10, 50, 0.1, 0.05 * std::sqrt(10.0)}));
  CHECK(std::abs(base - 10 * wider) <= 10);  // both sides rounded up

  const double halved = static_cast<double>(sample_size({10, 50, 0.05, 0.05}));
  CHECK(std::abs(halved - base - std::log(2.0) / (2 * std::pow(0.05 / 50, 2))) <= 1);

  CHECK(sample_size({1, 1, 0.9, 100}) == 1);
  CHECK_THROWS_AS(sample_size({1e6, 1e9, 0.01, 1e-6}), OverflowError);
  CHECK_THROWS_AS(sample_size({1, 1, 1.5, 0.1}), std::invalid_argument);
  CHECK(pattern_bound(3, 2) == 81);
}

TEST_CASE("unique walks are always found") {
  const auto g = fixture::triangle();
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto w = sample_temporal_walk(g, 3, rng);
    CHECK(w.vertices == std::vector<VertexId>{fixture::c, fixture::a, fixture::b, fixture::c});
  }
  TemporalGraph path(4, {{0, 1, 1}, {1, 2, 2}, {2, 3, 3}});
  const auto w = sample_temporal_walk(path, 3, rng);
  CHECK(w.vertices == std::vector<VertexId>{0, 1, 2, 3});

  SamplerConfig cfg;
  cfg.k = 3;
  cfg.samples = 17;
  const auto f = approx_feature_map(path, cfg);
  CHECK(f.size() == 1);
  CHECK(f.entries()[0].second == 17);
  CHECK(f.denominator() == 17);
  CHECK(approx_kernel(f, f) == 1);
}

TEST_CASE("missing walks are reported") {
  TemporalGraph star(4, {{0, 1, 2}, {0, 2, 2}, {0, 3, 2}});
  Rng rng(2);
  CHECK_FALSE(has_temporal_walk(star, 2));
  CHECK(has_temporal_walk(star, 1));
  CHECK_THROWS_AS(sample_temporal_walk(star, 2, rng, true, 1000), NoWalkError);
  CHECK_THROWS_AS(sample_temporal_walk(TemporalGraph(2, {}), 1, rng), NoWalkError);

  // Walks exist, but a budget of one attempt rarely suffices.
  const auto g = fixture::triangle();
  bool budget_hit = false;
  for (int i = 0; i < 50 && !budget_hit; ++i) {
    try {
      sample_temporal_walk(g, 3, rng, true, 1);
    } catch (const RetryBudgetError&) {
      budget_hit = true;
    }
  }
  CHECK(budget_hit);
}

TEST_CASE("has_temporal_walk agrees with enumeration") {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const auto g = oracle::random_graph(rng, 6, 10, 6);
    for (int k = 1; k <= 4; ++k) {
      CHECK(has_temporal_walk(g, k) == (oracle::total(oracle::temporal_walks(g, k)) > 0));
    }
  }
}

TEST_CASE("accepted walks are uniform") {
  Rng gen(4);
  int tested = 0;
  while (tested < 5) {
    const auto g = oracle::random_graph(gen, 6, 9, 6);
    const auto walks = enumerate_temporal_walks(g, 2);
    if (walks.size() < 3 || walks.size() > 12) continue;
    ++tested;
    std::map<TemporalWalk, int> hits;
    Rng rng(derive_seed(5, tested));
    const int n = 40000;
    for (int i = 0; i < n; ++i) ++hits[sample_temporal_walk(g, 2, rng)];
    CHECK(hits.size() == walks.size());
    double tv = 0;
    for (const auto& w : walks) tv += std::abs(hits[w] / double(n) - 1.0 / walks.size());
    CHECK(tv / 2 < 0.02);
  }
}

TEST_CASE("sampled histograms are reproducible and normalized") {
  Rng gen(6);
  TemporalGraph g;
  do {
    g = oracle::random_graph(gen, 6, 12, 5);
  } while (!has_temporal_walk(g, 2));
  SamplerConfig cfg;
  cfg.k = 2;
  cfg.samples = 500;
  cfg.seed = 99;
  const auto f1 = approx_feature_map(g, cfg);
  const auto f2 = approx_feature_map(g, cfg);
  CHECK(f1 == f2);
  CHECK(f1.total() == 500);
  cfg.seed = 100;
  CHECK_FALSE(approx_feature_map(g, cfg) == f1);

  SamplerConfig other = cfg;
  other.k = 1;
  CHECK_THROWS_AS(approx_kernel(f1, approx_feature_map(g, other)), std::invalid_argument);
  CHECK(approx_kernel(f1, f1) <= 1.0);

  // Splitting samples across workers: sample i is fixed by its stream alone.
  Rng s3(derive_seed(cfg.seed, 3));
  const auto w3 = sample_temporal_walk(g, 2, s3);
  Rng again(derive_seed(cfg.seed, 3));
  CHECK(sample_temporal_walk(g, 2, again) == w3);
}

TEST_CASE("invalid sampler configuration") {
  SamplerConfig cfg;
  cfg.k = 0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
  cfg.k = 1;
  cfg.samples = 0;
  CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
}
