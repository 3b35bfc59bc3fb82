// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tgk/cross_validation.hpp"
#include "tgk/dissemination.hpp"
#include "tgk/kernels.hpp"
#include "tgk/sampling.hpp"
#include "tgk/svm.hpp"
#include "tgk/transform.hpp"

using namespace tgk;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

/// `limit` is a wall-clock budget in seconds, 0 for none.
void run(int id, const char* title, const std::function<Outcome()>& body, double limit = 0) {
  const auto t0 = Clock::now();
  Outcome r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed = seconds_since(t0);
  if (limit > 0 && elapsed >= limit) r = {false, r.detail + fmt(", over the %.0fs budget", limit)};
  std::printf("%s %2d %s: %s (%.1fs)\n", r.pass ? "PASS" : "FAIL", id, title, r.detail.c_str(), elapsed);
  std::fflush(stdout);
  failures += !r.pass;
}

std::vector<TemporalGraph> small_corpus(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<TemporalGraph> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(oracle::random_graph(rng, 8, 15, 10));
  return out;
}

oracle::Census flatten_dl(const oracle::Census& walks) {
  oracle::Census out;
  for (const auto& [seq, n] : walks) {
    oracle::Sequence flat;
    for (std::size_t i = 0; i < seq.size(); i += 2) {
      const auto bar = seq[i].find('|');
      flat.push_back(seq[i].substr(0, bar));
      flat.push_back(seq[i].substr(bar + 1));
    }
    out[flat] += n;
  }
  return out;
}

Outcome walk_bijection() {
  const auto corpus = small_corpus(101, 200);
  std::size_t mismatches = 0, compared = 0;
  for (const auto& g : corpus) {
    const auto dl = dl_expand(g);
    for (std::size_t len = 0; len <= 4; ++len) {
      const auto lhs = flatten_dl(oracle::static_walks(dl, len));
      oracle::Census rhs;
      for (const auto& w : enumerate_temporal_walks(g, len + 1)) ++rhs[label_sequence(g, w)];
      mismatches += oracle::total(lhs) != oracle::total(rhs) || lhs != rhs;
      ++compared;
    }
  }
  return {mismatches == 0, fmt("%zu of %zu (graph, length) pairs disagree", mismatches, compared)};
}

Outcome size_bounds() {
  std::size_t violations = 0;
  for (const auto& g : small_corpus(101, 200)) {
    const auto dl = dl_expand(g);
    const auto se = static_expand(g);
    const std::size_t m = g.edge_count();
    std::size_t sq = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) sq += temporal_degree(g, v) * temporal_degree(g, v);
    violations += dl.vertex_count() != 2 * m;
    violations += 2 * (dl.edges.size() + m) > sq;
    violations += se.vertex_count() > 4 * m;
    violations += se.edges.size() > 6 * m;
  }
  return {violations == 0, fmt("%zu violations", violations)};
}

Outcome triangle_expansions() {
  using fixture::a, fixture::b, fixture::c;
  using EdgeSet = std::set<std::tuple<std::size_t, std::size_t, std::string>>;
  const auto g = fixture::triangle();
  auto edge_set = [](const StaticLabeledGraph& s) {
    EdgeSet out;
    for (const auto& e : s.edges) out.emplace(e.u, e.v, e.label);
    return out;
  };

  const auto dl = dl_expand(g);
  const auto dk = dl_vertex_keys(g);
  auto d = [&](VertexId s, VertexId t, Time time) {
    return static_cast<std::size_t>(std::find(dk.begin(), dk.end(), DLVertexKey{s, t, time}) - dk.begin());
  };
  const EdgeSet dl_want{{d(a, c, 2), d(c, b, 7), ""}, {d(c, a, 2), d(a, b, 3), ""}, {d(a, b, 3), d(b, c, 7), ""}};
  const bool dl_ok = dl.directed && dl.vertex_count() == 6 && dl.edges.size() == 3 && edge_set(dl) == dl_want;

  const auto se = static_expand(g);
  const auto sk = se_time_vertices(g);
  auto s = [&](VertexId w, Time t) {
    return static_cast<std::size_t>(std::find(sk.begin(), sk.end(), TimeVertexKey{w, t}) - sk.begin());
  };
  const std::string eta = "eta", omega = "omega";
  const EdgeSet se_want{
      {s(a, 2), s(c, 3), eta},   {s(c, 2), s(a, 3), eta},   {s(a, 3), s(b, 4), eta},
      {s(b, 3), s(a, 4), eta},   {s(b, 7), s(c, 8), eta},   {s(c, 7), s(b, 8), eta},
      {s(a, 2), s(a, 3), omega}, {s(b, 3), s(b, 7), omega}, {s(b, 4), s(b, 7), omega},
      {s(c, 2), s(c, 7), omega}, {s(c, 3), s(c, 7), omega},
  };
  const auto etas = std::count_if(se.edges.begin(), se.edges.end(), [&](const auto& e) { return e.label == eta; });
  const bool se_ok = se.directed && se.vertex_count() == 11 && se.edges.size() == 11 && etas == 6 &&
                     edge_set(se) == se_want;
  return {dl_ok && se_ok, fmt("DL %zu vertices %zu arcs %s, SE %zu vertices %zu eta %zu omega %s",
                              dl.vertex_count(), dl.edges.size(), dl_ok ? "match" : "differ", se.vertex_count(),
                              static_cast<std::size_t>(etas), se.edges.size() - etas, se_ok ? "match" : "differ")};
}

Outcome acyclicity() {
  Rng rng(104);
  std::size_t cycles = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto g = oracle::random_graph(rng, 10, 30, 12);
    cycles += !topological_order(dl_expand(g));
    cycles += !topological_order(static_expand(g));
  }
  return {cycles == 0, fmt("%zu cyclic outputs over 1000 graphs", cycles)};
}

Outcome kernel_validity() {
  Rng rng(105);
  std::vector<TemporalGraph> graphs;
  while (graphs.size() < 30) {
    auto g = oracle::random_graph(rng, 8, 15, 10);
    if (g.edge_count() > 0) graphs.push_back(std::move(g));
  }
  double worst_eig = 1e300, worst_diag = 0;
  for (auto t : {Transformation::Reduced, Transformation::DirectedLine, Transformation::StaticExpansion,
                 Transformation::Baseline}) {
    std::vector<StaticLabeledGraph> statics;
    for (const auto& g : graphs) statics.push_back(apply(t, g));
    for (auto kind : {KernelKind::RandomWalk, KernelKind::WeisfeilerLehman}) {
      std::vector<FeatureVector> fs;
      for (const auto& s : statics) fs.push_back(kind == KernelKind::RandomWalk ? rw_feature_map(s, 3) : wl_feature_map(s, 3));
      const auto k = normalize(gram(fs));
      worst_eig = std::min(worst_eig, min_eigenvalue(k.values));
      worst_diag = std::max(worst_diag, (k.values.diagonal().array() - 1).abs().maxCoeff());
    }
  }
  return {worst_eig >= -1e-8 && worst_diag <= 1e-12,
          fmt("min eigenvalue %.3g, max |diag - 1| %.3g", worst_eig, worst_diag)};
}

Outcome sampler_uniformity() {
  Rng gen(106);
  double worst = 0;
  int tested = 0;
  while (tested < 20) {
    const auto g = oracle::random_graph(gen, 6, 9, 6);
    const auto walks = enumerate_temporal_walks(g, 3);
    if (walks.size() < 2 || walks.size() > 12) continue;
    ++tested;
    std::map<TemporalWalk, int> hits;
    Rng rng(derive_seed(107, tested));
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++hits[sample_temporal_walk(g, 3, rng)];
    double tv = 0;
    if (hits.size() != walks.size()) tv = 1;  // sampled something outside the enumeration
    for (const auto& w : walks) tv += std::abs(hits[w] / double(n) - 1.0 / walks.size());
    worst = std::max(worst, tv / 2);
  }
  return {worst < 0.02, fmt("worst TV distance %.4f over %d graphs", worst, tested)};
}

/// l1-normalized k-walk label histogram from full enumeration.
FeatureVector exact_walk_histogram(const TemporalGraph& g, int k) {
  std::unordered_map<Key128, std::uint64_t> counts;
  std::uint64_t n = 0;
  for (const auto& w : enumerate_temporal_walks(g, static_cast<std::size_t>(k))) {
    ++counts[sequence_key(label_sequence(g, w))];
    ++n;
  }
  return FeatureVector::from_counts(KernelKind::SampledWalk, k, counts, n);
}

Outcome approximation_bound() {
  const int k = 2;
  // Two five-vertex graphs with a handful of binary-labelled 2-walk patterns.
  const TemporalGraph g1(5, {{0, 1, 1}, {1, 2, 2}, {2, 3, 3}, {1, 3, 4}, {3, 4, 5}, {0, 2, 3}},
                         {LabelTimeline(), LabelTimeline({{1, "0"}, {3, "1"}}), LabelTimeline("1"), LabelTimeline(),
                          LabelTimeline({{1, "0"}, {5, "1"}})});
  const TemporalGraph g2(5, {{0, 1, 2}, {1, 2, 3}, {0, 2, 4}, {2, 3, 5}, {3, 4, 6}, {1, 4, 1}},
                         {LabelTimeline("1"), LabelTimeline(), LabelTimeline({{1, "0"}, {4, "1"}}), LabelTimeline(),
                          LabelTimeline("1")});
  const auto e1 = exact_walk_histogram(g1, k), e2 = exact_walk_histogram(g2, k);
  std::set<Key128> patterns;
  for (const auto& [key, n] : e1.entries()) patterns.insert(key);
  for (const auto& [key, n] : e2.entries()) patterns.insert(key);
  const double gamma = static_cast<double>(patterns.size());
  const double lambda = 0.1;
  const double exact = inner_product(e1, e2);

  auto error = [&](std::size_t samples, std::uint64_t seed) {
    SamplerConfig cfg;
    cfg.k = k;
    cfg.samples = samples;
    cfg.seed = derive_seed(seed, 1);
    const auto f1 = approx_feature_map(g1, cfg);
    cfg.seed = derive_seed(seed, 2);
    const auto f2 = approx_feature_map(g2, cfg);
    return std::abs(approx_kernel(f1, f2) - exact);
  };

  const std::uint64_t s = sample_size({2, gamma, 0.2, lambda});
  int within = 0;
  for (int trial = 0; trial < 100; ++trial) within += error(s, derive_seed(108, trial)) <= 3 * lambda;

  std::vector<double> medians;
  for (std::size_t samples : {100, 1000, 10000}) {
    std::vector<double> errs;
    for (int trial = 0; trial < 50; ++trial) errs.push_back(error(samples, derive_seed(109 + samples, trial)));
    std::nth_element(errs.begin(), errs.begin() + 25, errs.end());
    const double hi = errs[25];
    const double lo = *std::max_element(errs.begin(), errs.begin() + 25);
    medians.push_back((lo + hi) / 2);
  }
  const bool monotone = medians[1] <= medians[0] && medians[2] <= medians[1];
  return {within >= 80 && monotone,
          fmt("Gamma %.0f, S %llu, %d/100 within 3 lambda; median error %.4f, %.4f, %.4f at S = 1e2, 1e3, 1e4", gamma,
              static_cast<unsigned long long>(s), within, medians[0], medians[1], medians[2])};
}

// Synthetic classification data: 200 uniform random temporal graphs on 50
// vertices with 400 time-stamped edges in 1..30.
std::vector<TemporalGraph> synthetic_graphs() {
  std::vector<TemporalGraph> gs;
  for (int i = 0; i < 200; ++i) {
    Rng r(derive_seed(7, i));
    gs.push_back(random_temporal_graph(50, 400, 30, r));
  }
  return gs;
}

GramFamily wl_family(const Dataset& d, Transformation t, int h_max) {
  std::vector<std::vector<FeatureVector>> per(h_max + 1);
  for (const auto& g : d.graphs) {
    const auto fs = wl_feature_maps(apply(t, g), h_max);
    for (int h = 0; h <= h_max; ++h) per[h].push_back(fs[h]);
  }
  GramFamily f;
  for (int h = 0; h <= h_max; ++h) f[h] = normalize(gram(per[h]));
  return f;
}

struct Accuracies {
  double dl, se, stat;
};

Accuracies classify(const Dataset& d) {
  CvProtocol p;
  p.seed = 5;
  auto acc = [&](Transformation t) { return cross_validate(wl_family(d, t, 5), d.classes, p).mean; };
  return {acc(Transformation::DirectedLine), acc(Transformation::StaticExpansion), acc(Transformation::Baseline)};
}

const std::vector<TemporalGraph>& graphs() {
  static const auto gs = synthetic_graphs();
  return gs;
}

const Dataset& task1() {
  static const auto d = make_task1(graphs(), SIConfig{1, 0.5, 0.5, 11});
  return d;
}

Outcome directional() {
  const auto a1 = classify(task1());
  const auto d2 = make_task2(graphs(), 0.2, 0.8, 11);
  const auto a2 = classify(d2);
  const bool ok1 = a1.dl - a1.stat >= 10 && a1.se - a1.stat >= 10 && a1.dl >= 75 && a1.se >= 75;
  const bool ok2 = a2.dl - a2.stat >= 5 && a2.se - a2.stat >= 5;
  return {ok1 && ok2,
          fmt("task 1 DL %.2f SE %.2f Stat %.2f; task 2 (%zu graphs) DL %.2f SE %.2f Stat %.2f", a1.dl, a1.se,
              a1.stat, d2.graphs.size(), a2.dl, a2.se, a2.stat)};
}

Outcome incomplete_information() {
  const auto a = classify(reset_infections(task1(), 0.5, 13));
  return {a.dl >= 65 && a.se >= 65 && a.stat <= 60, fmt("DL %.2f SE %.2f Stat %.2f", a.dl, a.se, a.stat)};
}

Outcome svm_oracle() {
  Rng rng(110);
  double worst = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const bool separable = trial % 2 == 0;
    auto [K, y] = oracle::linear_problem(rng, 20, 3, separable ? 0.0 : 0.15, separable ? 0.15 : 0.0);
    for (double C : {0.1, 1.0, 10.0}) {
      const auto m = svm_train(K, y, C);
      worst = std::max(worst, std::abs(dual_objective(m, K, y) - oracle::svm_objective(K, y, C)));
    }
  }

  // Permutation null: task-1 DL-WL Grams with shuffled class labels.
  const auto family = wl_family(task1(), Transformation::DirectedLine, 2);
  double null_sum = 0;
  const int permutations = 5;
  for (int i = 0; i < permutations; ++i) {
    auto y = task1().classes;
    Rng shuffle(derive_seed(111, i));
    shuffle.shuffle(y);
    CvProtocol p;
    p.repetitions = 2;
    p.seed = derive_seed(112, i);
    null_sum += cross_validate(family, y, p).mean;
  }
  const double null_acc = null_sum / permutations;
  return {worst <= 1e-4 && null_acc >= 40 && null_acc <= 60,
          fmt("max objective gap %.2g over 30 problems; permutation-null accuracy %.2f", worst, null_acc)};
}

}  // namespace

int main() {
  run(1, "walk bijection", walk_bijection, 30);
  run(2, "size bounds", size_bounds);
  run(3, "triangle expansions", triangle_expansions);
  run(4, "acyclicity", acyclicity);
  run(5, "kernel validity", kernel_validity);
  run(6, "sampler uniformity", sampler_uniformity, 60);
  run(7, "approximation bound", approximation_bound);
  run(8, "directional classification", directional, 900);
  run(9, "incomplete information", incomplete_information);
  run(10, "svm oracle", svm_oracle);
  return failures == 0 ? 0 : 1;
}
