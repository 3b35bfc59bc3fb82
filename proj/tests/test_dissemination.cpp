#include <cmath>
#include <filesystem>
#include <limits>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "tgk/dissemination.hpp"

using namespace tgk;

namespace {

std::optional<Time> infection_time(const TemporalGraph& g, VertexId v) {
  for (const auto& [t, l] : g.timeline(v).change_points()) {
    if (l == kInfected) return t;
  }
  return std::nullopt;
}

/// Earliest time-respecting arrival from `seed`, starting at time 1.
std::vector<Time> earliest_arrival(const TemporalGraph& g, VertexId seed) {
  const Time never = std::numeric_limits<Time>::max();
  std::vector<Time> at(g.vertex_count(), never);
  at[seed] = 1;
  for (const auto& e : g.edges()) {  // time order
    if (at[e.u] <= e.t && at[e.v] == never) at[e.v] = e.t + 1;
    else if (at[e.v] <= e.t && at[e.u] == never) at[e.u] = e.t + 1;
  }
  return at;
}

/// Straightforward SI run used as a Monte-Carlo reference: per time step,
/// collect contacts, then apply all infections of the round at once.
bool reference_reaches(const TemporalGraph& g, double p, double I, Rng& rng) {
  std::vector<char> inf(g.vertex_count(), 0);
  inf[rng.uniform_index(g.vertex_count())] = 1;
  const auto need = static_cast<std::size_t>(std::ceil(g.vertex_count() * I - 1e-9));
  std::size_t count = 1;
  for (Time t = 1; t <= g.t_max() && count < need; ++t) {
    std::vector<VertexId> fresh;
    for (const auto& e : g.edges()) {
      if (e.t != t || inf[e.u] == inf[e.v]) continue;
      const VertexId target = inf[e.u] ? e.v : e.u;
      if (std::find(fresh.begin(), fresh.end(), target) != fresh.end()) continue;
      if (rng.uniform01() < p) fresh.push_back(target);
    }
    for (auto v : fresh) inf[v] = 1;
    count += fresh.size();
  }
  return count >= need;
}

/// Share of non-initial infections with an edge at time tau-1 from a vertex
/// infected by then.
double explainable_fraction(const TemporalGraph& g) {
  std::size_t total = 0, explained = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const auto tau = infection_time(g, v);
    if (!tau || *tau == 1) continue;
    ++total;
    for (auto idx : g.incident(v)) {
      const auto& e = g.edge(idx);
      const auto other = infection_time(g, e.other(v));
      if (e.t == *tau - 1 && other && *other <= e.t) {
        ++explained;
        break;
      }
    }
  }
  return total ? static_cast<double>(explained) / static_cast<double>(total) : 0.0;
}

std::vector<TemporalGraph> corpus(std::uint64_t seed, std::size_t count) {
  Rng rng(seed);
  const auto base = random_temporal_graph(60, 900, 40, rng);
  auto all = extract_bfs_subgraphs(base, 25);
  all.resize(count);
  return all;
}

}  // namespace

TEST_CASE("threshold arithmetic") {
  CHECK(infection_threshold(50, 0.5) == 25);
  CHECK(infection_threshold(51, 0.5) == 26);
  CHECK(infection_threshold(10, 0.3) == 3);
  CHECK(infection_threshold(7, 1.0) == 7);
}

TEST_CASE("SI at p = 1 follows earliest arrival") {
  Rng gen(41);
  for (int i = 0; i < 40; ++i) {
    const auto g = oracle::random_graph(gen, 8, 20, 10, 0.0);
    SIConfig cfg{1, 1.0, 1.0, derive_seed(41, i)};
    const auto r = si_simulate(g, cfg);
    VertexId seed = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if (r.infection_time[v] == 1) seed = v;
    const auto at = earliest_arrival(g, seed);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      if (at[v] == std::numeric_limits<Time>::max()) CHECK_FALSE(r.infection_time[v]);
      else CHECK(r.infection_time[v] == at[v]);
      CHECK(infection_time(r.graph, v) == r.infection_time[v]);
    }
  }
}

TEST_CASE("SI invariants") {
  Rng gen(42);
  for (int i = 0; i < 60; ++i) {
    const auto g = oracle::random_graph(gen, 10, 30, 12, 0.0);
    SIConfig cfg{1 + gen.uniform_index(2), 0.5, 0.5, derive_seed(42, i)};
    const auto r = si_simulate(g, cfg);
    std::size_t seeds = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      const auto tau = r.infection_time[v];
      if (!tau) continue;
      if (*tau == 1) {
        ++seeds;
        continue;
      }
      bool explained = false;
      for (auto idx : g.incident(v)) {
        const auto& e = g.edge(idx);
        const auto src = r.infection_time[e.other(v)];
        explained = explained || (e.t == *tau - 1 && src && *src <= e.t);
      }
      CHECK(explained);
    }
    CHECK(seeds == cfg.seeds);
    CHECK(count_infected(r.graph) == r.infected);
    if (!r.below_threshold) CHECK(r.infected >= infection_threshold(g.vertex_count(), 0.5));
    CHECK(si_simulate(g, cfg).graph == r.graph);
  }

  TemporalGraph empty(5, {});
  const auto r = si_simulate(empty, SIConfig{2, 0.1, 0.5, 1});
  CHECK(r.infected == 2);
  CHECK(r.below_threshold);
  CHECK_THROWS_AS(validate(SIConfig{0, 0.5, 0.5, 0}), std::invalid_argument);
  CHECK_THROWS_AS(validate(SIConfig{1, 0.0, 0.5, 0}), std::invalid_argument);
}

TEST_CASE("SI reach probability agrees with a reference simulation") {
  Rng gen(43);
  const auto g = random_temporal_graph(20, 60, 30, gen);
  const int runs = 4000;
  int lib = 0, ref = 0;
  Rng rr(44);
  for (int i = 0; i < runs; ++i) {
    lib += si_simulate(g, SIConfig{1, 0.5, 0.5, derive_seed(45, i)}).below_threshold ? 0 : 1;
    ref += reference_reaches(g, 0.5, 0.5, rr) ? 1 : 0;
  }
  const double p1 = lib / double(runs), p2 = ref / double(runs);
  const double se = std::sqrt(p1 * (1 - p1) / runs + p2 * (1 - p2) / runs);
  CHECK(std::abs(p1 - p2) <= 2 * se + 1e-12);
}

TEST_CASE("BFS extraction") {
  const auto tri = fixture::triangle();
  const auto whole = extract_bfs_subgraphs(tri, 3);
  CHECK(whole.size() == 3);
  for (const auto& s : whole) CHECK(s.edge_count() == 3);
  for (const auto& s : extract_bfs_subgraphs(tri, 1)) {
    CHECK(s.vertex_count() == 1);
    CHECK(s.edge_count() == 0);
  }
  // From a, the neighbor sharing the earliest time stamp is c (time 2).
  const auto two = extract_bfs_subgraphs(tri, 2);
  CHECK(two[fixture::a].edge_count() == 1);
  CHECK(two[fixture::a].edge(0).t == 2);
  CHECK(two[fixture::a].timeline(1).at(1) == "black");

  Rng rng(46);
  const auto base = random_temporal_graph(40, 300, 20, rng);
  for (const auto& s : extract_bfs_subgraphs(base, 12)) {
    CHECK(s.vertex_count() <= 12);
    CHECK(s.vertex_count() >= 1);
  }
  // Induced: every base edge between selected vertices survives.
  const std::vector<VertexId> pick{3, 7, 11, 20};
  const auto sub = induced_subgraph(base, pick);
  std::size_t expected = 0;
  for (const auto& e : base.edges()) {
    const bool in_u = std::find(pick.begin(), pick.end(), e.u) != pick.end();
    const bool in_v = std::find(pick.begin(), pick.end(), e.v) != pick.end();
    expected += in_u && in_v;
  }
  CHECK(sub.edge_count() == expected);
}

TEST_CASE("random temporal graph generator") {
  Rng rng(47);
  const auto g = random_temporal_graph(10, 100, 5, rng);
  CHECK(g.edge_count() == 100);
  CHECK(g.t_max() <= 5);
  CHECK_THROWS_AS(random_temporal_graph(3, 10, 3, rng), std::invalid_argument);
}

TEST_CASE("task 1") {
  const auto graphs = corpus(48, 40);
  const SIConfig cfg{1, 0.5, 0.5, 49};
  const auto d = make_task1(graphs, cfg);
  REQUIRE(d.graphs.size() == 40);
  int pos = 0;
  for (int c : d.classes) pos += c > 0;
  CHECK(pos == 20);
  // Class -1 graphs keep the infected count of their own simulation run.
  for (std::size_t i = 20; i < 40; ++i) {
    Rng rng(derive_seed(cfg.seed, i));
    CHECK(count_infected(d.graphs[i]) == si_simulate(graphs[i], cfg, rng).infected);
    CHECK(d.graphs[i].t_max() == graphs[i].t_max());
  }
  CHECK(make_task1(graphs, cfg).graphs == d.graphs);

  double explained_neg = 0, explained_null = 0, explained_pos = 0;
  Rng null_rng(50);
  for (std::size_t i = 0; i < 40; ++i) {
    if (i < 20) {
      explained_pos += explainable_fraction(d.graphs[i]) / 20;
      continue;
    }
    explained_neg += explainable_fraction(d.graphs[i]) / 20;
    const auto& g = graphs[i];
    std::vector<LabelTimeline> labels(g.vertex_count());
    for (auto v : null_rng.choose(g.vertex_count(), count_infected(d.graphs[i]))) {
      const Time t = null_rng.uniform_int(1, g.t_max() + 1);
      labels[v] = t == 1 ? LabelTimeline("1") : LabelTimeline({{1, "0"}, {t, "1"}});
    }
    explained_null += explainable_fraction(g.with_labels(labels)) / 20;
  }
  CHECK(explained_pos == doctest::Approx(1.0));
  CHECK(std::abs(explained_neg - explained_null) < 0.1);
}

TEST_CASE("task 2") {
  const auto graphs = corpus(51, 30);
  const auto d = make_task2(graphs, 0.2, 0.8, 52);
  double time_low = 0, time_high = 0;
  std::size_t n_low = 0, n_high = 0;
  for (std::size_t i = 0; i < d.graphs.size(); ++i) {
    const auto& g = d.graphs[i];
    CHECK(count_infected(g) >= infection_threshold(g.vertex_count(), 0.5));
    Time last = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) last = std::max(last, infection_time(g, v).value_or(0));
    (d.classes[i] > 0 ? time_low : time_high) += static_cast<double>(last);
    (d.classes[i] > 0 ? n_low : n_high) += 1;
  }
  CHECK(time_low / n_low > time_high / n_high);
  CHECK(make_task2(graphs, 0.2, 0.8, 52).graphs == d.graphs);
  CHECK_THROWS_AS(make_task2(graphs, 0.8, 0.2, 1), std::invalid_argument);

  // A graph without edges can never reach the threshold and is dropped.
  std::vector<TemporalGraph> with_dead = {graphs[0], TemporalGraph(6, {})};
  const auto dropped = make_task2(with_dead, 0.5, 0.5, 3, 1, 0.5, 5);
  CHECK(dropped.graphs.size() == 1);
  CHECK(dropped.notes.size() == 1);
}

TEST_CASE("incomplete information resets") {
  const auto graphs = corpus(53, 20);
  const auto d = make_task1(graphs, SIConfig{1, 0.5, 0.5, 54});
  std::vector<std::size_t> counts;
  std::vector<Dataset> runs;
  for (std::uint64_t s = 0; s < 10; ++s) runs.push_back(reset_infections(d, 0.5, s));
  for (std::size_t i = 0; i < d.graphs.size(); ++i) {
    const auto before = count_infected(d.graphs[i]);
    for (const auto& r : runs) CHECK(count_infected(r.graphs[i]) == before - before / 2);
  }
  for (std::size_t a = 0; a < runs.size(); ++a)
    for (std::size_t b = a + 1; b < runs.size(); ++b) CHECK_FALSE(runs[a].graphs == runs[b].graphs);
  CHECK(runs[0].classes == d.classes);

  // floor(0.3 * 10) = 3
  std::vector<LabelTimeline> ten(12);
  for (int v = 0; v < 10; ++v) ten[v] = LabelTimeline("1");
  Dataset one{{TemporalGraph(12, {}, ten)}, {1}, 1, {}, 0, 0, {}};
  CHECK(count_infected(reset_infections(one, 0.3, 1).graphs[0]) == 7);
  CHECK(reset_infections(one, 0.05, 1).graphs == one.graphs);
  CHECK_THROWS_AS(reset_infections(one, 1.0, 1), std::invalid_argument);
}

TEST_CASE("dataset directory round-trip") {
  const auto dir = std::filesystem::temp_directory_path() / "tgk_dataset_test";
  std::filesystem::remove_all(dir);
  const auto d = make_task1(corpus(55, 6), SIConfig{1, 0.5, 0.5, 56});
  write_dataset(dir.string(), d);
  const auto back = read_dataset(dir.string());
  CHECK(back.graphs == d.graphs);
  CHECK(back.classes == d.classes);
  CHECK(back.task == 1);
  std::filesystem::remove_all(dir);
}
