#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tgk/random.hpp"
#include "tgk/temporal_graph.hpp"

namespace tgk {

inline constexpr std::string_view kSusceptible = "0";
inline constexpr std::string_view kInfected = "1";

/// Parameters of one SI run.
struct SIConfig {
  std::size_t seeds = 1;         ///< s, initially infected vertices
  double p = 0.5;                ///< per-contact infection probability
  double target_fraction = 0.5;  ///< I, stop once ceil(|V| I) are infected
  std::uint64_t seed = 0;        ///< RNG seed
};

/// Throws std::invalid_argument unless s >= 1 and p, I lie in (0, 1].
void validate(const SIConfig& cfg);

/// ceil(|V| * I), with a guard against round-off in the product.
std::size_t infection_threshold(std::size_t vertex_count, double target_fraction);

struct SIResult {
  /// Input graph with binary timelines: "0" until the infection time, "1" after.
  TemporalGraph graph;
  std::vector<std::optional<Time>> infection_time;
  std::size_t infected = 0;
  /// The run ended without reaching the threshold.
  bool below_threshold = false;
};

/// Synchronous SI process. Seeds are infected at time 1. In round t every
/// edge at time t between an infected and a susceptible vertex transmits
/// independently with probability p; the target becomes infected at t + 1
/// and can transmit from round t + 1 on. Stops once the threshold is met or
/// no edges remain.
SIResult si_simulate(const TemporalGraph& g, const SIConfig& cfg, Rng& rng);
SIResult si_simulate(const TemporalGraph& g, const SIConfig& cfg);

/// Number of vertices whose label is "1" at the end of their timeline.
std::size_t count_infected(const TemporalGraph& g);

/// Induced temporal subgraph on `vertices`; vertex i of the result is vertices[i].
TemporalGraph induced_subgraph(const TemporalGraph& g, std::span<const VertexId> vertices);

/// One induced subgraph per start vertex, grown breadth-first over the
/// underlying static graph until the next vertex would exceed `cap`.
/// Neighbors are visited by (earliest shared time stamp, id).
std::vector<TemporalGraph> extract_bfs_subgraphs(const TemporalGraph& g, std::size_t cap);

/// Uniform random temporal graph: `edges` distinct (pair, time) triples with
/// times in 1..t_max. Throws std::invalid_argument if that many do not exist.
TemporalGraph random_temporal_graph(std::size_t vertices, std::size_t edges, Time t_max, Rng& rng);

/// Graphs with class labels and the recipe that produced them.
struct Dataset {
  std::vector<TemporalGraph> graphs;
  std::vector<int> classes;  ///< +1 or -1 per graph
  int task = 0;
  std::vector<SIConfig> configs;  ///< SI parameters per class (+1 first)
  std::size_t cap = 0;            ///< BFS vertex budget of the extraction, 0 if none
  std::uint64_t seed = 0;
  std::vector<std::string> notes;  ///< warnings and reset records
};

/// Task 1: the first half of `graphs` carries SI labels (class +1); each graph
/// of the second half is simulated, then its V_inf infections are replaced by
/// V_inf uniformly chosen vertices infected at uniform times in 1..t_max+1
/// (class -1). Graph i uses the stream derive_seed(cfg.seed, i).
Dataset make_task1(std::span<const TemporalGraph> graphs, const SIConfig& cfg);

inline constexpr std::size_t kTask2RetryBudget = 100;

/// Task 2: both halves simulated with s seeds and target fraction I; class +1
/// uses p_low and class -1 p_high. Each graph is re-simulated from scratch
/// until it reaches the threshold; graphs that never do within `retry_budget`
/// runs are dropped and noted.
Dataset make_task2(std::span<const TemporalGraph> graphs, double p_low, double p_high, std::uint64_t seed,
                   std::size_t seeds = 1, double target_fraction = 0.5,
                   std::size_t retry_budget = kTask2RetryBudget);

/// Resets floor(fraction * #infected) uniformly chosen infected vertices of
/// every graph to a constant susceptible timeline.
Dataset reset_infections(const Dataset& d, double fraction, std::uint64_t seed);

/// Directory layout: graph_NNNN.tg per graph, labels.txt ("<id> <class>"),
/// meta.txt (key = value).
void write_dataset(const std::string& dir, const Dataset& d);
Dataset read_dataset(const std::string& dir);

std::string graph_id(std::size_t index);

}  // namespace tgk
