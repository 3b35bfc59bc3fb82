#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tgk/temporal_graph.hpp"

// Pipeline stages behind the subcommands. Every stage reads a directory
// produced upstream (verifying its manifest), writes its artifacts
// atomically into `out` and appends a stage record to out/manifest.txt.

namespace tgk::cli {

/// Upper bound on worker threads inside a stage; 0 means one per core.
void set_thread_limit(std::size_t threads);
std::size_t thread_limit();

struct SimulateOptions {
  int task = 1;
  std::size_t s = 1;
  double p = 0.5;
  std::optional<double> p2;  ///< class -1 probability, task 2 only
  double I = 0.5;
  std::uint64_t seed = 0;
  std::string out;
  // Source graphs: BFS subgraphs of `input`, or `graphs` uniform random graphs.
  std::string input;
  std::size_t cap = 0;
  std::size_t graphs = 0;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  Time tmax = 0;
  double reset = 0;  ///< fraction of infected vertices to reset, 0 for none
};

struct TransformOptions {
  std::string method;
  bool waiting = false;
  std::string in;
  std::string out;
};

struct GramOptions {
  std::string kernel;       ///< rw or wl
  std::vector<int> params;  ///< k or h values, one Gram file each
  bool normalize = false;
  bool features = false;    ///< also write per-graph feature vectors
  std::string in;
  std::string out;
};

struct SampleOptions {
  std::vector<int> ks;  ///< walk lengths, one Gram file each
  std::size_t samples = 1;
  bool reject = true;
  std::uint64_t seed = 0;
  bool features = false;
  std::string in;
  std::string out;
};

struct ClassifyOptions {
  std::vector<std::string> grams;  ///< one directory per method
  std::string labels;              ///< defaults to labels.txt of the first Gram directory
  std::size_t folds = 10;
  std::size_t reps = 10;
  std::uint64_t seed = 0;
  std::string out;                 ///< results directory, empty to only print
};

void simulate(const SimulateOptions& o);
void transform(const TransformOptions& o);
void gram(const GramOptions& o);
void sample(const SampleOptions& o);
void classify(const ClassifyOptions& o);

/// Runs simulate, transform, gram or sample, and classify from an experiment
/// file into `out`. See the README for the schema.
void pipeline(const std::string& experiment, const std::string& out);

}  // namespace tgk::cli
