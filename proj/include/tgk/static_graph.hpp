#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tgk {

/// Edge of a StaticLabeledGraph. An empty label means "unlabeled".
struct StaticEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  std::string label;

  friend bool operator==(const StaticEdge&, const StaticEdge&) = default;
};

/// Directed or undirected graph with string vertex and edge labels; the
/// common output of every temporal-to-static transformation. Undirected
/// edges are stored once; parallel edges are allowed.
struct StaticLabeledGraph {
  bool directed = false;
  std::vector<std::string> vertex_labels;
  std::vector<StaticEdge> edges;
  /// Name of the transformation that produced the graph (free text).
  std::string provenance;

  std::size_t vertex_count() const { return vertex_labels.size(); }

  friend bool operator==(const StaticLabeledGraph&, const StaticLabeledGraph&) = default;
};

/// Adjacency view used by walk- and refinement-based kernels. For undirected
/// graphs each edge appears in both endpoint lists.
struct Adjacency {
  struct Arc {
    std::size_t to;
    std::size_t edge;
  };
  std::vector<std::vector<Arc>> out;
  std::vector<std::vector<Arc>> in;
};

Adjacency adjacency(const StaticLabeledGraph& g);

/// Throws ValidationError on self-loops or out-of-range endpoints.
void validate(const StaticLabeledGraph& g);

/// Line format:
///
///     s <vertex_count> directed|undirected [<provenance>]
///     sv <id> <label>
///     se <u> <v> [<label>]
std::string serialize(const StaticLabeledGraph& g);
StaticLabeledGraph parse_static_graph(std::string_view text);

StaticLabeledGraph read_static_graph(const std::string& path);
void write_static_graph(const std::string& path, const StaticLabeledGraph& g);

/// Kahn topological sort. Returns false if the graph has a directed cycle;
/// an undirected graph with at least one edge counts as cyclic.
bool topological_order(const StaticLabeledGraph& g, std::vector<std::size_t>* order = nullptr);

}  // namespace tgk
