#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace tgk {

using VertexId = std::size_t;
using Time = std::int64_t;

/// Label of vertices that carry no explicit timeline.
inline constexpr std::string_view kDefaultLabel = "0";

/// Undirected edge available at time `t`. Stored with u < v.
struct TemporalEdge {
  VertexId u = 0;
  VertexId v = 0;
  Time t = 1;

  /// Endpoint opposite to `w`.
  VertexId other(VertexId w) const { return w == u ? v : u; }
  bool touches(VertexId w) const { return w == u || w == v; }

  friend bool operator==(const TemporalEdge&, const TemporalEdge&) = default;
};

/// Orders edges by (t, u, v); the canonical edge order of a TemporalGraph.
inline bool edge_time_less(const TemporalEdge& a, const TemporalEdge& b) {
  return std::tie(a.t, a.u, a.v) < std::tie(b.t, b.u, b.v);
}

/// Piecewise-constant vertex label over time.
///
/// Change points are strictly increasing in time and the first one is at
/// time 1. Consecutive change points with equal labels are merged.
class LabelTimeline {
 public:
  using ChangePoint = std::pair<Time, std::string>;

  LabelTimeline() : points_{{1, std::string(kDefaultLabel)}} {}
  explicit LabelTimeline(std::string label) : points_{{1, std::move(label)}} {}
  explicit LabelTimeline(std::vector<ChangePoint> points);

  const std::string& at(Time t) const;
  const std::vector<ChangePoint>& change_points() const { return points_; }
  bool is_constant() const { return points_.size() == 1; }
  /// Time of the first label change, if any.
  std::optional<Time> first_change() const;

  friend bool operator==(const LabelTimeline&, const LabelTimeline&) = default;

 private:
  std::vector<ChangePoint> points_;
};

/// True if `label` can be stored in a timeline: non-empty and free of
/// whitespace and the reserved separators , : |
bool is_valid_label(std::string_view label);

/// Labeled, undirected temporal graph. Immutable after construction.
class TemporalGraph {
 public:
  TemporalGraph() = default;

  /// Validates and canonicalizes: endpoints are ordered, edges sorted by
  /// (t, u, v). Missing timelines default to the constant label "0".
  /// Throws ValidationError on self-loops, out-of-range endpoints,
  /// non-positive times or duplicate (u, v, t) triples.
  TemporalGraph(std::size_t vertex_count, std::vector<TemporalEdge> edges,
                std::vector<LabelTimeline> labels = {});

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<TemporalEdge>& edges() const { return edges_; }
  const TemporalEdge& edge(std::size_t i) const { return edges_[i]; }

  /// Largest time stamp, 0 for an edgeless graph.
  Time t_max() const { return t_max_; }

  const LabelTimeline& timeline(VertexId v) const;
  const std::vector<LabelTimeline>& timelines() const { return labels_; }
  const std::string& label(VertexId v, Time t) const { return timeline(v).at(t); }

  /// Indices into edges() of the edges incident to v, in (t, u, v) order.
  const std::vector<std::size_t>& incident(VertexId v) const;

  /// Copy with replaced timelines; the edge set is shared unchanged.
  TemporalGraph with_labels(std::vector<LabelTimeline> labels) const;

  friend bool operator==(const TemporalGraph& a, const TemporalGraph& b) {
    return a.vertex_count_ == b.vertex_count_ && a.edges_ == b.edges_ && a.labels_ == b.labels_;
  }

 private:
  void check_vertex(VertexId v) const;

  std::size_t vertex_count_ = 0;
  std::vector<TemporalEdge> edges_;
  std::vector<LabelTimeline> labels_;
  std::vector<std::vector<std::size_t>> incident_;
  Time t_max_ = 0;
};

/// Alternating sequence of vertices and temporal edges with strictly
/// increasing times. `edges[i]` connects `vertices[i]` and `vertices[i+1]`.
struct TemporalWalk {
  std::vector<VertexId> vertices;
  std::vector<TemporalEdge> edges;

  std::size_t length() const { return edges.size(); }
  /// Waiting time at vertices[i] for 1 <= i < length().
  Time waiting_time(std::size_t i) const { return edges[i].t - (edges[i - 1].t + 1); }

  friend auto operator<=>(const TemporalWalk& a, const TemporalWalk& b) {
    if (auto c = a.vertices <=> b.vertices; c != 0) return c;
    return std::lexicographical_compare_three_way(
        a.edges.begin(), a.edges.end(), b.edges.begin(), b.edges.end(),
        [](const TemporalEdge& x, const TemporalEdge& y) {
          return std::tie(x.t, x.u, x.v) <=> std::tie(y.t, y.u, y.v);
        });
  }
  friend bool operator==(const TemporalWalk&, const TemporalWalk&) = default;
};

/// Parses the line-based temporal graph format:
///
///     # comment
///     t <vertex_count>
///     v <id> <t1>:<label1>[,<t2>:<label2>...]
///     e <u> <v> <t>
///
/// Throws ParseError (with line number) on malformed lines and
/// ValidationError on model violations.
TemporalGraph parse_temporal_graph(std::string_view text);

/// Byte-deterministic serialization; parse_temporal_graph inverts it.
std::string serialize(const TemporalGraph& g);

TemporalGraph read_temporal_graph(const std::string& path);
void write_temporal_graph(const std::string& path, const TemporalGraph& g);

/// Number of temporal edges incident to v, parallel edges counted separately.
std::size_t temporal_degree(const TemporalGraph& g, VertexId v);

/// Maximum temporal degree over all vertices.
std::size_t max_temporal_degree(const TemporalGraph& g);

/// Rank (1-based) of each distinct incident availability time of v.
std::map<Time, std::size_t> availability_positions(const TemporalGraph& g, VertexId v);

inline constexpr std::size_t kDefaultWalkCap = 10'000'000;

/// Brute-force list of every temporal walk of exactly `length` edges, in
/// lexicographic order. Length 0 yields one walk per vertex. Throws
/// CapacityError once more than `cap` walks are found.
std::vector<TemporalWalk> enumerate_temporal_walks(const TemporalGraph& g, std::size_t length,
                                                   std::size_t cap = kDefaultWalkCap);

/// Throws ValidationError unless `w` is a temporal walk in g.
void check_walk(const TemporalGraph& g, const TemporalWalk& w);

/// Label sequence (l(v1,t1), l(v2,t1+1), l(v2,t2), ..., l(v_{l+1},t_l+1)) of a
/// walk; a length-0 walk at v maps to (l(v,1)).
std::vector<std::string> label_sequence(const TemporalGraph& g, const TemporalWalk& w);

}  // namespace tgk
