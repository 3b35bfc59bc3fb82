#pragma once

#include <compare>
#include <string_view>
#include <vector>

#include "tgk/static_graph.hpp"
#include "tgk/temporal_graph.hpp"

namespace tgk {

/// Edge labels of the static expansion.
inline constexpr std::string_view kTransitionLabel = "eta";
inline constexpr std::string_view kWaitingLabel = "omega";

/// One direction of one temporal edge: source -> target at `time`.
struct DLVertexKey {
  VertexId source = 0;
  VertexId target = 0;
  Time time = 1;

  friend auto operator<=>(const DLVertexKey&, const DLVertexKey&) = default;
};

/// A vertex of the static expansion: `vertex` at `time`.
struct TimeVertexKey {
  VertexId vertex = 0;
  Time time = 1;

  friend auto operator<=>(const TimeVertexKey&, const TimeVertexKey&) = default;
};

/// Reduced graph: keeps only the earliest edge between each vertex pair.
/// Edge labels are dense ranks of the surviving times; vertex labels are "0"
/// for constant timelines, else the dense rank of the vertex's first label
/// change among all first-change times.
StaticLabeledGraph reduce(const TemporalGraph& g);

/// Directed line graph expansion. One vertex per (temporal edge, direction),
/// labeled "l(u,t)|l(v,t+1)"; an arc n(u->v,t) -> n(v->y,s) for every t < s.
/// With `annotate_waiting` each arc carries the waiting time s - t - 1.
StaticLabeledGraph dl_expand(const TemporalGraph& g, bool annotate_waiting = false);

/// Vertex keys of dl_expand(g) in vertex-index order, sorted by
/// (time, lower endpoint, upper endpoint, direction).
std::vector<DLVertexKey> dl_vertex_keys(const TemporalGraph& g);

/// Static expansion over time-vertices with transition ("eta") and waiting
/// ("omega") arcs. Vertex (w,t) is labeled l(w,t).
StaticLabeledGraph static_expand(const TemporalGraph& g);

/// Time-vertices of static_expand(g) in vertex-index order, sorted by (time, vertex).
std::vector<TimeVertexKey> se_time_vertices(const TemporalGraph& g);

/// Static baseline: the underlying multigraph with time stamps as edge labels
/// and each vertex labeled with its ','-joined sequence of timeline labels.
StaticLabeledGraph static_baseline(const TemporalGraph& g);

enum class Transformation { Reduced, DirectedLine, StaticExpansion, Baseline };

/// Parses "rd", "dl", "se" or "base".
Transformation parse_transformation(std::string_view name);
std::string_view name(Transformation t);

StaticLabeledGraph apply(Transformation t, const TemporalGraph& g, bool annotate_waiting = false);

}  // namespace tgk
