#include "tgk/transform.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>

namespace tgk {
namespace {

/// Dense 1-based ranks of a set of values.
template <typename T>
std::map<T, std::size_t> dense_ranks(const std::set<T>& values) {
  std::map<T, std::size_t> ranks;
  std::size_t r = 0;
  for (const auto& v : values) ranks.emplace(v, ++r);
  return ranks;
}

void sort_edges(std::vector<StaticEdge>& edges) {
  std::sort(edges.begin(), edges.end(), [](const StaticEdge& a, const StaticEdge& b) {
    return std::tie(a.u, a.v, a.label) < std::tie(b.u, b.v, b.label);
  });
}

}  // namespace

StaticLabeledGraph reduce(const TemporalGraph& g) {
  StaticLabeledGraph out;
  out.directed = false;
  out.provenance = "rd";

  std::set<std::pair<VertexId, VertexId>> seen;
  std::vector<TemporalEdge> kept;
  for (const auto& e : g.edges()) {  // (t, u, v) order: first hit is earliest
    if (seen.emplace(e.u, e.v).second) kept.push_back(e);
  }
  std::set<Time> times;
  for (const auto& e : kept) times.insert(e.t);
  const auto time_rank = dense_ranks(times);
  for (const auto& e : kept) {
    out.edges.push_back({e.u, e.v, std::to_string(time_rank.at(e.t))});
  }

  std::set<Time> first_changes;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (auto t = g.timeline(v).first_change()) first_changes.insert(*t);
  }
  const auto change_rank = dense_ranks(first_changes);
  out.vertex_labels.resize(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    auto t = g.timeline(v).first_change();
    out.vertex_labels[v] = t ? std::to_string(change_rank.at(*t)) : "0";
  }
  return out;
}

std::vector<DLVertexKey> dl_vertex_keys(const TemporalGraph& g) {
  std::vector<DLVertexKey> keys;
  keys.reserve(2 * g.edge_count());
  for (const auto& e : g.edges()) {
    keys.push_back({e.u, e.v, e.t});
    keys.push_back({e.v, e.u, e.t});
  }
  return keys;
}

StaticLabeledGraph dl_expand(const TemporalGraph& g, bool annotate_waiting) {
  StaticLabeledGraph out;
  out.directed = true;
  out.provenance = annotate_waiting ? "dl-waiting" : "dl";

  // Vertex 2i is edge i traversed lower -> upper endpoint, 2i+1 the reverse.
  const auto keys = dl_vertex_keys(g);
  out.vertex_labels.reserve(keys.size());
  for (const auto& k : keys) {
    out.vertex_labels.push_back(g.label(k.source, k.time) + "|" + g.label(k.target, k.time + 1));
  }

  auto arriving_at = [&](std::size_t edge, VertexId x) {
    return 2 * edge + (g.edge(edge).v == x ? 0 : 1);
  };
  auto leaving_from = [&](std::size_t edge, VertexId x) {
    return 2 * edge + (g.edge(edge).u == x ? 0 : 1);
  };
  for (VertexId x = 0; x < g.vertex_count(); ++x) {
    const auto& inc = g.incident(x);  // sorted by time
    for (std::size_t a = 0; a < inc.size(); ++a) {
      const Time t = g.edge(inc[a]).t;
      for (std::size_t b = a + 1; b < inc.size(); ++b) {
        const Time s = g.edge(inc[b]).t;
        if (s <= t) continue;
        StaticEdge arc{arriving_at(inc[a], x), leaving_from(inc[b], x), {}};
        if (annotate_waiting) arc.label = std::to_string(s - t - 1);
        out.edges.push_back(std::move(arc));
      }
    }
  }
  sort_edges(out.edges);
  return out;
}

std::vector<TimeVertexKey> se_time_vertices(const TemporalGraph& g) {
  std::set<std::pair<Time, VertexId>> u;
  for (const auto& e : g.edges()) {
    u.emplace(e.t, e.u);
    u.emplace(e.t, e.v);
    u.emplace(e.t + 1, e.u);
    u.emplace(e.t + 1, e.v);
  }
  std::vector<TimeVertexKey> keys;
  keys.reserve(u.size());
  for (const auto& [t, w] : u) keys.push_back({w, t});
  return keys;
}

StaticLabeledGraph static_expand(const TemporalGraph& g) {
  StaticLabeledGraph out;
  out.directed = true;
  out.provenance = "se";

  const auto keys = se_time_vertices(g);
  std::map<TimeVertexKey, std::size_t> index;
  out.vertex_labels.reserve(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    index.emplace(keys[i], i);
    out.vertex_labels.push_back(g.label(keys[i].vertex, keys[i].time));
  }
  auto at = [&](VertexId w, Time t) { return index.at(TimeVertexKey{w, t}); };

  const std::string eta(kTransitionLabel);
  const std::string omega(kWaitingLabel);
  for (const auto& e : g.edges()) {
    out.edges.push_back({at(e.u, e.t), at(e.v, e.t + 1), eta});
    out.edges.push_back({at(e.v, e.t), at(e.u, e.t + 1), eta});
  }
  for (VertexId w = 0; w < g.vertex_count(); ++w) {
    const auto positions = availability_positions(g, w);
    for (auto it = positions.begin(); it != positions.end() && std::next(it) != positions.end(); ++it) {
      const Time i = it->first;
      const Time j = std::next(it)->first;
      out.edges.push_back({at(w, i), at(w, j), omega});
      if (i + 1 < j) out.edges.push_back({at(w, i + 1), at(w, j), omega});
    }
  }
  sort_edges(out.edges);
  return out;
}

StaticLabeledGraph static_baseline(const TemporalGraph& g) {
  StaticLabeledGraph out;
  out.directed = false;
  out.provenance = "base";
  out.vertex_labels.resize(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    std::string label;
    for (const auto& [t, l] : g.timeline(v).change_points()) {
      if (!label.empty()) label += ',';
      label += l;
    }
    out.vertex_labels[v] = std::move(label);
  }
  for (const auto& e : g.edges()) out.edges.push_back({e.u, e.v, std::to_string(e.t)});
  return out;
}

Transformation parse_transformation(std::string_view name) {
  if (name == "rd") return Transformation::Reduced;
  if (name == "dl") return Transformation::DirectedLine;
  if (name == "se") return Transformation::StaticExpansion;
  if (name == "base") return Transformation::Baseline;
  throw std::invalid_argument("unknown transformation '" + std::string(name) + "'");
}

std::string_view name(Transformation t) {
  switch (t) {
    case Transformation::Reduced: return "rd";
    case Transformation::DirectedLine: return "dl";
    case Transformation::StaticExpansion: return "se";
    case Transformation::Baseline: return "base";
  }
  return "?";
}

StaticLabeledGraph apply(Transformation t, const TemporalGraph& g, bool annotate_waiting) {
  switch (t) {
    case Transformation::Reduced: return reduce(g);
    case Transformation::DirectedLine: return dl_expand(g, annotate_waiting);
    case Transformation::StaticExpansion: return static_expand(g);
    case Transformation::Baseline: return static_baseline(g);
  }
  throw std::invalid_argument("unknown transformation");
}

}  // namespace tgk
