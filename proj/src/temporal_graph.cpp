#include "tgk/temporal_graph.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "tgk/error.hpp"
#include "tgk/text.hpp"

namespace tgk {

LabelTimeline::LabelTimeline(std::vector<ChangePoint> points) {
  if (points.empty()) throw ValidationError("label timeline without change points");
  if (points.front().first != 1) throw ValidationError("label timeline must start at time 1");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!is_valid_label(points[i].second)) {
      throw ValidationError("invalid label '" + points[i].second + "'");
    }
    if (i > 0 && points[i].first <= points[i - 1].first) {
      throw ValidationError("label change points must have strictly increasing times");
    }
    if (!points_.empty() && points_.back().second == points[i].second) continue;
    points_.push_back(std::move(points[i]));
  }
}

const std::string& LabelTimeline::at(Time t) const {
  auto it = std::upper_bound(points_.begin(), points_.end(), t,
                             [](Time x, const ChangePoint& p) { return x < p.first; });
  if (it == points_.begin()) return points_.front().second;
  return std::prev(it)->second;
}

std::optional<Time> LabelTimeline::first_change() const {
  if (points_.size() < 2) return std::nullopt;
  return points_[1].first;
}

bool is_valid_label(std::string_view label) {
  if (label.empty()) return false;
  for (char c : label) {
    if (c == ',' || c == ':' || c == '|' || c == '#' || static_cast<unsigned char>(c) <= ' ') {
      return false;
    }
  }
  return true;
}

TemporalGraph::TemporalGraph(std::size_t vertex_count, std::vector<TemporalEdge> edges,
                             std::vector<LabelTimeline> labels)
    : vertex_count_(vertex_count), edges_(std::move(edges)), labels_(std::move(labels)) {
  if (labels_.size() > vertex_count_) throw ValidationError("more timelines than vertices");
  labels_.resize(vertex_count_);
  for (auto& e : edges_) {
    if (e.u == e.v) throw ValidationError("self-loop at vertex " + std::to_string(e.u));
    if (e.u >= vertex_count_ || e.v >= vertex_count_) {
      throw ValidationError("edge endpoint out of range");
    }
    if (e.t < 1) throw ValidationError("time stamps must be positive");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end(), edge_time_less);
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i] == edges_[i - 1]) {
      const auto& e = edges_[i];
      throw ValidationError("duplicate temporal edge (" + std::to_string(e.u) + ", " +
                            std::to_string(e.v) + ", " + std::to_string(e.t) + ")");
    }
  }
  incident_.resize(vertex_count_);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    incident_[edges_[i].u].push_back(i);
    incident_[edges_[i].v].push_back(i);
    t_max_ = std::max(t_max_, edges_[i].t);
  }
}

void TemporalGraph::check_vertex(VertexId v) const {
  if (v >= vertex_count_) {
    throw std::out_of_range("vertex " + std::to_string(v) + " out of range");
  }
}

const LabelTimeline& TemporalGraph::timeline(VertexId v) const {
  check_vertex(v);
  return labels_[v];
}

const std::vector<std::size_t>& TemporalGraph::incident(VertexId v) const {
  check_vertex(v);
  return incident_[v];
}

TemporalGraph TemporalGraph::with_labels(std::vector<LabelTimeline> labels) const {
  TemporalGraph copy = *this;
  if (labels.size() > vertex_count_) throw ValidationError("more timelines than vertices");
  labels.resize(vertex_count_);
  copy.labels_ = std::move(labels);
  return copy;
}

namespace {

template <typename Int>
Int parse_int(std::string_view token, std::size_t line, const char* what) {
  Int value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line, std::string("expected integer ") + what + ", got '" +
                               std::string(token) + "'");
  }
  return value;
}

LabelTimeline parse_timeline(std::string_view spec, std::size_t line) {
  std::vector<LabelTimeline::ChangePoint> points;
  for (auto item : split(spec, ',')) {
    auto colon = item.find(':');
    if (colon == std::string_view::npos) throw ParseError(line, "expected <time>:<label>");
    auto t = parse_int<Time>(item.substr(0, colon), line, "time");
    points.emplace_back(t, std::string(item.substr(colon + 1)));
  }
  try {
    return LabelTimeline(std::move(points));
  } catch (const ValidationError& e) {
    throw ValidationError("line " + std::to_string(line) + ": " + e.what());
  }
}

}  // namespace

TemporalGraph parse_temporal_graph(std::string_view text) {
  std::optional<std::size_t> vertex_count;
  std::vector<TemporalEdge> edges;
  std::vector<std::size_t> edge_lines;
  std::vector<std::pair<VertexId, LabelTimeline>> timelines;
  std::vector<std::size_t> timeline_lines;

  std::size_t line_no = 0;
  for (auto raw : split_lines(text)) {
    ++line_no;
    auto tokens = tokenize(strip_comment(raw));
    if (tokens.empty()) continue;
    const auto tag = tokens[0];
    if (tag == "t") {
      if (tokens.size() != 2) throw ParseError(line_no, "expected 't <vertex_count>'");
      if (vertex_count) throw ParseError(line_no, "duplicate header");
      vertex_count = parse_int<std::size_t>(tokens[1], line_no, "vertex count");
      if (*vertex_count == 0) throw ParseError(line_no, "vertex count must be positive");
    } else if (tag == "v") {
      if (tokens.size() != 3) throw ParseError(line_no, "expected 'v <id> <t>:<label>[,...]'");
      auto id = parse_int<VertexId>(tokens[1], line_no, "vertex id");
      timelines.emplace_back(id, parse_timeline(tokens[2], line_no));
      timeline_lines.push_back(line_no);
    } else if (tag == "e") {
      if (tokens.size() != 4) throw ParseError(line_no, "expected 'e <u> <v> <t>'");
      edges.push_back({parse_int<VertexId>(tokens[1], line_no, "endpoint"),
                       parse_int<VertexId>(tokens[2], line_no, "endpoint"),
                       parse_int<Time>(tokens[3], line_no, "time")});
      edge_lines.push_back(line_no);
    } else {
      throw ParseError(line_no, "unknown record '" + std::string(tag) + "'");
    }
  }
  if (!vertex_count) throw ParseError(line_no == 0 ? 1 : line_no, "missing 't <vertex_count>' header");

  // Per-line validation so that errors point at the offending record.
  std::set<std::tuple<VertexId, VertexId, Time>> seen;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    const auto where = "line " + std::to_string(edge_lines[i]) + ": ";
    if (e.u == e.v) throw ValidationError(where + "self-loop");
    if (e.u >= *vertex_count || e.v >= *vertex_count) {
      throw ValidationError(where + "endpoint out of range");
    }
    if (e.t < 1) throw ValidationError(where + "time stamps must be positive");
    if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v), e.t).second) {
      throw ValidationError(where + "duplicate temporal edge");
    }
  }
  std::vector<LabelTimeline> labels(*vertex_count);
  std::vector<bool> assigned(*vertex_count, false);
  for (std::size_t i = 0; i < timelines.size(); ++i) {
    auto& [id, tl] = timelines[i];
    const auto where = "line " + std::to_string(timeline_lines[i]) + ": ";
    if (id >= *vertex_count) throw ValidationError(where + "vertex id out of range");
    if (assigned[id]) throw ValidationError(where + "duplicate labels for vertex");
    assigned[id] = true;
    labels[id] = std::move(tl);
  }
  return TemporalGraph(*vertex_count, std::move(edges), std::move(labels));
}

std::string serialize(const TemporalGraph& g) {
  std::ostringstream out;
  out << "t " << g.vertex_count() << '\n';
  const LabelTimeline fallback;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const auto& tl = g.timeline(v);
    if (tl == fallback) continue;
    out << "v " << v << ' ';
    bool first = true;
    for (const auto& [t, label] : tl.change_points()) {
      if (!first) out << ',';
      out << t << ':' << label;
      first = false;
    }
    out << '\n';
  }
  for (const auto& e : g.edges()) out << "e " << e.u << ' ' << e.v << ' ' << e.t << '\n';
  return out.str();
}

TemporalGraph read_temporal_graph(const std::string& path) {
  return parse_temporal_graph(read_file(path));
}

void write_temporal_graph(const std::string& path, const TemporalGraph& g) {
  write_file_atomic(path, serialize(g));
}

std::size_t temporal_degree(const TemporalGraph& g, VertexId v) { return g.incident(v).size(); }

std::size_t max_temporal_degree(const TemporalGraph& g) {
  std::size_t best = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) best = std::max(best, g.incident(v).size());
  return best;
}

std::map<Time, std::size_t> availability_positions(const TemporalGraph& g, VertexId v) {
  std::map<Time, std::size_t> ranks;
  for (auto idx : g.incident(v)) ranks.emplace(g.edge(idx).t, 0);
  std::size_t rank = 0;
  for (auto& [t, r] : ranks) r = ++rank;
  return ranks;
}

namespace {

void extend_walks(const TemporalGraph& g, std::size_t length, std::size_t cap, TemporalWalk& walk,
                  std::vector<TemporalWalk>& out) {
  if (walk.length() == length) {
    if (out.size() >= cap) {
      throw CapacityError("temporal walk enumeration exceeded cap of " + std::to_string(cap));
    }
    out.push_back(walk);
    return;
  }
  const VertexId at = walk.vertices.back();
  for (auto idx : g.incident(at)) {
    const auto& e = g.edge(idx);
    if (!walk.edges.empty() && e.t <= walk.edges.back().t) continue;
    walk.edges.push_back(e);
    walk.vertices.push_back(e.other(at));
    extend_walks(g, length, cap, walk, out);
    walk.edges.pop_back();
    walk.vertices.pop_back();
  }
}

}  // namespace

std::vector<TemporalWalk> enumerate_temporal_walks(const TemporalGraph& g, std::size_t length,
                                                   std::size_t cap) {
  std::vector<TemporalWalk> out;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    TemporalWalk walk{{v}, {}};
    extend_walks(g, length, cap, walk, out);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void check_walk(const TemporalGraph& g, const TemporalWalk& w) {
  if (w.vertices.size() != w.edges.size() + 1) throw ValidationError("walk shape mismatch");
  for (auto v : w.vertices) {
    if (v >= g.vertex_count()) throw ValidationError("walk vertex out of range");
  }
  for (std::size_t i = 0; i < w.edges.size(); ++i) {
    const auto& e = w.edges[i];
    const VertexId a = std::min(w.vertices[i], w.vertices[i + 1]);
    const VertexId b = std::max(w.vertices[i], w.vertices[i + 1]);
    if (e.u != a || e.v != b) throw ValidationError("walk edge does not join its vertices");
    if (!std::binary_search(g.edges().begin(), g.edges().end(), e, edge_time_less)) {
      throw ValidationError("walk edge not in graph");
    }
    if (i > 0 && e.t <= w.edges[i - 1].t) {
      throw ValidationError("walk times are not strictly increasing");
    }
  }
}

std::vector<std::string> label_sequence(const TemporalGraph& g, const TemporalWalk& w) {
  check_walk(g, w);
  if (w.edges.empty()) return {g.label(w.vertices.front(), 1)};
  std::vector<std::string> seq;
  seq.reserve(2 * w.length());
  for (std::size_t i = 0; i < w.length(); ++i) {
    const Time t = w.edges[i].t;
    seq.push_back(g.label(w.vertices[i], t));
    seq.push_back(g.label(w.vertices[i + 1], t + 1));
  }
  return seq;
}

}  // namespace tgk
