#include "tgk/static_graph.hpp"

#include <charconv>
#include <optional>
#include <sstream>

#include "tgk/error.hpp"
#include "tgk/text.hpp"

namespace tgk {
namespace {

bool is_token(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c == '#' || static_cast<unsigned char>(c) <= ' ') return false;
  }
  return true;
}

std::size_t parse_index(std::string_view token, std::size_t line) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line, "expected integer, got '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

Adjacency adjacency(const StaticLabeledGraph& g) {
  Adjacency adj;
  adj.out.resize(g.vertex_count());
  adj.in.resize(g.vertex_count());
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    adj.out[e.u].push_back({e.v, i});
    adj.in[e.v].push_back({e.u, i});
    if (!g.directed) {
      adj.out[e.v].push_back({e.u, i});
      adj.in[e.u].push_back({e.v, i});
    }
  }
  return adj;
}

void validate(const StaticLabeledGraph& g) {
  for (const auto& e : g.edges) {
    if (e.u >= g.vertex_count() || e.v >= g.vertex_count()) {
      throw ValidationError("static edge endpoint out of range");
    }
    if (e.u == e.v) throw ValidationError("self-loop in static graph");
  }
}

std::string serialize(const StaticLabeledGraph& g) {
  std::ostringstream out;
  out << "s " << g.vertex_count() << ' ' << (g.directed ? "directed" : "undirected");
  if (!g.provenance.empty()) out << ' ' << g.provenance;
  out << '\n';
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    out << "sv " << v << ' ' << g.vertex_labels[v] << '\n';
  }
  for (const auto& e : g.edges) {
    out << "se " << e.u << ' ' << e.v;
    if (!e.label.empty()) out << ' ' << e.label;
    out << '\n';
  }
  return out.str();
}

StaticLabeledGraph parse_static_graph(std::string_view text) {
  StaticLabeledGraph g;
  std::optional<std::size_t> n;
  std::vector<bool> labeled;
  std::size_t line_no = 0;
  for (auto raw : split_lines(text)) {
    ++line_no;
    auto tokens = tokenize(strip_comment(raw));
    if (tokens.empty()) continue;
    if (tokens[0] == "s") {
      if (tokens.size() < 3 || tokens.size() > 4) {
        throw ParseError(line_no, "expected 's <n> directed|undirected [<provenance>]'");
      }
      if (n) throw ParseError(line_no, "duplicate header");
      n = parse_index(tokens[1], line_no);
      if (tokens[2] == "directed") {
        g.directed = true;
      } else if (tokens[2] != "undirected") {
        throw ParseError(line_no, "expected 'directed' or 'undirected'");
      }
      if (tokens.size() == 4) g.provenance = std::string(tokens[3]);
      g.vertex_labels.assign(*n, std::string());
      labeled.assign(*n, false);
    } else if (tokens[0] == "sv") {
      if (!n) throw ParseError(line_no, "record before header");
      if (tokens.size() != 3) throw ParseError(line_no, "expected 'sv <id> <label>'");
      auto id = parse_index(tokens[1], line_no);
      if (id >= *n) throw ParseError(line_no, "vertex id out of range");
      if (labeled[id]) throw ParseError(line_no, "duplicate vertex label");
      labeled[id] = true;
      g.vertex_labels[id] = std::string(tokens[2]);
    } else if (tokens[0] == "se") {
      if (!n) throw ParseError(line_no, "record before header");
      if (tokens.size() != 3 && tokens.size() != 4) {
        throw ParseError(line_no, "expected 'se <u> <v> [<label>]'");
      }
      StaticEdge e{parse_index(tokens[1], line_no), parse_index(tokens[2], line_no), {}};
      if (tokens.size() == 4) e.label = std::string(tokens[3]);
      if (e.u >= *n || e.v >= *n) throw ParseError(line_no, "edge endpoint out of range");
      if (e.u == e.v) throw ParseError(line_no, "self-loop");
      g.edges.push_back(std::move(e));
    } else {
      throw ParseError(line_no, "unknown record '" + std::string(tokens[0]) + "'");
    }
  }
  if (!n) throw ParseError(line_no == 0 ? 1 : line_no, "missing 's' header");
  for (std::size_t v = 0; v < *n; ++v) {
    if (!labeled[v]) throw ValidationError("vertex " + std::to_string(v) + " has no label");
  }
  return g;
}

StaticLabeledGraph read_static_graph(const std::string& path) {
  return parse_static_graph(read_file(path));
}

void write_static_graph(const std::string& path, const StaticLabeledGraph& g) {
  for (const auto& l : g.vertex_labels) {
    if (!is_token(l)) throw ValidationError("vertex label '" + l + "' is not a single token");
  }
  for (const auto& e : g.edges) {
    if (!e.label.empty() && !is_token(e.label)) {
      throw ValidationError("edge label '" + e.label + "' is not a single token");
    }
  }
  write_file_atomic(path, serialize(g));
}

bool topological_order(const StaticLabeledGraph& g, std::vector<std::size_t>* order) {
  if (!g.directed) {
    if (order) order->clear();
    return g.edges.empty();
  }
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<std::size_t>> out(n);
  for (const auto& e : g.edges) {
    ++indegree[e.v];
    out[e.u].push_back(e.v);
  }
  std::vector<std::size_t> queue;
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) queue.push_back(v);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (auto w : out[queue[head]]) {
      if (--indegree[w] == 0) queue.push_back(w);
    }
  }
  const bool acyclic = queue.size() == n;
  if (order) *order = acyclic ? std::move(queue) : std::vector<std::size_t>{};
  return acyclic;
}

}  // namespace tgk
