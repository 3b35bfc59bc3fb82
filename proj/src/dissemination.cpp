#include "tgk/dissemination.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "tgk/error.hpp"
#include "tgk/text.hpp"

namespace tgk {
namespace {

LabelTimeline infection_timeline(std::optional<Time> at) {
  if (!at) return LabelTimeline(std::string(kSusceptible));
  if (*at <= 1) return LabelTimeline(std::string(kInfected));
  return LabelTimeline({{1, std::string(kSusceptible)}, {*at, std::string(kInfected)}});
}

std::vector<LabelTimeline> infection_timelines(const std::vector<std::optional<Time>>& times) {
  std::vector<LabelTimeline> out;
  out.reserve(times.size());
  for (const auto& t : times) out.push_back(infection_timeline(t));
  return out;
}

}  // namespace

void validate(const SIConfig& cfg) {
  if (cfg.seeds < 1) throw std::invalid_argument("SI: need at least one seed vertex");
  if (!(cfg.p > 0 && cfg.p <= 1)) throw std::invalid_argument("SI: p must lie in (0, 1]");
  if (!(cfg.target_fraction > 0 && cfg.target_fraction <= 1)) {
    throw std::invalid_argument("SI: target fraction must lie in (0, 1]");
  }
}

std::size_t infection_threshold(std::size_t vertex_count, double target_fraction) {
  const double x = static_cast<double>(vertex_count) * target_fraction;
  return static_cast<std::size_t>(std::ceil(x - 1e-9));
}

SIResult si_simulate(const TemporalGraph& g, const SIConfig& cfg, Rng& rng) {
  validate(cfg);
  const std::size_t n = g.vertex_count();
  if (n == 0) throw std::invalid_argument("SI: empty graph");
  if (cfg.seeds > n) throw std::invalid_argument("SI: more seeds than vertices");
  const std::size_t threshold = infection_threshold(n, cfg.target_fraction);

  std::vector<std::optional<Time>> when(n);
  for (auto v : rng.choose(n, cfg.seeds)) when[v] = 1;
  std::size_t infected = cfg.seeds;

  const auto& edges = g.edges();
  std::size_t next = 0;
  while (infected < threshold && next < edges.size()) {
    const Time t = edges[next].t;
    auto infectious = [&](VertexId x) { return when[x] && *when[x] <= t; };
    for (; next < edges.size() && edges[next].t == t; ++next) {
      const auto& e = edges[next];
      VertexId target;
      if (infectious(e.u) && !when[e.v]) {
        target = e.v;
      } else if (infectious(e.v) && !when[e.u]) {
        target = e.u;
      } else {
        continue;
      }
      if (rng.bernoulli(cfg.p)) {
        when[target] = t + 1;
        ++infected;
      }
    }
  }

  SIResult r{g.with_labels(infection_timelines(when)), when, infected, infected < threshold};
  return r;
}

SIResult si_simulate(const TemporalGraph& g, const SIConfig& cfg) {
  Rng rng(cfg.seed);
  return si_simulate(g, cfg, rng);
}

std::size_t count_infected(const TemporalGraph& g) {
  std::size_t n = 0;
  for (const auto& tl : g.timelines()) {
    if (tl.change_points().back().second == kInfected) ++n;
  }
  return n;
}

TemporalGraph induced_subgraph(const TemporalGraph& g, std::span<const VertexId> vertices) {
  std::vector<std::optional<VertexId>> local(g.vertex_count());
  std::vector<LabelTimeline> labels;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (local.at(vertices[i])) throw std::invalid_argument("induced_subgraph: repeated vertex");
    local[vertices[i]] = i;
    labels.push_back(g.timeline(vertices[i]));
  }
  std::vector<TemporalEdge> edges;
  for (const auto& e : g.edges()) {
    if (local[e.u] && local[e.v]) edges.push_back({*local[e.u], *local[e.v], e.t});
  }
  return TemporalGraph(vertices.size(), std::move(edges), std::move(labels));
}

std::vector<TemporalGraph> extract_bfs_subgraphs(const TemporalGraph& g, std::size_t cap) {
  if (cap < 1) throw std::invalid_argument("BFS extraction: cap must be positive");
  const std::size_t n = g.vertex_count();
  // neighbors[v]: (earliest shared time, neighbor), ascending
  std::vector<std::vector<std::pair<Time, VertexId>>> neighbors(n);
  {
    std::map<std::pair<VertexId, VertexId>, Time> earliest;
    for (const auto& e : g.edges()) earliest.emplace(std::pair{e.u, e.v}, e.t);
    for (const auto& [pair, t] : earliest) {
      neighbors[pair.first].emplace_back(t, pair.second);
      neighbors[pair.second].emplace_back(t, pair.first);
    }
    for (auto& list : neighbors) std::sort(list.begin(), list.end());
  }

  std::vector<TemporalGraph> out;
  out.reserve(n);
  std::vector<char> selected(n, 0);
  for (VertexId start = 0; start < n; ++start) {
    std::vector<VertexId> order{start};
    selected[start] = 1;
    for (std::size_t head = 0; head < order.size() && order.size() < cap; ++head) {
      for (const auto& [t, w] : neighbors[order[head]]) {
        if (selected[w]) continue;
        if (order.size() == cap) break;
        selected[w] = 1;
        order.push_back(w);
      }
    }
    out.push_back(induced_subgraph(g, order));
    for (auto v : order) selected[v] = 0;
  }
  return out;
}

TemporalGraph random_temporal_graph(std::size_t vertices, std::size_t edges, Time t_max, Rng& rng) {
  if (vertices < 2 && edges > 0) throw std::invalid_argument("random graph: need two vertices for an edge");
  if (t_max < 1 && edges > 0) throw std::invalid_argument("random graph: t_max must be positive");
  const double available = static_cast<double>(vertices) * static_cast<double>(vertices - 1) / 2.0 *
                           static_cast<double>(t_max);
  if (static_cast<double>(edges) > available) throw std::invalid_argument("random graph: too many edges");
  std::set<std::tuple<Time, VertexId, VertexId>> chosen;
  std::vector<TemporalEdge> out;
  while (out.size() < edges) {
    VertexId u = rng.uniform_index(vertices);
    VertexId v = rng.uniform_index(vertices - 1);
    if (v >= u) ++v;
    const Time t = rng.uniform_int(1, t_max);
    if (u > v) std::swap(u, v);
    if (chosen.emplace(t, u, v).second) out.push_back({u, v, t});
  }
  return TemporalGraph(vertices, std::move(out));
}

Dataset make_task1(std::span<const TemporalGraph> graphs, const SIConfig& cfg) {
  validate(cfg);
  if (graphs.size() < 2) throw std::invalid_argument("task 1: need at least two graphs");
  Dataset d;
  d.task = 1;
  d.seed = cfg.seed;
  d.configs = {cfg, cfg};
  const std::size_t first_half = (graphs.size() + 1) / 2;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    Rng rng(derive_seed(cfg.seed, i));
    auto sim = si_simulate(graphs[i], cfg, rng);
    if (i < first_half) {
      d.graphs.push_back(std::move(sim.graph));
      d.classes.push_back(+1);
      continue;
    }
    const auto& g = graphs[i];
    std::vector<std::optional<Time>> when(g.vertex_count());
    for (auto v : rng.choose(g.vertex_count(), sim.infected)) when[v] = rng.uniform_int(1, g.t_max() + 1);
    d.graphs.push_back(g.with_labels(infection_timelines(when)));
    d.classes.push_back(-1);
  }
  return d;
}

Dataset make_task2(std::span<const TemporalGraph> graphs, double p_low, double p_high, std::uint64_t seed,
                   std::size_t seeds, double target_fraction, std::size_t retry_budget) {
  if (!(p_low > 0 && p_low <= p_high && p_high <= 1)) {
    throw std::invalid_argument("task 2: need 0 < p_low <= p_high <= 1");
  }
  if (graphs.size() < 2) throw std::invalid_argument("task 2: need at least two graphs");
  if (retry_budget < 1) throw std::invalid_argument("task 2: retry budget must be positive");
  Dataset d;
  d.task = 2;
  d.seed = seed;
  const SIConfig low{seeds, p_low, target_fraction, seed};
  const SIConfig high{seeds, p_high, target_fraction, seed};
  validate(low);
  validate(high);
  d.configs = {low, high};
  const std::size_t first_half = (graphs.size() + 1) / 2;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const bool positive = i < first_half;
    Rng rng(derive_seed(seed, i));
    std::optional<SIResult> accepted;
    for (std::size_t attempt = 0; attempt < retry_budget && !accepted; ++attempt) {
      auto sim = si_simulate(graphs[i], positive ? low : high, rng);
      if (!sim.below_threshold) accepted = std::move(sim);
    }
    if (!accepted) {
      d.notes.push_back("excluded source graph " + std::to_string(i) + ": threshold not reached in " +
                        std::to_string(retry_budget) + " runs");
      continue;
    }
    d.graphs.push_back(std::move(accepted->graph));
    d.classes.push_back(positive ? +1 : -1);
  }
  return d;
}

Dataset reset_infections(const Dataset& d, double fraction, std::uint64_t seed) {
  if (!(fraction > 0 && fraction < 1)) throw std::invalid_argument("reset fraction must lie in (0, 1)");
  Dataset out = d;
  for (std::size_t i = 0; i < out.graphs.size(); ++i) {
    const auto& g = d.graphs[i];
    std::vector<VertexId> infected;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      if (g.timeline(v).change_points().back().second == kInfected) infected.push_back(v);
    }
    const auto resets =
        static_cast<std::size_t>(std::floor(fraction * static_cast<double>(infected.size()) + 1e-9));
    if (resets == 0) continue;
    Rng rng(derive_seed(seed, i));
    auto labels = g.timelines();
    for (auto pick : rng.choose(infected.size(), resets)) {
      labels[infected[pick]] = LabelTimeline(std::string(kSusceptible));
    }
    out.graphs[i] = g.with_labels(std::move(labels));
  }
  std::ostringstream note;
  note << "reset fraction=" << format_double(fraction) << " seed=" << seed;
  out.notes.push_back(note.str());
  return out;
}

std::string graph_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "graph_%04zu", index);
  return buf;
}

void write_dataset(const std::string& dir, const Dataset& d) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ostringstream labels;
  for (std::size_t i = 0; i < d.graphs.size(); ++i) {
    write_temporal_graph((fs::path(dir) / (graph_id(i) + ".tg")).string(), d.graphs[i]);
    labels << graph_id(i) << ' ' << d.classes[i] << '\n';
  }
  write_file_atomic((fs::path(dir) / "labels.txt").string(), labels.str());

  std::ostringstream meta;
  meta << "task = " << d.task << '\n';
  meta << "graphs = " << d.graphs.size() << '\n';
  meta << "cap = " << d.cap << '\n';
  meta << "seed = " << d.seed << '\n';
  for (std::size_t c = 0; c < d.configs.size(); ++c) {
    const auto& cfg = d.configs[c];
    const std::string prefix = c == 0 ? "positive." : "negative.";
    meta << prefix << "s = " << cfg.seeds << '\n';
    meta << prefix << "p = " << format_double(cfg.p) << '\n';
    meta << prefix << "I = " << format_double(cfg.target_fraction) << '\n';
  }
  for (const auto& n : d.notes) meta << "note = " << n << '\n';
  write_file_atomic((fs::path(dir) / "meta.txt").string(), meta.str());
}

Dataset read_dataset(const std::string& dir) {
  namespace fs = std::filesystem;
  Dataset d;
  const auto labels_text = read_file((fs::path(dir) / "labels.txt").string());
  std::size_t line_no = 0;
  for (auto line : split_lines(labels_text)) {
    ++line_no;
    auto tokens = tokenize(strip_comment(line));
    if (tokens.empty()) continue;
    if (tokens.size() != 2) throw ParseError(line_no, "expected '<graph id> <class>' in labels.txt");
    int cls = 0;
    if (tokens[1] == "1" || tokens[1] == "+1") {
      cls = 1;
    } else if (tokens[1] == "-1") {
      cls = -1;
    } else {
      throw ParseError(line_no, "class must be +1 or -1");
    }
    d.graphs.push_back(read_temporal_graph((fs::path(dir) / (std::string(tokens[0]) + ".tg")).string()));
    d.classes.push_back(cls);
  }
  const auto meta_path = fs::path(dir) / "meta.txt";
  if (fs::exists(meta_path)) {
    const auto meta = read_file(meta_path.string());
    for (auto line : split_lines(meta)) {
      auto eq = line.find('=');
      if (eq == std::string_view::npos) continue;
      auto key = trim(line.substr(0, eq));
      auto value = std::string(trim(line.substr(eq + 1)));
      if (key == "task") d.task = std::stoi(value);
      else if (key == "cap") d.cap = std::stoull(value);
      else if (key == "seed") d.seed = std::stoull(value);
      else if (key == "note") d.notes.push_back(value);
    }
  }
  return d;
}

}  // namespace tgk
