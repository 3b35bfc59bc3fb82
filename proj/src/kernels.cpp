#include "tgk/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "tgk/error.hpp"
#include "tgk/text.hpp"

namespace tgk {
namespace {

using Counts = std::unordered_map<Key128, std::uint64_t>;

void accumulate(Counts& into, const Counts& from) {
  for (const auto& [k, c] : from) {
    auto& slot = into[k];
    slot = checked_add(slot, c);
  }
}

std::vector<Key128> vertex_symbols(const StaticLabeledGraph& g) {
  std::vector<Key128> out;
  out.reserve(g.vertex_count());
  for (const auto& l : g.vertex_labels) out.push_back(symbol_key(l));
  return out;
}

std::vector<Key128> edge_symbols(const StaticLabeledGraph& g) {
  std::vector<Key128> out;
  out.reserve(g.edges.size());
  for (const auto& e : g.edges) out.push_back(symbol_key(e.label));
  return out;
}

void check_nonnegative(int p, const char* what) {
  if (p < 0) throw std::invalid_argument(std::string(what) + " must be non-negative");
}

}  // namespace

FeatureVector rw_feature_map(const StaticLabeledGraph& g, int k) {
  check_nonnegative(k, "walk length");
  validate(g);
  const auto adj = adjacency(g);
  const auto vsym = vertex_symbols(g);
  const auto esym = edge_symbols(g);
  const std::size_t n = g.vertex_count();

  // walks[v]: label-sequence key -> number of walks of the current length ending at v
  std::vector<Counts> walks(n);
  Counts total;
  for (std::size_t v = 0; v < n; ++v) walks[v][SequenceHasher().absorb(vsym[v]).key()] = 1;
  for (const auto& w : walks) accumulate(total, w);

  for (int len = 1; len <= k; ++len) {
    std::vector<Counts> next(n);
    for (std::size_t v = 0; v < n; ++v) {
      for (const auto& arc : adj.out[v]) {
        auto& target = next[arc.to];
        for (const auto& [key, c] : walks[v]) {
          const Key128 extended = SequenceHasher(key).absorb(esym[arc.edge]).absorb(vsym[arc.to]).key();
          auto& slot = target[extended];
          slot = checked_add(slot, c);
        }
      }
    }
    walks = std::move(next);
    for (const auto& w : walks) accumulate(total, w);
  }
  return FeatureVector::from_counts(KernelKind::RandomWalk, k, total);
}

std::map<std::vector<std::string>, std::uint64_t> rw_walk_sequences(const StaticLabeledGraph& g, int k) {
  check_nonnegative(k, "walk length");
  validate(g);
  using Census = std::map<std::vector<std::string>, std::uint64_t>;
  const auto adj = adjacency(g);
  const std::size_t n = g.vertex_count();
  std::vector<Census> walks(n);
  Census total;
  auto add_all = [&](const std::vector<Census>& from) {
    for (const auto& w : from) {
      for (const auto& [seq, c] : w) total[seq] = checked_add(total[seq], c);
    }
  };
  for (std::size_t v = 0; v < n; ++v) walks[v][{g.vertex_labels[v]}] = 1;
  add_all(walks);
  for (int len = 1; len <= k; ++len) {
    std::vector<Census> next(n);
    for (std::size_t v = 0; v < n; ++v) {
      for (const auto& arc : adj.out[v]) {
        for (const auto& [seq, c] : walks[v]) {
          auto extended = seq;
          extended.push_back(g.edges[arc.edge].label);
          extended.push_back(g.vertex_labels[arc.to]);
          auto& slot = next[arc.to][std::move(extended)];
          slot = checked_add(slot, c);
        }
      }
    }
    walks = std::move(next);
    add_all(walks);
  }
  return total;
}

namespace {

/// Colors of every refinement round 0..h.
std::vector<std::vector<Key128>> wl_rounds(const StaticLabeledGraph& g, int h) {
  check_nonnegative(h, "WL iterations");
  validate(g);
  const auto adj = adjacency(g);
  const auto esym = edge_symbols(g);
  const std::size_t n = g.vertex_count();

  std::vector<std::vector<Key128>> rounds;
  rounds.reserve(static_cast<std::size_t>(h) + 1);
  std::vector<Key128> colors(n);
  for (std::size_t v = 0; v < n; ++v) {
    colors[v] = SequenceHasher().absorb(std::uint64_t{0}).absorb(symbol_key(g.vertex_labels[v])).key();
  }
  rounds.push_back(colors);

  using Neighbor = std::pair<Key128, Key128>;  // (neighbor color, edge label)
  std::vector<Neighbor> bag;
  auto absorb_bag = [&](SequenceHasher& s, const std::vector<Adjacency::Arc>& arcs,
                        const std::vector<Key128>& prev) {
    bag.clear();
    for (const auto& arc : arcs) bag.emplace_back(prev[arc.to], esym[arc.edge]);
    std::sort(bag.begin(), bag.end());
    s.absorb(static_cast<std::uint64_t>(bag.size()));
    for (const auto& [c, e] : bag) s.absorb(c).absorb(e);
  };

  for (int i = 1; i <= h; ++i) {
    const auto& prev = rounds.back();
    for (std::size_t v = 0; v < n; ++v) {
      SequenceHasher s;
      s.absorb(static_cast<std::uint64_t>(i)).absorb(prev[v]);
      absorb_bag(s, adj.out[v], prev);
      if (g.directed) absorb_bag(s, adj.in[v], prev);
      colors[v] = s.key();
    }
    rounds.push_back(colors);
  }
  return rounds;
}

}  // namespace

std::vector<FeatureVector> wl_feature_maps(const StaticLabeledGraph& g, int h_max) {
  const auto rounds = wl_rounds(g, h_max);
  std::vector<FeatureVector> out;
  Counts hist;
  for (int i = 0; i <= h_max; ++i) {
    for (const auto& c : rounds[static_cast<std::size_t>(i)]) ++hist[c];
    out.push_back(FeatureVector::from_counts(KernelKind::WeisfeilerLehman, i, hist));
  }
  return out;
}

FeatureVector wl_feature_map(const StaticLabeledGraph& g, int h) {
  check_nonnegative(h, "WL iterations");
  return std::move(wl_feature_maps(g, h).back());
}

std::vector<std::size_t> wl_color_counts(const StaticLabeledGraph& g, int h) {
  std::vector<std::size_t> out;
  for (const auto& round : wl_rounds(g, h)) {
    out.push_back(std::unordered_set<Key128>(round.begin(), round.end()).size());
  }
  return out;
}

GramMatrix gram(std::span<const FeatureVector> features, std::vector<std::string> ids) {
  const auto n = static_cast<Eigen::Index>(features.size());
  if (ids.empty()) {
    for (Eigen::Index i = 0; i < n; ++i) ids.push_back(std::to_string(i));
  }
  if (static_cast<Eigen::Index>(ids.size()) != n) throw std::invalid_argument("gram: id count mismatch");
  GramMatrix m;
  m.ids = std::move(ids);
  m.values.resize(n, n);
  if (n > 0) {
    m.kind = features[0].kind();
    m.param = features[0].param();
  }
  for (const auto& f : features) {
    if (f.kind() != m.kind || f.param() != m.param) {
      throw std::invalid_argument("gram: feature vectors from different kernels or parameters");
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = inner_product(features[i], features[j]);
      m.values(i, j) = v;
      m.values(j, i) = v;
    }
  }
  return m;
}

std::string serialize(const GramMatrix& m) {
  std::ostringstream out;
  out << "# kernel=" << name(m.kind) << " param=" << m.param << " normalized=" << (m.normalized ? 1 : 0)
      << '\n';
  out << "ids";
  for (const auto& id : m.ids) out << ' ' << id;
  out << '\n';
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    out << m.ids[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m.size(); ++j) out << ' ' << format_double(m.values(i, j));
    out << '\n';
  }
  return out.str();
}

GramMatrix parse_gram(std::string_view text) {
  GramMatrix m;
  bool have_meta = false;
  bool have_ids = false;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  for (auto raw : split_lines(text)) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      for (auto tok : tokenize(line.substr(1))) {
        auto eq = tok.find('=');
        if (eq == std::string_view::npos) continue;
        auto key = tok.substr(0, eq);
        auto val = tok.substr(eq + 1);
        if (key == "kernel") {
          m.kind = parse_kernel_kind(val);
        } else if (key == "param") {
          std::from_chars(val.data(), val.data() + val.size(), m.param);
        } else if (key == "normalized") {
          m.normalized = val == "1";
        }
      }
      have_meta = true;
      continue;
    }
    auto tokens = tokenize(line);
    if (!have_ids) {
      if (tokens.empty() || tokens[0] != "ids") throw ParseError(line_no, "expected 'ids' header row");
      for (std::size_t i = 1; i < tokens.size(); ++i) m.ids.emplace_back(tokens[i]);
      have_ids = true;
      continue;
    }
    if (tokens.size() != m.ids.size() + 1) throw ParseError(line_no, "row length mismatch");
    if (tokens[0] != m.ids[rows.size()]) throw ParseError(line_no, "row id does not match header");
    std::vector<double> row;
    for (std::size_t j = 1; j < tokens.size(); ++j) {
      try {
        std::size_t used = 0;
        const std::string tok(tokens[j]);
        row.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError(line_no, "bad value '" + std::string(tokens[j]) + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (!have_meta || !have_ids) throw ParseError(line_no, "incomplete gram file");
  if (rows.size() != m.ids.size()) throw ParseError(line_no, "row count mismatch");
  const auto n = static_cast<Eigen::Index>(rows.size());
  m.values.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m.values(i, j) = rows[i][j];
  }
  return m;
}

GramMatrix read_gram(const std::string& path) { return parse_gram(read_file(path)); }

void write_gram(const std::string& path, const GramMatrix& m) { write_file_atomic(path, serialize(m)); }

}  // namespace tgk
