#include "tgk/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace tgk {

void validate(const SamplerConfig& cfg) {
  if (cfg.k < 1) throw std::invalid_argument("sampler: k must be at least 1");
  if (cfg.samples < 1) throw std::invalid_argument("sampler: need at least one sample");
  if (cfg.max_restarts < 1) throw std::invalid_argument("sampler: max_restarts must be at least 1");
}

std::uint64_t sample_size(const SampleBoundInputs& b) {
  if (!(b.collection_size > 0) || !(b.pattern_bound > 0) || !(b.lambda > 0)) {
    throw std::invalid_argument("sample_size: inputs must be positive");
  }
  if (!(b.delta > 0 && b.delta < 1)) throw std::invalid_argument("sample_size: delta must lie in (0, 1)");
  const double eps = b.lambda / b.pattern_bound;
  const double s = std::log(2.0 * b.collection_size * b.pattern_bound / b.delta) / (2.0 * eps * eps);
  const double rounded = std::ceil(s);
  if (!std::isfinite(rounded) || rounded >= 0x1p64) {
    throw OverflowError("sample_size: bound exceeds 64 bits");
  }
  return rounded < 1 ? 1 : static_cast<std::uint64_t>(rounded);
}

double pattern_bound(std::size_t alphabet_size, int k) {
  return std::pow(static_cast<double>(alphabet_size), 2.0 * k);
}

bool has_temporal_walk(const TemporalGraph& g, int k) {
  if (k < 0) return false;
  if (k == 0) return g.vertex_count() > 0;
  // alive[2i + d]: some walk of the current length ends with edge i traversed
  // in direction d (0: u -> v, 1: v -> u).
  const std::size_t m = g.edge_count();
  std::vector<char> alive(2 * m, m > 0 ? 1 : 0);
  for (int len = 2; len <= k; ++len) {
    std::vector<char> next(2 * m, 0);
    // Earliest time at which some walk of length len-1 arrives at each vertex.
    std::vector<Time> earliest(g.vertex_count(), std::numeric_limits<Time>::max());
    for (std::size_t i = 0; i < m; ++i) {
      const auto& e = g.edge(i);
      if (alive[2 * i]) earliest[e.v] = std::min(earliest[e.v], e.t);
      if (alive[2 * i + 1]) earliest[e.u] = std::min(earliest[e.u], e.t);
    }
    bool any = false;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& e = g.edge(i);
      if (earliest[e.u] < e.t) next[2 * i] = any = true;
      if (earliest[e.v] < e.t) next[2 * i + 1] = any = true;
    }
    if (!any) return false;
    alive = std::move(next);
  }
  return m > 0;
}

namespace {

/// Incident edge times of every vertex, ascending.
std::vector<std::vector<Time>> incident_times(const TemporalGraph& g) {
  std::vector<std::vector<Time>> times(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    for (auto idx : g.incident(v)) times[v].push_back(g.edge(idx).t);
  }
  return times;
}

class WalkSampler {
 public:
  WalkSampler(const TemporalGraph& g, int k, bool reject)
      : g_(g), k_(k), reject_(reject), times_(incident_times(g)) {
    const auto delta = static_cast<double>(max_temporal_degree(g));
    // P_min / P_w = 2|E| prod(d_i) / (|V| Delta^k)
    scale_ = 2.0 * static_cast<double>(g.edge_count()) /
             (static_cast<double>(g.vertex_count()) * std::pow(delta, k));
  }

  /// One attempt; false if the walk got stuck or was rejected.
  bool attempt(Rng& rng, TemporalWalk& walk) const {
    walk.vertices.clear();
    walk.edges.clear();
    const auto& first = g_.edge(rng.uniform_index(g_.edge_count()));
    const bool forward = rng.bernoulli(0.5);
    walk.vertices.push_back(forward ? first.u : first.v);
    walk.vertices.push_back(forward ? first.v : first.u);
    walk.edges.push_back(first);
    double degree_product = 1.0;
    for (int step = 2; step <= k_; ++step) {
      const VertexId at = walk.vertices.back();
      const Time arrival = walk.edges.back().t + 1;
      const auto& ts = times_[at];
      const auto begin = static_cast<std::size_t>(
          std::lower_bound(ts.begin(), ts.end(), arrival) - ts.begin());
      const std::size_t d = ts.size() - begin;
      if (d == 0) return false;
      const auto& next = g_.edge(g_.incident(at)[begin + rng.uniform_index(d)]);
      walk.edges.push_back(next);
      walk.vertices.push_back(next.other(at));
      degree_product *= static_cast<double>(d);
    }
    if (!reject_) return true;
    const double accept = scale_ * degree_product;
    if (accept > 1.0 + 1e-12) {
      throw std::logic_error("sampler: acceptance probability above 1 (P_min > P_w)");
    }
    return rng.uniform01() < accept;
  }

 private:
  const TemporalGraph& g_;
  int k_;
  bool reject_;
  std::vector<std::vector<Time>> times_;
  double scale_ = 1.0;
};

TemporalWalk draw(const WalkSampler& sampler, const TemporalGraph& g, int k, Rng& rng,
                  std::size_t max_restarts) {
  TemporalWalk walk;
  for (std::size_t attempt = 0; attempt < max_restarts; ++attempt) {
    if (sampler.attempt(rng, walk)) return walk;
  }
  if (!has_temporal_walk(g, k)) {
    throw NoWalkError("graph has no temporal walk of length " + std::to_string(k));
  }
  throw RetryBudgetError("no walk accepted within " + std::to_string(max_restarts) + " attempts");
}

}  // namespace

TemporalWalk sample_temporal_walk(const TemporalGraph& g, int k, Rng& rng, bool reject,
                                  std::size_t max_restarts) {
  if (k < 1) throw std::invalid_argument("sampler: k must be at least 1");
  if (max_restarts < 1) throw std::invalid_argument("sampler: max_restarts must be at least 1");
  if (g.edge_count() == 0) throw NoWalkError("graph has no temporal edges");
  WalkSampler sampler(g, k, reject);
  return draw(sampler, g, k, rng, max_restarts);
}

FeatureVector approx_feature_map(const TemporalGraph& g, const SamplerConfig& cfg) {
  validate(cfg);
  if (g.edge_count() == 0) throw NoWalkError("graph has no temporal edges");
  WalkSampler sampler(g, cfg.k, cfg.reject);
  std::unordered_map<Key128, std::uint64_t> counts;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    Rng rng(derive_seed(cfg.seed, i));
    const auto walk = draw(sampler, g, cfg.k, rng, cfg.max_restarts);
    ++counts[sequence_key(label_sequence(g, walk))];
  }
  return FeatureVector::from_counts(KernelKind::SampledWalk, cfg.k, counts, cfg.samples);
}

double approx_kernel(const FeatureVector& f1, const FeatureVector& f2) {
  if (f1.kind() != KernelKind::SampledWalk || f2.kind() != KernelKind::SampledWalk) {
    throw std::invalid_argument("approx_kernel: expected sampled walk features");
  }
  if (f1.param() != f2.param()) throw std::invalid_argument("approx_kernel: walk lengths differ");
  return inner_product(f1, f2);
}

}  // namespace tgk
