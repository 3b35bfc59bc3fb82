#pragma once

#include <cstddef>
#include <cstdint>

#include "tgk/error.hpp"
#include "tgk/feature_vector.hpp"
#include "tgk/random.hpp"
#include "tgk/temporal_graph.hpp"

namespace tgk {

/// The graph has no temporal walk of the requested length.
struct NoWalkError : Error {
  using Error::Error;
};

/// Walks exist but none was accepted within the restart budget.
struct RetryBudgetError : Error {
  using Error::Error;
};

struct SamplerConfig {
  int k = 1;                             ///< walk length in edges
  std::size_t samples = 1;               ///< S
  bool reject = true;                    ///< rejection step for uniformity
  std::size_t max_restarts = 1'000'000;  ///< attempts per accepted sample
  std::uint64_t seed = 0;
};

/// Throws std::invalid_argument unless k >= 1, samples >= 1, max_restarts >= 1.
void validate(const SamplerConfig& cfg);

struct SampleBoundInputs {
  double collection_size = 1;  ///< number of graphs in the collection
  double pattern_bound = 1;    ///< upper bound on distinct k-walk label sequences
  double delta = 0.1;          ///< failure probability, in (0, 1)
  double lambda = 0.1;         ///< accuracy; the kernel error bound is 3 * lambda
};

/// Number of samples S = ceil( ln(2 |G| Gamma / delta) / (2 (lambda / Gamma)^2) )
/// after which every sampled normalized kernel value is within 3 lambda of the
/// exact one with probability 1 - delta. Throws OverflowError if S does not
/// fit 64 bits and std::invalid_argument on out-of-range inputs.
std::uint64_t sample_size(const SampleBoundInputs& b);

/// Crude pattern bound |Sigma|^(2k): a temporal k-walk has 2k labels.
double pattern_bound(std::size_t alphabet_size, int k);

/// Draws one temporal walk of length k.
///
/// A uniformly chosen edge is entered from either endpoint with probability
/// 1/2, then extended k-1 times by a uniformly chosen incident edge with a
/// strictly later time. With `reject` the walk is kept with probability
/// P_min / P_w, which makes every k-walk equally likely; walks that get stuck
/// are restarted. Throws NoWalkError if g has no k-walk and RetryBudgetError
/// if `max_restarts` attempts were all rejected.
TemporalWalk sample_temporal_walk(const TemporalGraph& g, int k, Rng& rng, bool reject = true,
                                  std::size_t max_restarts = SamplerConfig{}.max_restarts);

/// True if g contains a temporal walk of length k (dynamic program over
/// directed edge occurrences).
bool has_temporal_walk(const TemporalGraph& g, int k);

/// Histogram of the label sequences of S sampled k-walks, each sample
/// contributing 1/S. Sample i draws from the stream derive_seed(cfg.seed, i),
/// so any partition of the samples across workers reproduces this result.
FeatureVector approx_feature_map(const TemporalGraph& g, const SamplerConfig& cfg);

/// <f1, f2> of two sampled histograms. Throws std::invalid_argument unless
/// both are sampled-walk features with the same k.
double approx_kernel(const FeatureVector& f1, const FeatureVector& f2);

}  // namespace tgk
