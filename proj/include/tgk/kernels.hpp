#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tgk/feature_vector.hpp"
#include "tgk/static_graph.hpp"

namespace tgk {

/// k-step random walk feature map: for every walk of length 0..k, the count of
/// its label sequence (l(v1), l(e1), ..., l(v_{l+1})). Directed graphs follow
/// arc direction; undirected edges are walked both ways. Unlabeled edges
/// contribute the empty symbol. Throws OverflowError if a count exceeds 64 bits.
FeatureVector rw_feature_map(const StaticLabeledGraph& g, int k);

/// Same walk census as rw_feature_map, keyed by the full label sequence
/// instead of its hash. Used for collision audits and oracle comparisons.
std::map<std::vector<std::string>, std::uint64_t> rw_walk_sequences(const StaticLabeledGraph& g, int k);

/// Weisfeiler-Lehman subtree feature map: color histograms of refinement
/// rounds 0..h. Directed graphs refine with separate in- and out-neighbor
/// multisets; edge labels are paired with the neighbor color.
FeatureVector wl_feature_map(const StaticLabeledGraph& g, int h);

/// Feature maps for every h in 0..h_max from one refinement run.
std::vector<FeatureVector> wl_feature_maps(const StaticLabeledGraph& g, int h_max);

/// Number of distinct colors after each round 0..h.
std::vector<std::size_t> wl_color_counts(const StaticLabeledGraph& g, int h);

/// Symmetric matrix of kernel values over a graph collection.
template <typename Scalar>
struct BasicGramMatrix {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Matrix values;
  std::vector<std::string> ids;
  bool normalized = false;
  KernelKind kind = KernelKind::RandomWalk;
  int param = 0;

  Eigen::Index size() const { return values.rows(); }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return values(i, j); }
};

using GramMatrix = BasicGramMatrix<double>;

/// Pairwise inner products. Entries are accumulated exactly in integers and
/// converted to floating point once. `ids` defaults to "0", "1", ...
/// Throws std::invalid_argument on mixed kernel kinds or parameters.
GramMatrix gram(std::span<const FeatureVector> features, std::vector<std::string> ids = {});

/// Cosine normalization K(i,j) / sqrt(K(i,i) K(j,j)) with an exact unit
/// diagonal. Throws std::domain_error naming the graph with a zero diagonal.
template <typename Scalar>
BasicGramMatrix<Scalar> normalize(const BasicGramMatrix<Scalar>& m) {
  const Eigen::Index n = m.size();
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vector diag = m.values.diagonal();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(diag(i) > Scalar(0))) {
      const std::string who = static_cast<std::size_t>(i) < m.ids.size() ? m.ids[i] : std::to_string(i);
      throw std::domain_error("cannot normalize: graph '" + who + "' has zero self-similarity");
    }
  }
  const Vector inv = diag.cwiseSqrt().cwiseInverse();
  BasicGramMatrix<Scalar> out = m;
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i, i) = Scalar(1);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      out.values(i, j) = out.values(j, i) = m.values(i, j) * inv(i) * inv(j);
    }
  }
  out.normalized = true;
  return out;
}

/// Smallest eigenvalue of a symmetric matrix.
template <typename Derived>
typename Derived::Scalar min_eigenvalue(const Eigen::MatrixBase<Derived>& m) {
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.eval(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

/// Plain-text Gram file: a "# kernel=<kind> param=<p> normalized=<0|1>" line,
/// a header row of graph ids, then one row per graph at 17 significant digits.
std::string serialize(const GramMatrix& m);
GramMatrix parse_gram(std::string_view text);
GramMatrix read_gram(const std::string& path);
void write_gram(const std::string& path, const GramMatrix& m);

}  // namespace tgk
