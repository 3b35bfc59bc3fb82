#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tgk/kernels.hpp"
#include "tgk/random.hpp"
#include "tgk/svm.hpp"

namespace tgk {

struct CvProtocol {
  std::size_t folds = 10;
  std::size_t repetitions = 10;
  std::size_t inner_folds = 10;
  std::vector<double> c_grid = {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
  std::uint64_t seed = 0;
  SvmOptions svm;
};

/// Kernel parameter (k or h) -> Gram over the same graphs.
using GramFamily = std::map<int, GramMatrix>;

/// Splits 0..n-1 into k folds. Each class is shuffled and dealt round-robin,
/// continuing where the previous class stopped, so per-fold class counts
/// and fold sizes differ by at most one. Throws if k < 2 or k > n.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, std::size_t k, Rng& rng);

struct Selection {
  int param = 0;
  double C = 1;
  double inner_accuracy = 0;
};

/// Picks (param, C) maximizing inner k-fold accuracy. Every matrix in
/// `train_grams` must already be restricted to the training graphs, so
/// nothing outside them is visible. Ties go to the smaller param, then the
/// smaller C.
Selection select_parameters(const std::map<int, Eigen::MatrixXd>& train_grams, std::span<const int> labels,
                            const CvProtocol& protocol, Rng& rng);

struct CvResult {
  double mean = 0;  ///< percent
  double std = 0;   ///< population std of repetition_accuracy, percent
  std::vector<double> repetition_accuracy;  ///< percent, one per repetition
  std::vector<Selection> selections;        ///< one per (repetition, outer fold)
};

/// Repeated stratified k-fold CV with nested (param, C) selection.
/// Repetition r shuffles folds with derive_seed(seed, r). Throws
/// std::invalid_argument if the family is empty, the Grams disagree on ids
/// or size, or there are fewer graphs than folds.
CvResult cross_validate(const GramFamily& family, std::span<const int> labels, const CvProtocol& protocol);

/// Fraction of `test` predicted correctly by a model trained on `train`.
double holdout_accuracy(const Eigen::MatrixXd& gram, std::span<const int> labels,
                        std::span<const std::size_t> train, std::span<const std::size_t> test, double C,
                        const SvmOptions& options = {});

}  // namespace tgk
