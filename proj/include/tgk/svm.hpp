#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tgk/error.hpp"

namespace tgk {

/// The solver hit its iteration cap before the KKT gap closed.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& what, double residual) : Error(what), residual(residual) {}
  double residual;
};

struct SvmOptions {
  double tolerance = 1e-3;            ///< stop once the maximal KKT violation is below this
  std::size_t iterations_per_point = 100'000;  ///< iteration cap = this * n
};

/// Soft-margin C-SVM in dual form over a precomputed kernel.
struct SvmModel {
  Eigen::VectorXd alpha;  ///< dual variables, 0 <= alpha_i <= C
  Eigen::VectorXd coef;   ///< alpha_i * y_i
  double bias = 0;
  std::vector<std::size_t> support;  ///< indices with alpha_i > 0
  double C = 1;
  std::size_t iterations = 0;
  double kkt_gap = 0;  ///< maximal violation at exit
};

/// Trains with sequential minimal optimization (second-order working set
/// selection, pairwise analytic updates). `labels` are +1/-1. Pairs with
/// non-positive curvature use a tiny positive curvature instead of dividing
/// by zero. If all labels agree the model is the constant classifier.
/// Throws std::invalid_argument on shape errors or an asymmetric Gram and
/// ConvergenceError when the iteration cap is hit.
SvmModel svm_train(const Eigen::MatrixXd& gram, std::span<const int> labels, double C,
                   const SvmOptions& options = {});

/// Dual objective sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j K_ij.
double dual_objective(const SvmModel& m, const Eigen::MatrixXd& gram, std::span<const int> labels);

/// sum_i coef_i K(x, train_i) + bias.
double decision_value(const SvmModel& m, const Eigen::Ref<const Eigen::VectorXd>& kernel_row);

/// Sign of the decision value; exactly 0 maps to +1. Throws
/// std::invalid_argument if the row length differs from the training size.
int svm_predict(const SvmModel& m, const Eigen::Ref<const Eigen::VectorXd>& kernel_row);

}  // namespace tgk
