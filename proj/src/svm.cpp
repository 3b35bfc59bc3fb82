#include "tgk/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tgk {
namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_inputs(const Eigen::MatrixXd& gram, std::span<const int> labels, double C) {
  if (gram.rows() != gram.cols()) throw std::invalid_argument("svm: gram matrix is not square");
  if (static_cast<std::size_t>(gram.rows()) != labels.size()) {
    throw std::invalid_argument("svm: label count does not match gram size");
  }
  if (!(C > 0)) throw std::invalid_argument("svm: C must be positive");
  for (int y : labels) {
    if (y != 1 && y != -1) throw std::invalid_argument("svm: labels must be +1 or -1");
  }
  const double scale = std::max(1.0, gram.cwiseAbs().maxCoeff());
  if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw std::invalid_argument("svm: gram matrix is not symmetric");
  }
}

}  // namespace

SvmModel svm_train(const Eigen::MatrixXd& K, std::span<const int> labels, double C,
                   const SvmOptions& options) {
  check_inputs(K, labels, C);
  const auto n = static_cast<Eigen::Index>(labels.size());
  SvmModel m;
  m.C = C;
  m.alpha = Eigen::VectorXd::Zero(n);
  m.coef = Eigen::VectorXd::Zero(n);
  if (n == 0) return m;

  const bool one_class = std::all_of(labels.begin(), labels.end(), [&](int y) { return y == labels[0]; });
  if (one_class) {
    m.bias = labels[0];
    return m;
  }

  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = labels[static_cast<std::size_t>(i)];
  const Eigen::VectorXd diag = K.diagonal();
  Eigen::VectorXd& alpha = m.alpha;
  // Gradient of 1/2 a'Qa - e'a with Q_ij = y_i y_j K_ij.
  Eigen::VectorXd grad = Eigen::VectorXd::Constant(n, -1.0);

  auto at_upper = [&](Eigen::Index t) { return alpha(t) >= C; };
  auto at_lower = [&](Eigen::Index t) { return alpha(t) <= 0; };

  const std::size_t cap = options.iterations_per_point * static_cast<std::size_t>(n);
  double gap = kInf;
  std::size_t iter = 0;
  for (;; ++iter) {
    // Maximal violating index i, then j by second-order gain.
    double gmax = -kInf;
    Eigen::Index i = -1;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (y(t) > 0) {
        if (!at_upper(t) && -grad(t) >= gmax) { gmax = -grad(t); i = t; }
      } else {
        if (!at_lower(t) && grad(t) >= gmax) { gmax = grad(t); i = t; }
      }
    }
    double gmax2 = -kInf;
    Eigen::Index j = -1;
    double best = kInf;
    for (Eigen::Index t = 0; t < n && i >= 0; ++t) {
      double diff;
      if (y(t) > 0) {
        if (at_lower(t)) continue;
        gmax2 = std::max(gmax2, grad(t));
        diff = gmax + grad(t);
      } else {
        if (at_upper(t)) continue;
        gmax2 = std::max(gmax2, -grad(t));
        diff = gmax - grad(t);
      }
      if (diff > 0) {
        double curvature = diag(i) + diag(t) - 2.0 * y(i) * y(t) * K(i, t);
        if (curvature <= 0) curvature = kTau;
        const double gain = -(diff * diff) / curvature;
        if (gain <= best) { best = gain; j = t; }
      }
    }
    gap = gmax + gmax2;
    if (i < 0 || j < 0 || gap < options.tolerance) break;
    if (iter >= cap) {
      throw ConvergenceError("svm: no convergence after " + std::to_string(iter) + " iterations", gap);
    }

    const double old_i = alpha(i);
    const double old_j = alpha(j);
    const double kij = K(i, j);
    if (y(i) != y(j)) {
      double curvature = diag(i) + diag(j) - 2.0 * kij;
      if (curvature <= 0) curvature = kTau;
      const double delta = (-grad(i) - grad(j)) / curvature;
      const double diff = alpha(i) - alpha(j);
      alpha(i) += delta;
      alpha(j) += delta;
      if (diff > 0) {
        if (alpha(j) < 0) { alpha(j) = 0; alpha(i) = diff; }
      } else {
        if (alpha(i) < 0) { alpha(i) = 0; alpha(j) = -diff; }
      }
      if (diff > 0) {
        if (alpha(i) > C) { alpha(i) = C; alpha(j) = C - diff; }
      } else {
        if (alpha(j) > C) { alpha(j) = C; alpha(i) = C + diff; }
      }
    } else {
      double curvature = diag(i) + diag(j) - 2.0 * kij;
      if (curvature <= 0) curvature = kTau;
      const double delta = (grad(i) - grad(j)) / curvature;
      const double sum = alpha(i) + alpha(j);
      alpha(i) -= delta;
      alpha(j) += delta;
      if (sum > C) {
        if (alpha(i) > C) { alpha(i) = C; alpha(j) = sum - C; }
      } else {
        if (alpha(j) < 0) { alpha(j) = 0; alpha(i) = sum; }
      }
      if (sum > C) {
        if (alpha(j) > C) { alpha(j) = C; alpha(i) = sum - C; }
      } else {
        if (alpha(i) < 0) { alpha(i) = 0; alpha(j) = sum; }
      }
    }
    const double di = alpha(i) - old_i;
    const double dj = alpha(j) - old_j;
    // grad += Q_i di + Q_j dj
    grad.array() += y.array() * (K.col(i).array() * (y(i) * di) + K.col(j).array() * (y(j) * dj));
  }
  m.iterations = iter;
  m.kkt_gap = gap;

  // rho: mean of y_i G_i over free vectors, else midpoint of the feasible interval.
  double ub = kInf, lb = -kInf, free_sum = 0;
  std::size_t free_count = 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    const double yg = y(t) * grad(t);
    if (at_upper(t)) {
      if (y(t) < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (at_lower(t)) {
      if (y(t) > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++free_count;
      free_sum += yg;
    }
  }
  double rho;
  if (free_count > 0) {
    rho = free_sum / static_cast<double>(free_count);
  } else if (std::isinf(ub)) {
    rho = lb;
  } else if (std::isinf(lb)) {
    rho = ub;
  } else {
    rho = (ub + lb) / 2;
  }
  m.bias = -rho;
  m.coef = alpha.cwiseProduct(y);
  for (Eigen::Index t = 0; t < n; ++t) {
    if (alpha(t) > 0) m.support.push_back(static_cast<std::size_t>(t));
  }
  return m;
}

double dual_objective(const SvmModel& m, const Eigen::MatrixXd& gram, std::span<const int> labels) {
  const auto n = static_cast<Eigen::Index>(labels.size());
  if (m.coef.size() != n || gram.rows() != n) throw std::invalid_argument("dual_objective: size mismatch");
  return m.alpha.sum() - 0.5 * m.coef.dot(gram * m.coef);
}

double decision_value(const SvmModel& m, const Eigen::Ref<const Eigen::VectorXd>& kernel_row) {
  if (kernel_row.size() != m.coef.size()) {
    throw std::invalid_argument("svm: kernel row length " + std::to_string(kernel_row.size()) +
                                " does not match training size " + std::to_string(m.coef.size()));
  }
  return m.coef.dot(kernel_row) + m.bias;
}

int svm_predict(const SvmModel& m, const Eigen::Ref<const Eigen::VectorXd>& kernel_row) {
  return decision_value(m, kernel_row) >= 0 ? +1 : -1;
}

}  // namespace tgk
