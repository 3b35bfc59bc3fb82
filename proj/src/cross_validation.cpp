#include "tgk/cross_validation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tgk {
namespace {

std::vector<Eigen::Index> as_index(std::span<const std::size_t> idx) {
  return {idx.begin(), idx.end()};
}

std::vector<int> pick(std::span<const int> labels, std::span<const std::size_t> idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(labels[i]);
  return out;
}

/// Training indices of fold f: everything outside folds[f], ascending.
std::vector<std::size_t> complement(const std::vector<std::vector<std::size_t>>& folds, std::size_t f) {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < folds.size(); ++g) {
    if (g != f) out.insert(out.end(), folds[g].begin(), folds[g].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, std::size_t k, Rng& rng) {
  if (k < 2) throw std::invalid_argument("stratified_folds: need at least 2 folds");
  if (k > labels.size()) {
    throw std::invalid_argument("stratified_folds: " + std::to_string(labels.size()) + " graphs cannot fill " +
                                std::to_string(k) + " folds");
  }
  std::vector<int> classes(labels.begin(), labels.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t next = 0;
  for (int c : classes) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == c) members.push_back(i);
    }
    rng.shuffle(members);
    for (auto i : members) {
      folds[next].push_back(i);
      next = (next + 1) % k;
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

double holdout_accuracy(const Eigen::MatrixXd& gram, std::span<const int> labels,
                        std::span<const std::size_t> train, std::span<const std::size_t> test, double C,
                        const SvmOptions& options) {
  if (test.empty()) throw std::invalid_argument("holdout_accuracy: empty test set");
  const auto tr = as_index(train);
  const auto te = as_index(test);
  const Eigen::MatrixXd k_train = gram(tr, tr);
  const auto y_train = pick(labels, train);
  const SvmModel model = svm_train(k_train, y_train, C, options);
  const Eigen::MatrixXd k_test = gram(te, tr);
  std::size_t correct = 0;
  for (Eigen::Index r = 0; r < k_test.rows(); ++r) {
    if (svm_predict(model, k_test.row(r).transpose()) == labels[test[static_cast<std::size_t>(r)]]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

Selection select_parameters(const std::map<int, Eigen::MatrixXd>& train_grams, std::span<const int> labels,
                            const CvProtocol& protocol, Rng& rng) {
  if (train_grams.empty()) throw std::invalid_argument("select_parameters: no Gram matrices");
  if (protocol.c_grid.empty()) throw std::invalid_argument("select_parameters: empty C grid");
  const auto folds = stratified_folds(labels, protocol.inner_folds, rng);
  std::vector<std::vector<std::size_t>> trains;
  for (std::size_t f = 0; f < folds.size(); ++f) trains.push_back(complement(folds, f));

  Selection best;
  best.inner_accuracy = -1;
  for (const auto& [param, gram] : train_grams) {
    if (static_cast<std::size_t>(gram.rows()) != labels.size()) {
      throw std::invalid_argument("select_parameters: Gram size does not match labels");
    }
    for (double C : protocol.c_grid) {
      std::size_t correct = 0;
      for (std::size_t f = 0; f < folds.size(); ++f) {
        const double acc = holdout_accuracy(gram, labels, trains[f], folds[f], C, protocol.svm);
        correct += static_cast<std::size_t>(std::lround(acc * static_cast<double>(folds[f].size())));
      }
      const double acc = static_cast<double>(correct) / static_cast<double>(labels.size());
      if (acc > best.inner_accuracy) best = {param, C, acc};
    }
  }
  return best;
}

CvResult cross_validate(const GramFamily& family, std::span<const int> labels, const CvProtocol& protocol) {
  if (family.empty()) throw std::invalid_argument("cross_validate: empty Gram family");
  const auto& first = family.begin()->second;
  const std::size_t n = labels.size();
  for (const auto& [param, g] : family) {
    if (static_cast<std::size_t>(g.size()) != n) {
      throw std::invalid_argument("cross_validate: Gram for param " + std::to_string(param) +
                                  " has " + std::to_string(g.size()) + " rows, expected " + std::to_string(n));
    }
    if (g.ids != first.ids) throw std::invalid_argument("cross_validate: Grams disagree on graph ids");
  }
  if (n < protocol.folds) {
    throw std::invalid_argument("cross_validate: fewer graphs (" + std::to_string(n) + ") than folds (" +
                                std::to_string(protocol.folds) + ")");
  }
  if (protocol.repetitions < 1) throw std::invalid_argument("cross_validate: need at least one repetition");

  CvResult result;
  for (std::size_t rep = 0; rep < protocol.repetitions; ++rep) {
    Rng rng(derive_seed(protocol.seed, rep));
    const auto folds = stratified_folds(labels, protocol.folds, rng);
    std::size_t correct = 0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
      const auto train = complement(folds, f);
      const auto tr = as_index(train);
      std::map<int, Eigen::MatrixXd> train_grams;
      for (const auto& [param, g] : family) train_grams.emplace(param, g.values(tr, tr));
      const auto y_train = pick(labels, train);
      Rng inner(derive_seed(derive_seed(protocol.seed, rep), f + 1));
      const Selection sel = select_parameters(train_grams, y_train, protocol, inner);
      result.selections.push_back(sel);
      const double acc =
          holdout_accuracy(family.at(sel.param).values, labels, train, folds[f], sel.C, protocol.svm);
      correct += static_cast<std::size_t>(std::lround(acc * static_cast<double>(folds[f].size())));
    }
    result.repetition_accuracy.push_back(100.0 * static_cast<double>(correct) / static_cast<double>(n));
  }
  const double reps = static_cast<double>(result.repetition_accuracy.size());
  double sum = 0;
  for (double a : result.repetition_accuracy) sum += a;
  result.mean = sum / reps;
  double sq = 0;
  for (double a : result.repetition_accuracy) sq += (a - result.mean) * (a - result.mean);
  result.std = std::sqrt(sq / reps);
  return result;
}

}  // namespace tgk
