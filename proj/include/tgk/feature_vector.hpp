#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tgk/hash.hpp"

namespace tgk {

enum class KernelKind { RandomWalk, WeisfeilerLehman, SampledWalk };

std::string_view name(KernelKind kind);
KernelKind parse_kernel_kind(std::string_view name);

/// Sparse histogram of feature keys.
///
/// Values are stored as exact integer counts over a common denominator: 1 for
/// the exact kernels, the sample count S for sampled histograms. Entries are
/// sorted by key and never zero.
class FeatureVector {
 public:
  using Entry = std::pair<Key128, std::uint64_t>;

  FeatureVector() = default;
  FeatureVector(KernelKind kind, int param, std::uint64_t denominator = 1)
      : kind_(kind), param_(param), denominator_(denominator) {}

  static FeatureVector from_counts(KernelKind kind, int param,
                                   const std::unordered_map<Key128, std::uint64_t>& counts,
                                   std::uint64_t denominator = 1);

  KernelKind kind() const { return kind_; }
  int param() const { return param_; }
  std::uint64_t denominator() const { return denominator_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  std::uint64_t count(const Key128& key) const;
  double value(const Key128& key) const {
    return static_cast<double>(count(key)) / static_cast<double>(denominator_);
  }
  /// Sum of counts; throws OverflowError if it does not fit 64 bits.
  std::uint64_t total() const;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;

 private:
  KernelKind kind_ = KernelKind::RandomWalk;
  int param_ = 0;
  std::uint64_t denominator_ = 1;
  std::vector<Entry> entries_;
};

/// Exact sparse dot product of the integer counts. Throws OverflowError on
/// 128-bit overflow.
unsigned __int128 count_dot(const FeatureVector& a, const FeatureVector& b);

/// <a, b> in value space: count_dot / (denominator_a * denominator_b).
/// Throws std::invalid_argument if kind or parameter differ.
double inner_product(const FeatureVector& a, const FeatureVector& b);

/// Adds `b` to `a` with checked arithmetic.
std::uint64_t checked_add(std::uint64_t a, std::uint64_t b);
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b);

std::string serialize(const FeatureVector& f);
FeatureVector parse_feature_vector(std::string_view text);

}  // namespace tgk
