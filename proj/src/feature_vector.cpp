#include "tgk/feature_vector.hpp"

#include <algorithm>
#include <charconv>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "tgk/error.hpp"
#include "tgk/text.hpp"

namespace tgk {

std::string_view name(KernelKind kind) {
  switch (kind) {
    case KernelKind::RandomWalk: return "rw";
    case KernelKind::WeisfeilerLehman: return "wl";
    case KernelKind::SampledWalk: return "sampled";
  }
  return "?";
}

KernelKind parse_kernel_kind(std::string_view name) {
  if (name == "rw") return KernelKind::RandomWalk;
  if (name == "wl") return KernelKind::WeisfeilerLehman;
  if (name == "sampled") return KernelKind::SampledWalk;
  throw std::invalid_argument("unknown kernel '" + std::string(name) + "'");
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("64-bit count overflow");
  return r;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("64-bit count overflow");
  return r;
}

FeatureVector FeatureVector::from_counts(KernelKind kind, int param,
                                         const std::unordered_map<Key128, std::uint64_t>& counts,
                                         std::uint64_t denominator) {
  if (denominator == 0) throw std::invalid_argument("feature denominator must be positive");
  FeatureVector f(kind, param, denominator);
  f.entries_.reserve(counts.size());
  for (const auto& [k, c] : counts) {
    if (c != 0) f.entries_.emplace_back(k, c);
  }
  std::sort(f.entries_.begin(), f.entries_.end());
  return f;
}

std::uint64_t FeatureVector::count(const Key128& key) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                             [](const Entry& e, const Key128& k) { return e.first < k; });
  return it != entries_.end() && it->first == key ? it->second : 0;
}

std::uint64_t FeatureVector::total() const {
  std::uint64_t sum = 0;
  for (const auto& [k, c] : entries_) sum = checked_add(sum, c);
  return sum;
}

unsigned __int128 count_dot(const FeatureVector& a, const FeatureVector& b) {
  unsigned __int128 sum = 0;
  auto i = a.entries().begin();
  auto j = b.entries().begin();
  while (i != a.entries().end() && j != b.entries().end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      const unsigned __int128 term = static_cast<unsigned __int128>(i->second) * j->second;
      if (__builtin_add_overflow(sum, term, &sum)) throw OverflowError("128-bit dot product overflow");
      ++i;
      ++j;
    }
  }
  return sum;
}

double inner_product(const FeatureVector& a, const FeatureVector& b) {
  if (a.kind() != b.kind() || a.param() != b.param()) {
    throw std::invalid_argument("inner product of feature vectors from different kernels");
  }
  const auto dot = static_cast<long double>(count_dot(a, b));
  return static_cast<double>(dot / (static_cast<long double>(a.denominator()) *
                                    static_cast<long double>(b.denominator())));
}

std::string serialize(const FeatureVector& f) {
  std::ostringstream out;
  out << "f " << name(f.kind()) << ' ' << f.param() << ' ' << f.denominator() << '\n';
  for (const auto& [k, c] : f.entries()) out << to_hex(k) << ' ' << c << '\n';
  return out.str();
}

namespace {

std::uint64_t parse_u64(std::string_view s, int base, std::size_t line) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError(line, "bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

FeatureVector parse_feature_vector(std::string_view text) {
  std::unordered_map<Key128, std::uint64_t> counts;
  std::optional<FeatureVector> header;
  std::size_t line_no = 0;
  for (auto raw : split_lines(text)) {
    ++line_no;
    auto tokens = tokenize(strip_comment(raw));
    if (tokens.empty()) continue;
    if (!header) {
      if (tokens.size() != 4 || tokens[0] != "f") throw ParseError(line_no, "expected 'f <kind> <param> <denominator>'");
      header.emplace(parse_kernel_kind(tokens[1]), static_cast<int>(parse_u64(tokens[2], 10, line_no)),
                     parse_u64(tokens[3], 10, line_no));
      continue;
    }
    if (tokens.size() != 2 || tokens[0].size() != 32) throw ParseError(line_no, "expected '<key> <count>'");
    Key128 key{parse_u64(tokens[0].substr(0, 16), 16, line_no), parse_u64(tokens[0].substr(16), 16, line_no)};
    counts[key] += parse_u64(tokens[1], 10, line_no);
  }
  if (!header) throw ParseError(1, "missing feature header");
  return FeatureVector::from_counts(header->kind(), header->param(), counts, header->denominator());
}

}  // namespace tgk
