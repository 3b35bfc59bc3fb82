#include "tgk/hash.hpp"

#include <bit>
#include <cstring>

namespace tgk {
namespace {

constexpr std::uint64_t fmix64(std::uint64_t k) {
  k ^= k >> 33;
  k *= 0xff51afd7ed558ccdULL;
  k ^= k >> 33;
  k *= 0xc4ceb9fe1a85ec53ULL;
  k ^= k >> 33;
  return k;
}

}  // namespace

std::string to_hex(const Key128& key) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(32, '0');
  for (int i = 0; i < 16; ++i) {
    out[15 - i] = digits[(key.hi >> (4 * i)) & 0xf];
    out[31 - i] = digits[(key.lo >> (4 * i)) & 0xf];
  }
  return out;
}

void SequenceHasher::mix(std::uint64_t word) {
  const std::uint64_t a = state_.hi;
  const std::uint64_t b = state_.lo;
  const std::uint64_t nb = fmix64(b + word * 0x87c37b91114253d5ULL) ^ std::rotl(a, 23);
  const std::uint64_t na = fmix64(a ^ (word + 0x4cf5ad432745937fULL)) + std::rotl(nb, 41);
  state_ = {na, nb};
}

SequenceHasher& SequenceHasher::absorb(std::uint64_t word) {
  mix(word);
  return *this;
}

SequenceHasher& SequenceHasher::absorb(const Key128& key) {
  mix(key.hi);
  mix(key.lo);
  return *this;
}

SequenceHasher& SequenceHasher::absorb(std::string_view symbol) {
  mix(static_cast<std::uint64_t>(symbol.size()));
  std::size_t i = 0;
  for (; i + 8 <= symbol.size(); i += 8) {
    std::uint64_t chunk = 0;
    std::memcpy(&chunk, symbol.data() + i, 8);
    mix(chunk);
  }
  if (i < symbol.size()) {
    std::uint64_t chunk = 0;
    std::memcpy(&chunk, symbol.data() + i, symbol.size() - i);
    mix(chunk);
  }
  return *this;
}

Key128 symbol_key(std::string_view symbol) { return SequenceHasher().absorb(symbol).key(); }

Key128 sequence_key(std::span<const std::string> symbols) {
  SequenceHasher h;
  for (const auto& s : symbols) h.absorb(symbol_key(s));
  return h.key();
}

std::string encode_sequence(std::span<const std::string> symbols) {
  std::string out;
  for (const auto& s : symbols) {
    out += std::to_string(s.size());
    out += ':';
    out += s;
  }
  return out;
}

}  // namespace tgk
