#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>

namespace tgk {

/// 128-bit feature key. Equal label sequences map to equal keys in every graph.
struct Key128 {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  friend constexpr auto operator<=>(const Key128&, const Key128&) = default;
};

std::string to_hex(const Key128& key);

/// Streaming 128-bit hash over a length-prefixed symbol encoding.
///
/// Every absorbed symbol is framed as (byte length, bytes), so the encoded
/// stream of a sequence is unambiguous and two different symbol sequences only
/// meet in a hash collision. The state itself is the key, which lets dynamic
/// programs extend a prefix key by one symbol without re-reading the prefix.
class SequenceHasher {
 public:
  SequenceHasher() = default;
  explicit SequenceHasher(Key128 state) : state_(state) {}

  SequenceHasher& absorb(std::string_view symbol);
  SequenceHasher& absorb(std::uint64_t word);
  SequenceHasher& absorb(const Key128& key);

  Key128 key() const { return state_; }

 private:
  void mix(std::uint64_t word);

  Key128 state_{0x6a09e667f3bcc908ULL, 0xbb67ae8584caa73bULL};
};

/// Key of a single symbol (its length-prefixed bytes).
Key128 symbol_key(std::string_view symbol);

/// Key of a finite sequence of symbols: the fold of absorb(symbol_key(s)).
/// Prefix keys extend to sequence keys one symbol at a time.
Key128 sequence_key(std::span<const std::string> symbols);

/// Canonical length-prefixed byte encoding of a symbol sequence. Two sequences
/// are equal iff their encodings are equal; used to audit hash collisions.
std::string encode_sequence(std::span<const std::string> symbols);

}  // namespace tgk

template <>
struct std::hash<tgk::Key128> {
  std::size_t operator()(const tgk::Key128& k) const noexcept {
    return static_cast<std::size_t>(k.lo ^ (k.hi * 0x9e3779b97f4a7c15ULL));
  }
};
