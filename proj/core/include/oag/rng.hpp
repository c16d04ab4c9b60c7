#pragma once

#include <cstdint>

namespace oag {

// splitmix64: tiny seeded generator with identical output on every platform,
// which std::uniform_int_distribution does not guarantee. Randomness is
// always threaded through explicitly; there is no global state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform-ish in [0, n); modulo bias is irrelevant for test sampling.
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

  long long in(long long lo, long long hi) {  // inclusive bounds
    return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool flip() { return (next() & 1) != 0; }

  Rng split(std::uint64_t salt) { return Rng(next() ^ (salt * 0x9e3779b97f4a7c15ULL + 0x243f6a8885a308d3ULL)); }

 private:
  std::uint64_t state_;
};

inline std::uint64_t hash_str(const char* s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (; *s; ++s) { h ^= static_cast<unsigned char>(*s); h *= 1099511628211ULL; }
  return h;
}

}  // namespace oag
