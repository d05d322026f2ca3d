#pragma once

#include <cstdint>
#include <string_view>

namespace treesym {

// Counter-based pseudo-random generator (splitmix64 finalizer over a keyed
// counter). Every output is a pure function of (key, counter), so lazily
// evaluated structures draw identical values no matter in which order they
// are forced. Streams derived with distinct labels are independent.
class Rng {
 public:
  Rng() : Rng(0) {}
  explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x7475bd1cd7a0d9a1ULL)) {}

  Rng stream(std::uint64_t label) const {
    return Rng(mix(key_ ^ mix(label ^ 0x94c3f29e0a7b5cd3ULL)), 0);
  }
  Rng stream(std::string_view label) const { return stream(fnv1a(label)); }

  std::uint64_t next() { return at(counter_++); }
  std::uint64_t at(std::uint64_t counter) const {
    return mix(key_ + 0x9e3779b97f4a7c15ULL * (counter + 1));
  }

  // Unbiased draw from [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % n;
  }

  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    return h;
  }

 private:
  Rng(std::uint64_t key, int) : key_(key) {}
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace treesym
