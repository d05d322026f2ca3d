#pragma once

#include <cstdint>
#include <vector>

#include "treesym/rng.hpp"

namespace treesym {

// Permutation of {0..n-1} as an image table: p[x] is the image of x.
using Perm = std::vector<std::uint8_t>;

Perm perm_identity(int n);
bool perm_is_valid(const Perm& p);
bool perm_is_identity(const Perm& p);

// Composition acts left: perm_compose(a, b)[x] == a[b[x]].
Perm perm_compose(const Perm& a, const Perm& b);
Perm perm_inverse(const Perm& p);

// Lehmer-code ranking; rank 0 is the identity. n <= 20.
std::uint64_t perm_rank(const Perm& p);
Perm perm_unrank(int n, std::uint64_t rank);
std::uint64_t factorial(int n);

// Fisher-Yates draw, uniform over all n! permutations.
Perm perm_random(Rng& rng, int n);

}  // namespace treesym
