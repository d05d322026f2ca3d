#include <doctest.h>

#include <set>

#include "treesym/perm.hpp"
#include "treesym/rng.hpp"
#include "treesym/stats.hpp"

using namespace treesym;

TEST_CASE("counter rng is a pure function of key and counter") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  CHECK(Rng(42).at(7) == Rng(42).at(7));
  CHECK(Rng(42).at(7) != Rng(43).at(7));
  CHECK(Rng(1).stream("x").at(0) != Rng(1).stream("y").at(0));
  CHECK(Rng(1).stream("x").at(0) == Rng(1).stream("x").at(0));
}

TEST_CASE("below produces the full range") {
  Rng rng(5);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 200; ++i) seen.insert(rng.below(6));
  CHECK(seen == std::set<std::uint64_t>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("perm rank and unrank invert each other") {
  for (int n : {1, 2, 3, 4, 5}) {
    for (std::uint64_t r = 0; r < factorial(n); ++r) {
      const Perm p = perm_unrank(n, r);
      CHECK(perm_is_valid(p));
      CHECK(perm_rank(p) == r);
    }
  }
  CHECK(perm_rank(perm_identity(6)) == 0);
}

TEST_CASE("perm algebra") {
  const Perm a = perm_unrank(4, 7), b = perm_unrank(4, 11);
  const Perm ab = perm_compose(a, b);
  for (int x = 0; x < 4; ++x) CHECK(ab[static_cast<std::size_t>(x)] == a[b[static_cast<std::size_t>(x)]]);
  CHECK(perm_is_identity(perm_compose(a, perm_inverse(a))));
}

TEST_CASE("fisher-yates is uniform over S4") {
  Rng rng(99);
  std::vector<std::uint64_t> counts(24, 0);
  for (int i = 0; i < 120000; ++i) ++counts[perm_rank(perm_random(rng, 4))];
  CHECK(chi_square_uniform(counts).p > 0.001);
}
