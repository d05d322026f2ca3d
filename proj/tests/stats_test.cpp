#include <doctest.h>

#include <stdexcept>

#include "treesym/stats.hpp"

using namespace treesym;

TEST_CASE("chi-square tail values") {
  // Classical quantiles: P(X > 3.841) ~ 0.05 at 1 dof, P(X > 9.488) ~ 0.05 at 4 dof.
  CHECK(chi_square_p(3.841, 1) == doctest::Approx(0.05).epsilon(0.01));
  CHECK(chi_square_p(9.488, 4) == doctest::Approx(0.05).epsilon(0.01));
  CHECK(chi_square_p(0.0, 3) == doctest::Approx(1.0));
  CHECK(chi_square_p(1000.0, 3) < 1e-12);
}

TEST_CASE("uniform goodness of fit") {
  CHECK(chi_square_uniform({1000, 1010, 990, 1004}).p > 0.5);
  CHECK(chi_square_uniform({2000, 10, 1000, 990}).p < 1e-12);
  CHECK_THROWS_AS(chi_square_uniform({5}), std::invalid_argument);
}

TEST_CASE("independence test") {
  // Independent margins.
  CHECK(chi_square_independence({{250, 250}, {250, 250}}).p > 0.9);
  // Perfectly correlated.
  CHECK(chi_square_independence({{500, 0}, {0, 500}}).p < 1e-12);
  const auto r = chi_square_independence({{50, 60, 55}, {47, 62, 51}});
  CHECK(r.dof == 2);
  CHECK(r.p > 0.5);
}
