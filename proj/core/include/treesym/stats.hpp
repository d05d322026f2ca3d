#pragma once

#include <cstdint>
#include <vector>

namespace treesym {

// Upper tail of the chi-square distribution with dof degrees of freedom.
double chi_square_p(double statistic, double dof);

struct ChiSquareResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p = 1.0;
  std::uint64_t n = 0;
};

// Goodness of fit against the uniform distribution over counts.size() cells.
ChiSquareResult chi_square_uniform(const std::vector<std::uint64_t>& counts);

// Pearson independence test on a contingency table (rows x columns),
// margins estimated, dof = (r-1)(c-1).
ChiSquareResult chi_square_independence(const std::vector<std::vector<std::uint64_t>>& table);

}  // namespace treesym
