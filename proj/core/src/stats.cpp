#include "treesym/stats.hpp"

#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace treesym {

double chi_square_p(double statistic, double dof) {
  if (dof <= 0) throw std::invalid_argument("chi-square needs positive degrees of freedom");
  if (statistic <= 0) return 1.0;
  return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

ChiSquareResult chi_square_uniform(const std::vector<std::uint64_t>& counts) {
  if (counts.size() < 2) throw std::invalid_argument("need at least two cells");
  ChiSquareResult r;
  for (std::uint64_t c : counts) r.n += c;
  if (r.n == 0) throw std::invalid_argument("empty sample");
  const double expected = static_cast<double>(r.n) / static_cast<double>(counts.size());
  for (std::uint64_t c : counts) {
    const double d = static_cast<double>(c) - expected;
    r.statistic += d * d / expected;
  }
  r.dof = static_cast<double>(counts.size() - 1);
  r.p = chi_square_p(r.statistic, r.dof);
  return r;
}

ChiSquareResult chi_square_independence(const std::vector<std::vector<std::uint64_t>>& table) {
  const std::size_t rows = table.size();
  if (rows < 2) throw std::invalid_argument("need at least two rows");
  const std::size_t cols = table.front().size();
  if (cols < 2) throw std::invalid_argument("need at least two columns");

  ChiSquareResult r;
  std::vector<std::uint64_t> row_sum(rows, 0), col_sum(cols, 0);
  for (std::size_t i = 0; i < rows; ++i) {
    if (table[i].size() != cols) throw std::invalid_argument("ragged contingency table");
    for (std::size_t j = 0; j < cols; ++j) {
      row_sum[i] += table[i][j];
      col_sum[j] += table[i][j];
      r.n += table[i][j];
    }
  }
  if (r.n == 0) throw std::invalid_argument("empty sample");
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double expected =
          static_cast<double>(row_sum[i]) * static_cast<double>(col_sum[j]) /
          static_cast<double>(r.n);
      if (expected == 0.0) continue;
      const double d = static_cast<double>(table[i][j]) - expected;
      r.statistic += d * d / expected;
    }
  }
  r.dof = static_cast<double>((rows - 1) * (cols - 1));
  r.p = chi_square_p(r.statistic, r.dof);
  return r;
}

}  // namespace treesym
