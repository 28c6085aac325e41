#include "anosov/simplex.hpp"

#include "anosov/error.hpp"

namespace anosov {

LpSolution solve_lp(const LinearProgram& lp) {
  const std::size_t m = lp.a.size();
  const std::size_t n = lp.c.size();
  for (const auto& v : lp.b)
    if (v < 0) throw Error(ErrorCode::PreconditionFailed, "solve_lp needs a feasible origin");
  // Tableau rows: constraints, columns: n structural + m slack + rhs.
  const std::size_t cols = n + m + 1;
  std::vector<std::vector<Rational>> t(m, std::vector<Rational>(cols, Rational(0)));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = lp.a[i][j];
    t[i][n + i] = 1;
    t[i][cols - 1] = lp.b[i];
    basis[i] = n + i;
  }
  std::vector<Rational> z(cols, Rational(0));  // reduced costs, maximization
  for (std::size_t j = 0; j < n; ++j) z[j] = -lp.c[j];

  LpSolution sol;
  while (true) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j + 1 < cols; ++j)
      if (z[j] < 0) {
        enter = j;
        break;
      }
    if (enter == cols) break;
    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Rational ratio = t[i][cols - 1] / t[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) {
      sol.bounded = false;
      return sol;
    }
    Rational piv = t[leave][enter];
    for (auto& v : t[leave]) v /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      Rational f = t[i][enter];
      for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
    }
    if (z[enter] != 0) {
      Rational f = z[enter];
      for (std::size_t j = 0; j < cols; ++j) z[j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  sol.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) sol.x[basis[i]] = t[i][cols - 1];
  sol.value = z[cols - 1];
  return sol;
}

MarginResult max_margin(const std::vector<std::vector<Rational>>& rows, std::size_t dim) {
  // Variables: x+ (dim), x- (dim), t.
  const std::size_t n = 2 * dim + 1;
  LinearProgram lp;
  lp.c.assign(n, Rational(0));
  lp.c[n - 1] = 1;
  for (const auto& r : rows) {
    std::vector<Rational> row(n, Rational(0));
    for (std::size_t j = 0; j < dim; ++j) {
      row[j] = -r[j];
      row[dim + j] = r[j];
    }
    row[n - 1] = 1;
    lp.a.push_back(std::move(row));
    lp.b.emplace_back(0);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Rational> row(n, Rational(0));
    row[j] = 1;
    lp.a.push_back(std::move(row));
    lp.b.emplace_back(1);
  }
  auto sol = solve_lp(lp);
  MarginResult out;
  out.margin = sol.value;
  out.x.resize(dim);
  for (std::size_t j = 0; j < dim; ++j) out.x[j] = sol.x[j] - sol.x[dim + j];
  return out;
}

}  // namespace anosov
