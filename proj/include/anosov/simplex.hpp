#pragma once

#include <vector>

#include "anosov/rational.hpp"

namespace anosov {

/// Dense exact simplex for  max c.x  s.t.  A x <= b, x >= 0, with b >= 0
/// (the origin is feasible). Bland's rule, so it always terminates.
struct LinearProgram {
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  std::vector<Rational> c;
};

struct LpSolution {
  bool bounded = true;
  Rational value;
  std::vector<Rational> x;
};

LpSolution solve_lp(const LinearProgram& lp);

/// Maximizes t subject to row.x >= t for every row, |x_j| <= 1, 0 <= t <= 1.
/// The open cone {x : row.x > 0 for all rows} is nonempty iff the optimal t
/// is positive; `x` is then a witness in it.
struct MarginResult {
  Rational margin;
  std::vector<Rational> x;
};

MarginResult max_margin(const std::vector<std::vector<Rational>>& rows, std::size_t dim);

}  // namespace anosov
