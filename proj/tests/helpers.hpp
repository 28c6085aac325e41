#pragma once

#include <string>
#include <vector>

#include "anosov/matrix.hpp"
#include "anosov/spectra.hpp"

namespace testing_util {

inline anosov::IntMatrix mat(const std::vector<std::vector<long>>& rows) {
  anosov::IntMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

inline anosov::spectra::ActionSpec action(std::vector<anosov::IntMatrix> gens) {
  return anosov::spectra::validate_action(gens);
}

inline anosov::IntMatrix cat_map() { return mat({{2, 1}, {1, 1}}); }
inline anosov::IntMatrix t3_m() { return mat({{0, 0, -1}, {1, 0, 2}, {0, 1, 1}}); }
inline anosov::IntMatrix t3_n() { return mat({{-3, -2, 0}, {-2, 1, -2}, {2, 0, 1}}); }

inline std::string data_path(const std::string& name) { return std::string(ANOSOV_TEST_DATA) + "/" + name; }

}  // namespace testing_util
