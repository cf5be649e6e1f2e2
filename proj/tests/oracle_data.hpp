#pragma once

#include <fstream>
#include <string>

#include "haarquench/linalg.hpp"
#include "json.hpp"

#ifndef HAARQUENCH_ORACLE_DIR
#error "HAARQUENCH_ORACLE_DIR must point at tests/oracles"
#endif

namespace testing {

inline nlohmann::json load_reference() {
  std::ifstream in(std::string(HAARQUENCH_ORACLE_DIR) + "/reference.json");
  return nlohmann::json::parse(in);
}

inline haarquench::ComplexVector complex_vector(const nlohmann::json& pairs) {
  haarquench::ComplexVector v(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t i = 0; i < pairs.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = {pairs[i][0].get<double>(), pairs[i][1].get<double>()};
  return v;
}

inline haarquench::ComplexMatrix complex_matrix(const nlohmann::json& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  haarquench::ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m.row(i) = complex_vector(rows[static_cast<std::size_t>(i)]).transpose();
  return m;
}

}  // namespace testing
