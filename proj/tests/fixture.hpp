#pragma once

#include "feig/feigenbaum_map.hpp"
#include "feig/ifs.hpp"
#include "feig/inverse_branch.hpp"
#include "feig/partition.hpp"

namespace feig::testing {

// One quadratic map per test binary; everything downstream is immutable.
inline const FeigenbaumMap& quadratic_map() {
  static const FeigenbaumMap map = solve_feigenbaum(2, 40, 1e-12);
  return map;
}

inline const InverseBranch& quadratic_branch() {
  static const InverseBranch ib(quadratic_map());
  return ib;
}

inline const Ifs& quadratic_ifs() {
  static const Ifs ifs(quadratic_branch(), find_c(quadratic_branch()));
  return ifs;
}

inline const Partition& quadratic_partition() {
  static const Partition p(quadratic_ifs());
  return p;
}

// Literature value of |alpha| for the quadratic map.
inline constexpr double kAbsAlpha = 2.502907875095892822283902873218;

}  // namespace feig::testing
