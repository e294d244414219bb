#pragma once

#include <random>

#include "doctest.h"
#include "tcplan/errors.hpp"
#include "tcplan/geometry.hpp"

namespace tcplan::test {

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline SpherePoint unit(std::initializer_list<double> xs) { return normalize(vec(xs)); }

inline SpherePoint random_sphere_point(std::mt19937_64& rng, Eigen::Index m) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec v(m + 1);
  for (Eigen::Index i = 0; i <= m; ++i) v[i] = n(rng);
  return normalize(v);
}

template <class F>
ErrorCode error_code_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a tcplan::Error");
  return ErrorCode::Parse;
}

}  // namespace tcplan::test
