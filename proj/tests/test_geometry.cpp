#include <cmath>

#include "test_support.hpp"

using namespace tcplan;
using tcplan::test::error_code_of;
using tcplan::test::random_sphere_point;
using tcplan::test::unit;
using tcplan::test::vec;

TEST_CASE("normalize scales to unit length") {
  CHECK((normalize(vec({3, 4})).coords() - vec({0.6, 0.8})).norm() < 1e-15);
  CHECK((normalize(vec({0, 0, 1})).coords() - vec({0, 0, 1})).norm() == 0.0);
  const double h = 0.70710678118654752440;
  CHECK((normalize(vec({1, 1})).coords() - vec({h, h})).norm() < 1e-12);
}

TEST_CASE("normalize rejects the zero vector") {
  CHECK(error_code_of([] { normalize(vec({0, 0, 0})); }) == ErrorCode::ZeroVector);
  CHECK(error_code_of([] { normalize(vec({1e-13, 0})); }) == ErrorCode::ZeroVector);
}

TEST_CASE("sphere points are validated") {
  CHECK(error_code_of([] { SpherePoint(vec({1, 1})); }) == ErrorCode::NotOnSphere);
  CHECK(error_code_of([] { SpherePoint(vec({NAN, 0})); }) == ErrorCode::NonFinite);
  CHECK(error_code_of([] { SpherePoint(vec({1})); }) == ErrorCode::DimensionMismatch);
  CHECK(SpherePoint(vec({0, 2}), 2.0).radius() == 2.0);
}

TEST_CASE("stereographic projection from the north pole") {
  CHECK(stereo_proj(south_pole(3)).coords().norm() == 0.0);
  CHECK((stereo_proj(unit({1, 0, 0})).coords() - vec({1, 0})).norm() == 0.0);
  CHECK(error_code_of([] { stereo_proj(north_pole(2)); }) == ErrorCode::AtPole);
}

TEST_CASE("inverse stereographic projection") {
  CHECK((stereo_inv(EuclidPoint(vec({0, 0}))).coords() - vec({0, 0, -1})).norm() == 0.0);
  CHECK((stereo_inv(EuclidPoint(vec({1, 0}))).coords() - vec({1, 0, 0})).norm() < 1e-15);
  // q(2, 0) = (4/5, 0, 3/5)
  CHECK((stereo_inv(EuclidPoint(vec({2, 0}))).coords() - vec({0.8, 0, 0.6})).norm() < 1e-15);
}

TEST_CASE("chart round trips on random samples") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int m = 1; m <= 4; ++m) {
    double worst_sphere = 0.0, worst_plane = 0.0;
    for (int i = 0; i < 2000; ++i) {
      const SpherePoint x = random_sphere_point(rng, m);
      if (x.coords()[m] > 1.0 - 1e-3) continue;
      worst_sphere = std::max(worst_sphere, (stereo_inv(stereo_proj(x)).coords() - x.coords()).norm());
      Vec y(m);
      for (int j = 0; j < m; ++j) y[j] = n(rng);
      worst_plane = std::max(worst_plane, (stereo_proj(stereo_inv(EuclidPoint(y))).coords() - y).norm());
    }
    CHECK(worst_sphere < 1e-10);
    CHECK(worst_plane < 1e-10);
  }
}

TEST_CASE("odd tangent field") {
  CHECK((tangent_odd(unit({1, 0, 0, 0})).coords() - vec({0, 1, 0, 0})).norm() == 0.0);
  CHECK((tangent_odd(unit({0, 1})).coords() - vec({-1, 0})).norm() == 0.0);
  CHECK(error_code_of([] { tangent_odd(unit({0, 0, 1})); }) == ErrorCode::OddAmbientDim);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const SpherePoint x = random_sphere_point(rng, 3);
    const Vec v = tangent_odd(x).coords();
    CHECK(std::abs(v.dot(x.coords())) <= 1e-12);
    CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
  }
}

TEST_CASE("even tangent field") {
  CHECK(tangent_even(unit({1, 0, 0})).coords().norm() == 0.0);
  CHECK(tangent_even(unit({-1, 0, 0})).coords().norm() == 0.0);
  CHECK((tangent_even(unit({0, 0, 1})).coords() - vec({0, -1, 0})).norm() == 0.0);
  CHECK((tangent_even(unit({0, 1, 0, 0, 0})).coords() - vec({0, 0, 1, 0, 0})).norm() == 0.0);
  CHECK(error_code_of([] { tangent_even(unit({0, 1})); }) == ErrorCode::EvenAmbientDim);
  std::mt19937_64 rng(13);
  int checked = 0;
  for (int i = 0; i < 1200 && checked < 1000; ++i) {
    const SpherePoint x = random_sphere_point(rng, 2);
    const Vec e1 = basis_point(2, 0).coords();
    if ((x.coords() - e1).norm() <= 0.01 || (x.coords() + e1).norm() <= 0.01) continue;
    ++checked;
    const Vec v = tangent_even(x).coords();
    CHECK(std::abs(v.dot(x.coords())) <= 1e-12);
    CHECK(v.norm() > 0.0);
  }
  CHECK(checked == 1000);
}

TEST_CASE("parallelogram law for unit pairs") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 1000; ++i) {
    const Vec a = random_sphere_point(rng, 4).coords();
    const Vec b = random_sphere_point(rng, 4).coords();
    CHECK(std::abs((a + b).squaredNorm() + (a - b).squaredNorm() - 4.0) <= 1e-12);
    CHECK(std::max((a + b).norm(), (a - b).norm()) >= std::sqrt(2.0) - 1e-12);
  }
}

TEST_CASE("poles and basis points") {
  CHECK((north_pole(2).coords() - vec({0, 0, 1})).norm() == 0.0);
  CHECK((south_pole(1).coords() - vec({0, -1})).norm() == 0.0);
  CHECK((basis_point(3, 2).coords() - vec({0, 0, 1, 0})).norm() == 0.0);
  CHECK((north_pole(2).antipode().coords() - south_pole(2).coords()).norm() == 0.0);
}
