#include <doctest.h>

#include <cmath>
#include <random>

#include "szego/reduction.hpp"

using namespace szego;

namespace {
const std::vector<int> kB{1, -1, 0};
}

TEST_CASE("moment map") {
  const auto X = make_sphere(WeightVector({1, 1, 1}));
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(moment_map(X, kB, SpherePoint(std::vector<cplx>{r, r, 0.0})) == doctest::Approx(0.0));
  CHECK(moment_map(X, kB, SpherePoint(std::vector<cplx>{1.0, 0.0, 0.0})) == doctest::Approx(-1.0));
  CHECK(moment_map(X, kB, SpherePoint(std::vector<cplx>{0.0, 1.0, 0.0})) == doctest::Approx(1.0));
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const auto x = random_level_point(X, kB, rng);
    CHECK(std::abs(moment_map(X, kB, x)) < 1e-12);
    CHECK(moment_gradient_norm(X, kB, x) > 0.0);
  }
}

TEST_CASE("level set classification") {
  auto m = classify_level_set(kB, 3);
  CHECK(m.nonempty);
  CHECK(m.has_fixed_points);
  m = classify_level_set({1, -1, 1}, 3);
  CHECK(m.nonempty);
  CHECK_FALSE(m.has_fixed_points);
  CHECK_FALSE(classify_level_set({1, 2, 1}, 3).nonempty);
  CHECK_THROWS_AS(classify_level_set({1, -1}, 3), ConfigError);
  const auto v = level_polytope_vertices(kB);
  REQUIRE(v.size() == 2);
  CHECK(v[0] == std::vector<double>{0.5, 0.5, 0.0});
  CHECK(v[1] == std::vector<double>{0.0, 0.0, 1.0});
}

TEST_CASE("orbit volume") {
  const auto X = make_sphere(WeightVector({1, 1, 1}));
  const double r = 1.0 / std::sqrt(2.0);
  const SpherePoint x(std::vector<cplx>{r, r, 0.0});
  CHECK(v_eff(X, kB, x) == doctest::Approx(2 * kPi));
  CHECK(v_eff(X, kB, X.act(0.8, x)) == doctest::Approx(2 * kPi));
  const auto fixed = orbit_volume(X, kB, SpherePoint(std::vector<cplx>{0.0, 0.0, 1.0}));
  CHECK(fixed.fixed_point);
  CHECK(fixed.length == 0.0);
  const auto iso = orbit_volume(X, {2, -2, 0}, x);
  CHECK(iso.isotropy == 2);
  CHECK_THROWS_AS(orbit_volume(X, kB, SpherePoint(std::vector<cplx>{1.0, 0.0, 0.0})), ConfigError);
}

TEST_CASE("reduced sphere identification") {
  const auto pair = find_reduction(WeightVector({1, 1, 1}), kB);
  CHECK(std::vector<int>(pair.reduced.values().begin(), pair.reduced.values().end()) == std::vector<int>{1, 2});
  REQUIRE(pair.generators.size() == 2);
  CHECK(pair.generators[0] == MultiIndex{0, 0, 1});
  CHECK(pair.generators[1] == MultiIndex{1, 1, 0});
  for (long k = 0; k <= 30; ++k) {
    CHECK(invariant_dim(pair.ambient, kB, k) == static_cast<std::uint64_t>(k / 2 + 1));
    const auto sub = invariant_subbasis(build_basis(pair.ambient, k), LinearWeightConstraint{kB});
    CHECK(invariant_dim(pair.ambient, kB, k) == sub.size());
  }
  const auto cmp = reduction_compare(pair, 100);
  CHECK(cmp.pass);
  CHECK(cmp.threshold == 0);
  CHECK(cmp.rows.size() == 101);
  CHECK_THROWS_AS(find_reduction(WeightVector({1, 1, 1}), {1, 1, 1}), ConfigError);
  CHECK_THROWS_AS(find_reduction(WeightVector({1, 1, 1}), {0, 0, 0}), ConfigError);
  CHECK_THROWS_AS(find_reduction(WeightVector({1, 1}), {1, -1}), UnsupportedError);
}

TEST_CASE("sigma map") {
  const auto pair = find_reduction(WeightVector({1, 1, 1}), kB);
  const auto s1 = sigma_map(pair, 1);
  CHECK(s1.rows == 1);
  CHECK(s1.cols == 1);
  CHECK(s1.smallest > 1e-6);
  for (long k : {4L, 10L}) {
    const auto s = sigma_map(pair, k);
    CHECK(s.rows == s.cols);
    CHECK(s.cols == static_cast<std::size_t>(k / 2 + 1));
    CHECK(s.smallest > 1e-6);
    CHECK(s.stability < 0.01);
    CHECK(s.refined_singular_values.size() == s.singular_values.size());
  }
  CHECK_THROWS_AS(sigma_map(find_reduction(WeightVector({1, 1, 1, 1}), {1, -1, 0, 0}), 2), UnsupportedError);
}
