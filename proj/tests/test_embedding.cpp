#include <doctest.h>

#include <cmath>
#include <random>

#include "szego/embedding.hpp"
#include "szego/kernels.hpp"

using namespace szego;

TEST_CASE("Kodaira map is constant on orbits") {
  const auto X = make_sphere(WeightVector({1, 2}));
  const auto basis = build_basis(X.weights(), 6);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto x = random_sphere_point(1, rng);
    const auto p = kodaira_map(basis, x);
    double norm = 0.0;
    for (const auto& c : p.homogeneous) norm += std::norm(c);
    CHECK(norm == doctest::Approx(1.0));
    CHECK(fs_distance(p, kodaira_map(basis, X.act(0.3 + i, x))) < 1e-7);
  }
}

TEST_CASE("Fubini-Study distance") {
  ProjectivePoint p{{1.0, 0.0}}, q{{0.0, 1.0}};
  CHECK(fs_distance(p, q) == doctest::Approx(kPi / 2));
  CHECK(fs_distance(p, p) == doctest::Approx(0.0));
  const double c = std::cos(0.4), s = std::sin(0.4);
  ProjectivePoint r{{c, s}};
  CHECK(fs_distance(p, r) == doctest::Approx(0.4));
  // Invariant under a unitary change of coordinates and phases.
  auto U = [](const ProjectivePoint& x) {
    return ProjectivePoint{{(x.homogeneous[0] + x.homogeneous[1]) / std::sqrt(2.0) * std::polar(1.0, 0.7),
                            (x.homogeneous[0] - x.homogeneous[1]) / std::sqrt(2.0)}};
  };
  CHECK(fs_distance(U(p), U(r)) == doctest::Approx(0.4));
  CHECK_THROWS_AS(fs_distance(p, ProjectivePoint{{1.0, 0.0, 0.0}}), ConfigError);
}

TEST_CASE("base points") {
  const auto basis = build_basis(WeightVector({1, 2}), 5);
  CHECK_THROWS_AS(kodaira_map(basis, SpherePoint(std::vector<cplx>{0.0, 1.0})), BasePointError);
  CHECK_NOTHROW(kodaira_map(build_basis(WeightVector({1, 2}), 6), SpherePoint(std::vector<cplx>{0.0, 1.0})));
}

TEST_CASE("injectivity scan") {
  const auto X = make_sphere(WeightVector({1, 2}));
  const auto a = injectivity_scan(X, 4, 200, 7);
  CHECK(a.pass);
  CHECK(a.pairs == 200);
  CHECK(a.base_point_failures == 0);
  for (const auto& bin : a.bins) {
    if (bin.pairs > 0) CHECK(bin.min_separation > 0.0);
  }
  const auto b = injectivity_scan(X, 4, 200, 7);
  REQUIRE(a.bins.size() == b.bins.size());
  for (std::size_t i = 0; i < a.bins.size(); ++i) CHECK(a.bins[i].min_separation == b.bins[i].min_separation);
}

TEST_CASE("immersion") {
  const auto X = make_sphere(WeightVector({1, 2}));
  const auto x = SpherePoint::normalized({0.7, cplx(0.3, 0.5)});
  const auto r = immersion_check(X, 4, x);
  CHECK(r.pass);
  CHECK(r.smallest > kRankTolerance);
  CHECK(std::abs(r.reeb_derivative) < 1e-6);
  CHECK_THROWS_AS(immersion_check(X, 3, x), ConfigError);
  CHECK_THROWS_AS(immersion_check(X, 4, SpherePoint(std::vector<cplx>{0.0, 1.0})), ConfigError);
}

TEST_CASE("embedding sweep") {
  const auto s = embedding_sweep(make_sphere(WeightVector({1, 2})), 4, 100, 10, 1);
  CHECK(s.rows.size() == 4);
  CHECK(s.pass);
  CHECK(s.k_star >= 1);
  CHECK(s.rows.back().k == 8);
}

TEST_CASE("coherent states") {
  const auto basis = build_basis(WeightVector({1, 1}), 10);
  const auto x0 = SpherePoint::normalized({0.6, cplx(0.0, 0.8)});
  const auto u = coherent_state(basis, x0);
  CHECK(u.peak_value() == doctest::Approx(std::sqrt(11.0 / (2 * kPi * kPi))));
  CHECK(u.coefficients().norm() == doctest::Approx(1.0));
  CHECK(std::abs(u(x0.coords())) == doctest::Approx(u.peak_value()));
  const auto [where, value] = u.sup(4);
  CHECK(value <= u.peak_value() * (1 + 1e-8));
  CHECK(value >= u.peak_value() * (1 - 1e-6));
  // Off the orbit of x0 the state is strictly smaller.
  const auto y = SpherePoint::normalized({0.8, cplx(0.0, 0.6)});
  CHECK(std::abs(u(y.coords())) < 0.9 * u.peak_value());
}
