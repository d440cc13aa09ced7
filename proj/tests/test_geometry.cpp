#include <doctest.h>

#include <cmath>
#include <random>

#include "szego/geometry.hpp"
#include "szego/orbifold.hpp"

using namespace szego;

namespace {

SpherePoint e(std::size_t j, std::size_t dim) {
  std::vector<cplx> z(dim, 0.0);
  z[j] = 1.0;
  return SpherePoint(z);
}

}  // namespace

TEST_CASE("isotropy orders") {
  const auto X = make_sphere(WeightVector({1, 2}));
  CHECK(isotropy_order(X, e(1, 2)) == 2);
  CHECK(isotropy_order(X, e(0, 2)) == 1);
  CHECK(isotropy_order(X, SpherePoint::normalized({1.0, 1.0})) == 1);
  const auto round = make_sphere(WeightVector({1, 1}));
  CHECK(isotropy_order(round, e(1, 2)) == 1);
  // Below the support threshold a coordinate does not count.
  CHECK(isotropy_order(X, SpherePoint::normalized({1e-12, 1.0})) == 2);
  CHECK_THROWS_AS(isotropy_order(X, e(0, 3)), ConfigError);
}

TEST_CASE("stratification by subset gcds") {
  auto s = stratification(make_sphere(WeightVector({1, 2})));
  CHECK(s.ell_values == std::vector<int>{1, 2});
  CHECK(s.ell0 == 1);
  CHECK(s.p == 2);
  s = stratification(make_sphere(WeightVector({1, 1})));
  CHECK(s.ell_values == std::vector<int>{1});
  CHECK(s.p == 1);
  s = stratification(make_sphere(WeightVector({1, 2, 3})));
  CHECK(s.ell_values == std::vector<int>{1, 2, 3});
  CHECK(s.p == 6);
  s = stratification(make_sphere(WeightVector({2, 4})));
  CHECK(s.ell_values == std::vector<int>{2, 4});
  CHECK(s.ell0 == 2);
  CHECK(s.p == 4);
  s = stratification(make_sphere(WeightVector({6, 10, 15})));
  CHECK(s.ell0 == 1);
  CHECK(s.p == 30);
}

TEST_CASE("random points are generic and orders divide p") {
  const auto X = make_sphere(WeightVector({2, 4, 6}));
  const auto s = stratification(X);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) {
    const int ell = isotropy_order(X, random_sphere_point(2, rng));
    CHECK(ell == s.ell0);
  }
  for (int ell : s.ell_values) {
    CHECK(s.p % ell == 0);
    CHECK(ell % s.ell0 == 0);
  }
}

TEST_CASE("Levi data under the unit-dz convention matches the closed forms") {
  const auto round = make_sphere(WeightVector({1, 1}), MetricConvention::euclidean_unit_dz);
  auto d = levi_data(round, SpherePoint::normalized({1.0, cplx(0.3, 0.2)}));
  CHECK(d.levi_eigenvalues.at(0) == doctest::Approx(0.5));
  CHECK(d.det_levi == doctest::Approx(0.5));
  CHECK(d.vol_density == doctest::Approx(1.0));
  const auto X = make_sphere(WeightVector({1, 2}), MetricConvention::euclidean_unit_dz);
  d = levi_data(X, e(1, 2));
  CHECK(d.f == doctest::Approx(0.5));
  CHECK(d.det_levi == doctest::Approx(0.25));
  CHECK(d.vol_density == doctest::Approx(0.5));
}

TEST_CASE("default metric gives dV = d sigma and eigenvalues f^{1+1/n}") {
  const auto X = make_sphere(WeightVector({1, 2, 3}));
  std::mt19937_64 rng(8);
  for (int i = 0; i < 20; ++i) {
    const auto x = random_sphere_point(2, rng);
    const auto d = levi_data(X, x);
    CHECK(d.vol_density == doctest::Approx(1.0).epsilon(1e-12));
    for (double mu : d.levi_eigenvalues) CHECK(mu == doctest::Approx(std::pow(d.f, 1.5)).epsilon(1e-12));
    CHECK(d.det_levi == doctest::Approx(std::pow(d.f, 3.0)).epsilon(1e-12));
  }
}

TEST_CASE("closed-form and frame Levi data agree at 100 random points") {
  for (auto metric : {MetricConvention::sphere_measure, MetricConvention::euclidean,
                      MetricConvention::euclidean_unit_dz}) {
    for (const auto& w : std::vector<std::vector<int>>{{1, 2}, {1, 2, 3}}) {
      const auto X = make_sphere(WeightVector(w), metric);
      std::mt19937_64 rng(11);
      for (int i = 0; i < 100; ++i) {
        const auto x = random_sphere_point(X.n(), rng);
        const auto a = levi_data(X, x);
        const auto b = levi_data_frame(X, x);
        REQUIRE(b.levi_eigenvalues.size() == a.levi_eigenvalues.size());
        for (std::size_t j = 0; j < a.levi_eigenvalues.size(); ++j) {
          CHECK(std::abs(a.levi_eigenvalues[j] - b.levi_eigenvalues[j]) < 1e-6);
        }
        CHECK(std::abs(a.det_levi - b.det_levi) < 1e-6);
        CHECK(std::abs(a.vol_density - b.vol_density) < 1e-6);
        CHECK(a.det_levi > 0.0);
      }
    }
  }
}

TEST_CASE("contact identities") {
  std::mt19937_64 rng(2);
  for (const auto& w : std::vector<std::vector<int>>{{1, 1}, {1, 2}}) {
    const auto X = make_sphere(WeightVector(w));
    for (int i = 0; i < 20; ++i) CHECK(check_contact(X, random_sphere_point(1, rng)).max() < 1e-6);
  }
  CHECK(check_contact(make_sphere(WeightVector({3, 5})), e(1, 2)).max() < 1e-6);
}

TEST_CASE("circle action") {
  const auto X = make_sphere(WeightVector({1, 2, 3}));
  std::mt19937_64 rng(4);
  const auto x = random_sphere_point(2, rng);
  const auto y = X.act(0.7, x);
  CHECK(X.contact_scaling(y.coords()) == X.contact_scaling(x.coords()));
  CHECK(std::abs(y[2] - std::polar(1.0, 2.1) * x[2]) < 1e-15);
  // R is the derivative of the action.
  const double h = 1e-6;
  const auto r = X.reeb(x.coords());
  const auto p = X.act(h, x.coords());
  const auto m = X.act(-h, x.coords());
  for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs((p[j] - m[j]) / (2 * h) - r[j]) < 1e-8);
  CHECK(X.contact_form(x.coords(), r) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(orbit_distance(X, x, y) < 1e-6);
  CHECK(orbit_distance(X, x, e(0, 3)) == doctest::Approx(orbit_distance(X, e(0, 3), x)).epsilon(1e-6));
}

TEST_CASE("geometric integral") {
  const QuadratureSpec product{QuadratureMethod::product1d, 64, 1};
  SUBCASE("unit-dz convention reproduces the tabulated values") {
    const auto conv = MetricConvention::euclidean_unit_dz;
    CHECK(geometric_integral(make_sphere(WeightVector({1, 1}), conv), product).value ==
          doctest::Approx(kPi * kPi).epsilon(1e-12));
    CHECK(geometric_integral(make_sphere(WeightVector({1, 2}), conv), product).value ==
          doctest::Approx(kPi * kPi / 2.0).epsilon(1e-12));
    const auto mc = geometric_integral(make_sphere(WeightVector({1, 1, 1}), conv),
                                       {QuadratureMethod::montecarlo, 100000, 3});
    CHECK(std::abs(mc.value - std::pow(kPi, 3) / 4.0) < 1e-10 + 3.0 * mc.std_error);
  }
  SUBCASE("default metric: 2 pi^{n+1} / (n! prod a)") {
    CHECK(geometric_integral(make_sphere(WeightVector({1, 2})), product).value ==
          doctest::Approx(kPi * kPi).epsilon(1e-12));
    const auto mc = geometric_integral(make_sphere(WeightVector({1, 2, 3})), {QuadratureMethod::montecarlo, 200000, 9});
    CHECK(std::abs(mc.value - std::pow(kPi, 3) / 6.0) < 3.0 * mc.std_error);
  }
  SUBCASE("product rule and Monte Carlo agree") {
    const auto X = make_sphere(WeightVector({1, 3}));
    const auto a = geometric_integral(X, product);
    const auto b = geometric_integral(X, {QuadratureMethod::montecarlo, 100000, 21});
    CHECK(std::abs(a.value - b.value) < 3.0 * b.std_error);
  }
}

TEST_CASE("orbifold integration") {
  const QuadratureSpec q{QuadratureMethod::montecarlo, 100000, 12};
  const ScalarField one = [](std::span<const cplx>) { return 1.0; };
  SUBCASE("free Z_3 quotient of S^3 has a third of the volume") {
    const auto r = orbifold_integrate(coordinate_atlas(1, 3, {1, 1}), one, q);
    CHECK(std::abs(r.total.value - 2.0 * kPi * kPi / 3.0) < 3.0 * r.total.std_error + 1e-12);
  }
  SUBCASE("a single chart with the trivial group is the plain integral") {
    const auto r = orbifold_integrate(trivial_atlas(1), one, q);
    CHECK(r.total.value == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-12));
  }
  SUBCASE("two atlases on S^3/Z_2 agree") {
    const ScalarField f = [](std::span<const cplx> z) { return std::norm(z[0]) * std::norm(z[0]); };
    const auto a = orbifold_integrate(coordinate_atlas(1, 2, {1, 1}), f, q);
    const auto b = orbifold_integrate(bump_atlas(1, 2, {1, 1}, 3, 5), f, {QuadratureMethod::montecarlo, 100000, 13});
    CHECK(std::abs(a.total.value - b.total.value) < 3.0 * std::hypot(a.total.std_error, b.total.std_error));
    CHECK(b.partition_defect < 1e-10);
  }
  SUBCASE("a broken partition of unity is rejected") {
    auto atlas = coordinate_atlas(1, 2, {1, 1});
    atlas.charts.pop_back();
    CHECK_THROWS_AS(orbifold_integrate(atlas, one, q), ConfigError);
  }
}
