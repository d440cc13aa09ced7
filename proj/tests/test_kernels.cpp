#include <doctest.h>

#include <cmath>
#include <random>

#include "szego/kernels.hpp"

using namespace szego;

namespace {

SpherePoint e(std::size_t j, std::size_t dim) {
  std::vector<cplx> z(dim, 0.0);
  z[j] = 1.0;
  return SpherePoint(z);
}

std::vector<long> range(long a, long b, long s) {
  std::vector<long> out;
  for (long k = a; k <= b; k += s) out.push_back(k);
  return out;
}

}  // namespace

TEST_CASE("round sphere kernel closed forms") {
  std::mt19937_64 rng(1);
  const WeightVector round1({1, 1}), round2({1, 1, 1});
  for (long k : {0L, 3L, 17L, 60L}) {
    const auto b1 = build_basis(round1, k);
    const auto b2 = build_basis(round2, k);
    for (int i = 0; i < 10; ++i) {
      const auto x = random_sphere_point(1, rng);
      const auto y = random_sphere_point(1, rng);
      const cplx ip = std::conj(y[0]) * x[0] + std::conj(y[1]) * x[1];
      CHECK(std::abs(szego_eval(b1, x, y).value - (k + 1.0) * std::pow(ip, k) / (2 * kPi * kPi)) < 1e-10);
      const auto u = random_sphere_point(2, rng);
      CHECK(szego_eval(b2, u, u).value.real() ==
            doctest::Approx((k + 1.0) * (k + 2.0) / (2.0 * std::pow(kPi, 3))).epsilon(1e-12));
    }
  }
}

TEST_CASE("kernel symmetries") {
  const auto X = make_sphere(WeightVector({1, 2, 3}));
  const auto basis = build_basis(X.weights(), 11);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const auto x = random_sphere_point(2, rng);
    const auto y = random_sphere_point(2, rng);
    const cplx xy = szego_eval(basis, x, y).value;
    CHECK(std::abs(xy - std::conj(szego_eval(basis, y, x).value)) < 1e-13);
    const double theta = 0.37 * (i + 1);
    CHECK(std::abs(szego_eval(basis, X.act(theta, x), X.act(theta, y)).value - xy) < 1e-12);
    CHECK(std::abs(szego_eval(basis, X.act(theta, x), y).value - std::polar(1.0, 11 * theta) * xy) < 1e-12);
    const double xx = szego_eval(basis, x, x).value.real();
    const double yy = szego_eval(basis, y, y).value.real();
    CHECK(std::norm(xy) <= xx * yy * (1 + 1e-12));
  }
}

TEST_CASE("reproducing property") {
  const auto X = make_sphere(WeightVector({1, 2}));
  const auto x = SpherePoint::normalized({0.6, cplx(0.2, 0.5)});
  CHECK(reproducing_check(X, build_basis(X.weights(), 9), x, {QuadratureMethod::product1d, 64, 1}) < 1e-10);
  const auto Y = make_sphere(WeightVector({1, 1, 1}));
  const auto y = SpherePoint::normalized({0.5, 0.5, cplx(0.0, 0.7)});
  CHECK(reproducing_check(Y, build_basis(Y.weights(), 1), y, {QuadratureMethod::montecarlo, 200000, 2}) < 5e-3);
  CHECK_THROWS_AS(reproducing_check(X, build_basis(WeightVector({1, 1}), 2), x, {}), ConfigError);
}

TEST_CASE("diagonal leading coefficient") {
  SUBCASE("weights (1,2): b0 = f^2 / (2 pi^2)") {
    const auto X = make_sphere(WeightVector({1, 2}));
    const double t = 0.35;
    const auto x = SpherePoint::normalized({std::sqrt(1 - t), std::sqrt(t)});
    const auto fit = fit_leading(diagonal_series(X, x, range(60, 200, 10)), levi_data(X, x), 1);
    CHECK(fit.b0_hat == doctest::Approx(1.0 / (2 * kPi * kPi * (1 + t) * (1 + t))).epsilon(1e-6));
    CHECK(fit.kappa_hat == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fit.order_hat == doctest::Approx(1.0).epsilon(0.02));
  }
  SUBCASE("weights (1,2,3) at generic points") {
    const auto X = make_sphere(WeightVector({1, 2, 3}));
    const auto x = SpherePoint::normalized({0.6, cplx(0.3, 0.4), cplx(-0.2, 0.5)});
    const auto fit = fit_leading(diagonal_series(X, x, range(60, 200, 10)), levi_data(X, x), 2);
    CHECK(fit.kappa_hat == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(fit.corrections.size() == 2);
  }
  SUBCASE("too few entries") {
    const auto X = make_sphere(WeightVector({1, 1}));
    CHECK_THROWS_AS(fit_leading(diagonal_series(X, e(0, 2), {10, 20, 30}), levi_data(X, e(0, 2)), 1),
                    NumericalError);
  }
}

TEST_CASE("calibration constant") {
  CHECK(calibrate(make_sphere(WeightVector({1, 1}))).kappa == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(calibrate(make_sphere(WeightVector({1, 1, 1}))).kappa == doctest::Approx(1.0).epsilon(1e-4));
  const auto conv = MetricConvention::euclidean_unit_dz;
  CHECK(calibrate(make_sphere(WeightVector({1, 1}), conv)).kappa == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(calibrate(make_sphere(WeightVector({1, 1, 1}), conv)).kappa == doctest::Approx(4.0).epsilon(1e-4));
  CHECK_THROWS_AS(calibrate(make_sphere(WeightVector({1, 2}))), ConfigError);
}

TEST_CASE("stratum selection") {
  SUBCASE("weights (1,2) at (0,1)") {
    const auto X = make_sphere(WeightVector({1, 2}));
    const auto s = stratum_selection(X, e(1, 2), 200);
    CHECK(s.ell == 2);
    CHECK(s.forbidden == 100);  // odd degrees
    CHECK(s.forbidden_violations == 0);
    CHECK(s.max_forbidden_value == 0.0);
    CHECK(s.fluctuation < 0.05);
    CHECK(s.stratum_ratio == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(s.stratum_limit == doctest::Approx(1.0 / (4 * kPi * kPi)).epsilon(1e-3));
    for (const auto& r : s.rows) {
      if (r.predicted_zero) CHECK(r.value == 0.0);
    }
  }
  SUBCASE("weights (1,2,3) at (0,0,1)") {
    const auto X = make_sphere(WeightVector({1, 2, 3}));
    const auto s = stratum_selection(X, e(2, 3), 200);
    CHECK(s.ell == 3);
    CHECK(s.forbidden_violations == 0);
    CHECK(s.fluctuation < 0.05);
    CHECK(s.stratum_ratio == doctest::Approx(3.0).epsilon(1e-2));
  }
  SUBCASE("generic points are rejected") {
    const auto X = make_sphere(WeightVector({1, 2}));
    CHECK_THROWS_AS(stratum_selection(X, e(0, 2), 200), ConfigError);
  }
}

TEST_CASE("off-diagonal decay") {
  const auto X = make_sphere(WeightVector({1, 2}));
  const auto ks = range(20, 200, 10);
  const double beta = std::atan2(std::sqrt(0.3), std::sqrt(0.7));
  double previous = 0.0;
  for (double phi : {0.08, 0.16, 0.24}) {
    const SpherePoint x(std::vector<cplx>{std::cos(beta), std::sin(beta)});
    const SpherePoint y(std::vector<cplx>{std::cos(beta + phi), std::sin(beta + phi)});
    const auto d = offdiag_decay(X, x, y, ks);
    CHECK(d.rate > previous);
    CHECK(d.r_squared >= 0.95);
    previous = d.rate;
  }
  const auto x = SpherePoint::normalized({1.0, 1.0});
  CHECK_THROWS_AS(offdiag_decay(X, x, X.act(1.0, x), ks), NumericalError);
}

TEST_CASE("group averaging identity") {
  const auto basis = build_basis(WeightVector({1, 1}), 7);
  std::mt19937_64 rng(5);
  for (int m : {2, 3, 4}) {
    const auto action = CyclicAction::diagonal(m, {1, m - 1});
    for (int i = 0; i < 20; ++i) {
      const auto x = random_sphere_point(1, rng);
      const auto y = random_sphere_point(1, rng);
      CHECK(averaged_kernel(basis, action, x, y).max_deviation < 1e-10);
    }
  }
  SUBCASE("non-commuting action") {
    CyclicAction swap{2, Eigen::MatrixXcd::Zero(2, 2)};
    swap.generator(0, 1) = 1.0;
    swap.generator(1, 0) = 1.0;
    const auto b12 = build_basis(WeightVector({1, 2}), 4);
    CHECK_THROWS_AS(averaged_kernel(b12, swap, e(0, 2), e(1, 2)), ConfigError);
    // On the round sphere the swap commutes but is not diagonal.
    CHECK_THROWS_AS(averaged_kernel(basis, swap, e(0, 2), e(1, 2)), UnsupportedError);
  }
}
