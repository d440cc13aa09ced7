#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "szego/hardy.hpp"

using namespace szego;

namespace {

// Brute-force count of alpha >= 0 with <a, alpha> = k.
std::uint64_t brute_count(const std::vector<int>& a, long k, std::size_t j = 0) {
  if (j + 1 == a.size()) return k % a[j] == 0 ? 1 : 0;
  std::uint64_t c = 0;
  for (long s = 0; s <= k; s += a[j]) c += brute_count(a, k - s, j + 1);
  return c;
}

}  // namespace

TEST_CASE("monomial enumeration") {
  const WeightVector a({1, 2});
  const auto m = enumerate_monomials(a, 7);
  CHECK(m.size() == 4);
  CHECK(m.front() == MultiIndex{1, 3});
  CHECK(m.back() == MultiIndex{7, 0});
  CHECK(std::is_sorted(m.begin(), m.end()));
  for (const auto& alpha : m) CHECK(alpha[0] + 2 * alpha[1] == 7);
  CHECK(enumerate_monomials(a, -1).empty());
  CHECK(enumerate_monomials(WeightVector({2, 4}), 3).empty());
}

TEST_CASE("dimension counts") {
  CHECK(dim_fourier(WeightVector({1, 2}), 7) == 4);
  for (const auto& w : std::vector<std::vector<int>>{{1, 1}, {1, 2}, {2, 3}, {1, 2, 3}, {2, 4}, {3, 5, 7}}) {
    const WeightVector a(w);
    const auto table = dim_table(a, 60);
    for (long k = 0; k <= 60; ++k) {
      CHECK(table[k] == brute_count(w, k));
      CHECK(table[k] == enumerate_monomials(a, k).size());
      CHECK(dim_fourier(a, k) == table[k]);
    }
  }
  // Quasi-polynomial: dim_{(1,2)}(k + 2) - dim(k) = 1 and dim_{(1,1,1)} second difference is 1.
  const auto t12 = dim_table(WeightVector({1, 2}), 100);
  for (long k = 0; k + 2 <= 100; ++k) CHECK(t12[k + 2] - t12[k] == 1);
  const auto t111 = dim_table(WeightVector({1, 1, 1}), 50);
  for (long k = 0; k + 2 <= 50; ++k) CHECK(t111[k + 2] - 2 * t111[k + 1] + t111[k] == 1);
  CHECK(dim_fourier(WeightVector({1, 2}), -3) == 0);
}

TEST_CASE("monomial norms") {
  // ||z_0||^2 on S^3 is vol/2 = pi^2; ||z_0 z_1||^2 on S^5 is pi^3/12.
  CHECK(monomial_norm(1, {1, 0}) == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(monomial_norm(2, {1, 1, 0}) * monomial_norm(2, {1, 1, 0}) == doctest::Approx(std::pow(kPi, 3) / 12.0));
  CHECK(monomial_norm(1, {0, 0}) * monomial_norm(1, {0, 0}) == doctest::Approx(2.0 * kPi * kPi));
  // Large exponents stay finite through the log-Gamma form.
  CHECK(std::isfinite(log_monomial_norm_sq(2, {300, 200, 100})));
  const SphereRule rule(1, {QuadratureMethod::product1d, 32, 1});
  const auto est = rule.integrate([](std::span<const cplx> z) { return std::norm(z[0] * z[0] * z[0] * z[1]); });
  CHECK(est.value == doctest::Approx(std::exp(log_monomial_norm_sq(1, {3, 1}))).epsilon(1e-12));
}

TEST_CASE("Gram matrix is the identity") {
  CHECK(gram_check(build_basis(WeightVector({1, 2}), 9), {QuadratureMethod::product1d, 64, 1}) < 1e-12);
  CHECK(gram_check(build_basis(WeightVector({1, 1}), 20), {QuadratureMethod::product1d, 64, 1}) < 1e-12);
  CHECK(gram_check(build_basis(WeightVector({1, 1, 1}), 1), {QuadratureMethod::montecarlo, 200000, 4}) < 5e-3);
}

TEST_CASE("basis evaluation") {
  const auto basis = build_basis(WeightVector({1, 2}), 4);
  const SpherePoint x(std::vector<cplx>{0.0, 1.0});
  const auto f = basis.evaluate(x);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis.exponents()[i][0] > 0) CHECK(f[i] == cplx(0.0, 0.0));
  }
  const auto y = SpherePoint::normalized({cplx(0.4, -0.3), cplx(0.1, 0.8)});
  const auto fy = basis.evaluate(y);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& al = basis.exponents()[i];
    const cplx direct = std::pow(y[0], al[0]) * std::pow(y[1], al[1]) / basis.norm(i);
    CHECK(std::abs(fy[i] - direct) < 1e-13);
  }
  CHECK(basis.diagonal(y.coords()) == doctest::Approx(fy.squaredNorm()));
}

TEST_CASE("dimension asymptotics") {
  const QuadratureSpec product{QuadratureMethod::product1d, 64, 1};
  auto r = dim_asymptotics(make_sphere(WeightVector({1, 1})), 400, product);
  CHECK(r.limit_hat == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.kappa_hat == doctest::Approx(1.0).epsilon(1e-8));
  r = dim_asymptotics(make_sphere(WeightVector({1, 2})), 200, product);
  CHECK(r.limit_hat == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(r.kappa_hat == doctest::Approx(1.0).epsilon(1e-8));
  r = dim_asymptotics(make_sphere(WeightVector({2, 4})), 100, product);
  CHECK(r.ell0 == 2);
  CHECK(r.p == 4);
  CHECK(r.limit_hat == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(r.kappa_hat == doctest::Approx(1.0).epsilon(1e-8));
  // Unit dz metric: kappa = 2^n.
  r = dim_asymptotics(make_sphere(WeightVector({1, 2}), MetricConvention::euclidean_unit_dz), 200, product);
  CHECK(r.kappa_hat == doctest::Approx(2.0).epsilon(1e-8));
  CHECK_THROWS_AS(dim_asymptotics(make_sphere(WeightVector({1, 1})), 5, product), ConfigError);
}

TEST_CASE("invariant sub-bases") {
  const auto basis = build_basis(WeightVector({1, 1}), 6);
  const auto z3 = invariant_subbasis(basis, CyclicConstraint{3, {1, 2}});
  for (const auto& al : z3.exponents()) CHECK((al[0] + 2 * al[1]) % 3 == 0);
  std::size_t count = 0;
  for (const auto& al : basis.exponents()) count += (al[0] + 2 * al[1]) % 3 == 0;
  CHECK(z3.size() == count);
  const auto lin = invariant_subbasis(build_basis(WeightVector({1, 1, 1}), 4), LinearWeightConstraint{{1, -1, 0}});
  CHECK(lin.size() == 3);
  for (const auto& al : lin.exponents()) CHECK(al[0] == al[1]);
  CHECK_THROWS_AS(invariant_subbasis(basis, CyclicConstraint{3, {1}}), ConfigError);
}

TEST_CASE("basis functions are CR") {
  std::mt19937_64 rng(6);
  const auto basis = build_basis(WeightVector({1, 2, 3}), 7);
  for (int i = 0; i < 10; ++i) CHECK(cr_equation_residual(basis, random_sphere_point(2, rng)) < 1e-6);
}
