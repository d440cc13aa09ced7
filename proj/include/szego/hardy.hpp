#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "szego/core.hpp"
#include "szego/geometry.hpp"
#include "szego/quadrature.hpp"

namespace szego {

using MultiIndex = std::vector<int>;

/// All alpha >= 0 with <a, alpha> = k, lexicographically sorted. Empty for k < 0.
std::vector<MultiIndex> enumerate_monomials(const WeightVector& a, long k);

/// log c_alpha^2 with c_alpha^2 = 2 pi^{n+1} prod(alpha_j!) / (n + |alpha|)!.
double log_monomial_norm_sq(int n, const MultiIndex& alpha);

/// c_alpha = ||z^alpha||_{L^2(S^{2n+1})}.
double monomial_norm(int n, const MultiIndex& alpha);

/// Orthonormal basis z^alpha / c_alpha of the degree-k Fourier component of the Hardy space.
class MonomialBasis {
 public:
  MonomialBasis(WeightVector weights, long k, std::vector<MultiIndex> exponents);

  const WeightVector& weights() const noexcept { return weights_; }
  long degree() const noexcept { return k_; }
  int n() const noexcept { return weights_.n(); }
  std::size_t size() const noexcept { return exponents_.size(); }
  const std::vector<MultiIndex>& exponents() const noexcept { return exponents_; }
  double log_norm_sq(std::size_t i) const { return log_norm_sq_[i]; }
  double norm(std::size_t i) const;

  /// (f_alpha(z))_alpha, with z^alpha evaluated in log-polar form.
  Eigen::VectorXcd evaluate(std::span<const cplx> z) const;
  Eigen::VectorXcd evaluate(const SpherePoint& x) const { return evaluate(x.coords()); }

  /// sum_alpha |f_alpha(z)|^2.
  double diagonal(std::span<const cplx> z) const;

  /// Sub-basis with the listed elements (ambient norms kept).
  MonomialBasis subset(const std::vector<std::size_t>& keep) const;

 private:
  WeightVector weights_;
  long k_;
  std::vector<MultiIndex> exponents_;
  std::vector<double> log_norm_sq_;
};

MonomialBasis build_basis(const WeightVector& a, long k);

/// max |G - I| over the Gram matrix of the basis in L^2(S^{2n+1}, d sigma).
double gram_check(const MonomialBasis& basis, const QuadratureSpec& quad);

/// Number of alpha >= 0 with <a, alpha> = k (coin-change count; 0 for k < 0).
std::uint64_t dim_fourier(const WeightVector& a, long k);

/// dim_fourier for every degree 0..k_max.
std::vector<std::uint64_t> dim_table(const WeightVector& a, long k_max);

struct AsymptoticsReport {
  std::vector<std::pair<long, std::uint64_t>> table;  // (kp, dim)
  int ell0 = 1;
  long p = 1;
  double limit_hat = 0.0;     // extrapolated lim dim(kp) / (kp)^n
  double fit_residual = 0.0;  // max abs residual of the extrapolation fit
  Estimate integral;          // int |det L| dV
  double model_rhs = 0.0;     // (ell0/2) pi^{-n-1} int |det L| dV
  double kappa_hat = 0.0;     // limit_hat / model_rhs
};

/// Fits dim(kp)/(kp)^n = L + c1/(kp) + c2/(kp)^2 over the top half of k = 1..k_max.
AsymptoticsReport dim_asymptotics(const ModelSpace& X, long k_max, const QuadratureSpec& quad);

/// Z_m acting by z_j -> e^{2 pi i w_j / m} z_j; invariant iff sum w_j alpha_j = 0 mod m.
struct CyclicConstraint {
  int m = 1;
  std::vector<int> w;
};

/// Auxiliary circle with integer weights b; invariant iff <b, alpha> = 0.
struct LinearWeightConstraint {
  std::vector<int> b;
};

using SubbasisConstraint = std::variant<CyclicConstraint, LinearWeightConstraint>;

bool is_invariant(const MultiIndex& alpha, const SubbasisConstraint& constraint);

MonomialBasis invariant_subbasis(const MonomialBasis& basis, const SubbasisConstraint& constraint);

/// max over a T^{0,1} frame and the basis of |Zbar f_alpha(x)|, by central differences
/// of the ambient polynomial. Zero up to FD error for CR functions.
double cr_equation_residual(const MonomialBasis& basis, const SpherePoint& x, double step = 1e-6);

}  // namespace szego
