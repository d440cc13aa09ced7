#pragma once

#include <vector>

#include "szego/core.hpp"
#include "szego/quadrature.hpp"

namespace szego {

/// Hermitian metric on HX used to turn the Levi form into eigenvalues and to
/// define dV_X. R is always unit length and orthogonal to HX.
///
///  - sphere_measure: S_a^{1/n} times the Euclidean metric on HX. Gives dV_X = d sigma,
///    so the monomial basis normalized on the round sphere is orthonormal in L^2(X).
///  - euclidean: Euclidean metric on HX (|d/dz_j|^2 = 1/2); dV_X = f d sigma.
///  - euclidean_unit_dz: Euclidean volume, but eigenvalues taken against |d/dz_j| = 1.
enum class MetricConvention { sphere_measure, euclidean, euclidean_unit_dz };

MetricConvention parse_metric_convention(const std::string& text);
std::string to_string(MetricConvention convention);

/// Weighted CR sphere S^{2n+1} with the circle action
/// e^{i theta} z = (e^{i a_0 theta} z_0, ..., e^{i a_n theta} z_n)
/// and contact form omega_0 = alpha / S_a, alpha = (i/2) sum (zbar dz - z dzbar).
class ModelSpace {
 public:
  ModelSpace(WeightVector weights, MetricConvention metric);

  const WeightVector& weights() const noexcept { return weights_; }
  MetricConvention metric() const noexcept { return metric_; }
  int n() const noexcept { return weights_.n(); }

  /// S_a(z) = sum a_j |z_j|^2.
  double contact_scaling(std::span<const cplx> z) const;

  /// e^{i theta} . z.
  std::vector<cplx> act(double theta, std::span<const cplx> z) const;
  SpherePoint act(double theta, const SpherePoint& x) const;

  /// Reeb field R = d/dtheta (e^{i theta} . z), as a vector in C^{n+1}.
  std::vector<cplx> reeb(std::span<const cplx> z) const;

  /// omega_0 evaluated on a real tangent vector v (given as a displacement in C^{n+1}).
  double contact_form(std::span<const cplx> z, std::span<const cplx> v) const;

  /// Conformal factor of the HX metric relative to the Euclidean one.
  double metric_factor(std::span<const cplx> z) const;

  /// Squared length of a unit coordinate vector d/dz_j in the T^{1,0} metric
  /// (before the conformal factor).
  double dz_norm_sq() const;

 private:
  WeightVector weights_;
  MetricConvention metric_;
};

ModelSpace make_sphere(const WeightVector& a, MetricConvention metric = MetricConvention::sphere_measure);

/// gcd of the weights on the support of x.
int isotropy_order(const ModelSpace& X, const SpherePoint& x);

struct Stratification {
  std::vector<int> ell_values;
  int ell0 = 1;
  long p = 1;
};

/// Isotropy orders realized on X: gcds of every nonempty coordinate support.
Stratification stratification(const ModelSpace& X);

struct LeviData {
  double f = 0.0;  // 1 / S_a(z)
  std::vector<double> levi_eigenvalues;
  double det_levi = 0.0;
  double vol_density = 0.0;  // dV_X / d sigma
};

/// Closed form for the model family.
LeviData levi_data(const ModelSpace& X, const SpherePoint& x);

/// Frame evaluation: d omega_0 from central differences of the coefficients of
/// omega_0, paired with an orthonormal frame of T^{1,0}X.
LeviData levi_data_frame(const ModelSpace& X, const SpherePoint& x, double step = 1e-5);

/// Orthonormal (Hermitian) basis of the complement of z in C^{n+1}: the T^{1,0}X directions.
std::vector<std::vector<cplx>> holomorphic_frame(std::span<const cplx> z);

struct ContactResiduals {
  double reeb_pairing = 0.0;   // |omega_0(R) + 1|
  double horizontal = 0.0;     // max |omega_0(W)| over a real frame of HX
  double reeb_interior = 0.0;  // max |d omega_0(R, V)| over a frame of TX
  double max() const;
};

ContactResiduals check_contact(const ModelSpace& X, const SpherePoint& x, double step = 1e-5);

/// dV_X / d sigma.
double volume_density(const ModelSpace& X, std::span<const cplx> z);

/// Density |det L_x| dV_X / d sigma.
double levi_volume_density(const ModelSpace& X, std::span<const cplx> z);

/// int_X |det L_x| dV_X.
Estimate geometric_integral(const ModelSpace& X, const QuadratureSpec& quad);

/// inf over theta of the Euclidean distance |x - e^{i theta} y|.
double orbit_distance(const ModelSpace& X, const SpherePoint& x, const SpherePoint& y);

/// Uniform random point on the sphere.
template <class Rng>
SpherePoint random_sphere_point(int n, Rng& rng);

}  // namespace szego

#include <random>

namespace szego {

template <class Rng>
SpherePoint random_sphere_point(int n, Rng& rng) {
  std::normal_distribution<double> gauss;
  std::vector<cplx> z(static_cast<std::size_t>(n) + 1);
  for (auto& c : z) c = {gauss(rng), gauss(rng)};
  return SpherePoint::normalized(std::move(z));
}

}  // namespace szego
