#pragma once

#include <vector>

#include "szego/core.hpp"
#include "szego/geometry.hpp"
#include "szego/hardy.hpp"

namespace szego {

/// mu_b(x) = omega_0(xi_X) = -(sum b_j |z_j|^2) / S_a(z) for the auxiliary circle
/// e^{i phi} z = (e^{i b_j phi} z_j).
double moment_map(const ModelSpace& X, const std::vector<int>& b, const SpherePoint& x);

/// Tangential gradient of mu_b at x (central differences along a real frame of TX).
double moment_gradient_norm(const ModelSpace& X, const std::vector<int>& b, const SpherePoint& x, double step = 1e-6);

struct MomentLevelSet {
  bool nonempty = false;           // some b_j <= 0 <= some b_i
  bool has_fixed_points = false;   // points of mu^{-1}(0) supported where b_j = 0
};

/// Throws ConfigError on a size mismatch.
MomentLevelSet classify_level_set(const std::vector<int>& b, std::size_t dim);

/// Random point of mu^{-1}(0) (uniform moduli on the level polytope, uniform phases).
template <class Rng>
SpherePoint random_level_point(const ModelSpace& X, const std::vector<int>& b, Rng& rng);

struct OrbitVolume {
  double length = 0.0;  // V_eff
  int isotropy = 1;     // |G_x|
  bool fixed_point = false;
};

/// Length of the G-orbit through x in the model metric. x must lie on mu^{-1}(0).
OrbitVolume orbit_volume(const ModelSpace& X, const std::vector<int>& b, const SpherePoint& x);
double v_eff(const ModelSpace& X, const std::vector<int>& b, const SpherePoint& x);

struct ReductionPair {
  WeightVector ambient;
  std::vector<int> b;
  std::vector<MultiIndex> generators;  // monomial generators of the invariant algebra
  WeightVector reduced;                // weighted degrees of the generators
  MomentLevelSet level_set;
};

/// Searches invariant monomial generators of degree <= 3 and identifies the reduced
/// weighted sphere. Throws ConfigError if 0 is not attained by mu_b, UnsupportedError
/// if the reduction does not land in the weighted-sphere family.
ReductionPair find_reduction(const WeightVector& ambient, const std::vector<int>& b, long k_check = 40);

/// Number of G-invariant monomials of weighted degree k.
std::uint64_t invariant_dim(const WeightVector& a, const std::vector<int>& b, long k);

struct ComparisonRow {
  long k = 0;
  std::uint64_t invariant = 0;
  std::uint64_t reduced = 0;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  long threshold = 0;  // every k >= threshold has equal dimensions
  bool pass = false;   // threshold <= k_max / 2
};

ComparisonReport reduction_compare(const ReductionPair& pair, long k_max);

struct SigmaReport {
  long k = 0;
  std::size_t rows = 0;  // reduced dimension
  std::size_t cols = 0;  // invariant dimension
  std::vector<double> singular_values;
  std::vector<double> refined_singular_values;  // same with doubled radial nodes and phase grid
  double smallest = 0.0;
  double stability = 0.0;            // max relative change under refinement
  double projection_residual = 0.0;  // max relative L^2 residual of the expansion
  std::size_t radial_nodes = 0;
};

/// Finite matrix of sigma_k: (Ker)^G_k -> Ker_{X_G, k}. Supports level sets whose
/// moment polytope slice is a segment (n = 2). Throws NumericalError if singular
/// values move by more than 1% under refinement.
SigmaReport sigma_map(const ReductionPair& pair, long k, std::size_t radial_nodes = 48);

}  // namespace szego

#include <random>

namespace szego {

std::vector<std::vector<double>> level_polytope_vertices(const std::vector<int>& b);

template <class Rng>
SpherePoint random_level_point(const ModelSpace& X, const std::vector<int>& b, Rng& rng) {
  const auto verts = level_polytope_vertices(b);
  if (verts.empty()) throw ConfigError("mu^{-1}(0) is empty");
  // Random convex combination of the vertices, then random phases.
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  std::vector<double> lam(verts.size());
  double total = 0.0;
  for (auto& l : lam) total += (l = expo(rng));
  std::vector<cplx> z(X.weights().size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    double t = 0.0;
    for (std::size_t v = 0; v < verts.size(); ++v) t += lam[v] / total * verts[v][j];
    z[j] = std::polar(std::sqrt(std::max(t, 0.0)), phase(rng));
  }
  return SpherePoint::normalized(z);
}

}  // namespace szego
