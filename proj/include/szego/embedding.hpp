#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "szego/core.hpp"
#include "szego/geometry.hpp"
#include "szego/hardy.hpp"

namespace szego {

/// Raised when every section of the degree vanishes at the point.
class BasePointError : public NumericalError {
 public:
  explicit BasePointError(const std::string& what) : NumericalError(what) {}
};

/// Unit-norm representative of [f_1(x), ..., f_d(x)].
struct ProjectivePoint {
  std::vector<cplx> homogeneous;
};

ProjectivePoint kodaira_map(const MonomialBasis& basis, const SpherePoint& x);

/// Fubini-Study distance arccos |<p, q>| in [0, pi/2].
double fs_distance(const ProjectivePoint& p, const ProjectivePoint& q);

struct SeparationBin {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t pairs = 0;
  double min_separation = 0.0;
};

struct ScanReport {
  long k = 0;
  std::size_t pairs = 0;
  std::size_t base_point_failures = 0;
  std::vector<SeparationBin> bins;
  bool pass = false;  // no base points and positive separation in every populated bin
};

/// Orbit-distance bin edges used by the stratified pair sampler.
std::vector<double> default_separation_bins();

/// Samples n_pairs pairs on distinct orbits, stratified over orbit-distance bins
/// (pair i depends only on seed and i), and records the minimum FS separation per bin.
ScanReport injectivity_scan(const ModelSpace& X, long k, std::size_t n_pairs, std::uint64_t seed,
                            const std::vector<double>& bin_edges = default_separation_bins());

struct ImmersionReport {
  std::vector<double> singular_values;  // of the chart Jacobian along HX
  double smallest = 0.0;
  double reeb_derivative = 0.0;  // chart derivative along R; zero up to FD error
  bool pass = false;
};

inline constexpr double kRankTolerance = 1e-6;

/// Jacobian of an affine chart of Phi_k along a real frame of HX at a regular point.
ImmersionReport immersion_check(const ModelSpace& X, long k, const SpherePoint& x, double step = 1e-6);

struct SweepRow {
  long K = 0;
  long k = 0;
  ScanReport scan;
  double min_immersion = 0.0;
  std::size_t immersion_points = 0;
  bool good = false;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  long k_star = -1;  // smallest K from which every row is good and separations are non-decreasing
  bool pass = false;
};

/// Sweeps k = K p for K = 1..K_max with common pairs and regular points.
SweepReport embedding_sweep(const ModelSpace& X, long K_max, std::size_t n_pairs, std::size_t n_points,
                            std::uint64_t seed);

/// Normalized kernel column u = Pi_k(., x0) / sqrt(Pi_k(x0, x0)).
class CoherentState {
 public:
  CoherentState(MonomialBasis basis, const SpherePoint& x0);

  cplx operator()(std::span<const cplx> z) const;
  const Eigen::VectorXcd& coefficients() const noexcept { return coef_; }
  double peak_value() const noexcept { return peak_; }

  /// Largest |u| found by sampling plus local ascent, and where.
  std::pair<SpherePoint, double> sup(std::uint64_t seed, std::size_t samples = 2000) const;

 private:
  MonomialBasis basis_;
  SpherePoint x0_;
  Eigen::VectorXcd coef_;
  double peak_ = 0.0;
};

CoherentState coherent_state(const MonomialBasis& basis, const SpherePoint& x0);

}  // namespace szego
