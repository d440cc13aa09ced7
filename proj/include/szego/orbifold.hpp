#pragma once

#include <functional>
#include <string>
#include <vector>

#include "szego/core.hpp"
#include "szego/quadrature.hpp"

namespace szego {

using ScalarField = std::function<double(std::span<const cplx>)>;

/// One chart of an atlas on a finite cyclic quotient S^{2n+1} / Z_m, lifted to
/// the sphere. The chart group acts by z_j -> e^{2 pi i w_j / order} z_j.
struct OrbifoldChart {
  std::string domain;
  int group_order = 1;
  std::vector<int> generator_weights;
  ScalarField partition;  // rho_i, lifted and invariant under the chart group
};

struct OrbifoldAtlas {
  int n = 1;
  std::vector<OrbifoldChart> charts;
};

struct OrbifoldIntegral {
  Estimate total;
  std::vector<Estimate> per_chart;
  double partition_defect = 0.0;  // max |sum rho_i - 1| over quadrature nodes
};

/// sum_i (1 / |G_{U_i}|) int rho_i F d sigma, each chart integrated on its own seeded
/// stream. Throws ConfigError when the partition of unity fails by more than 1e-10.
OrbifoldIntegral orbifold_integrate(const OrbifoldAtlas& atlas, const ScalarField& integrand,
                                    const QuadratureSpec& quad);

/// Two charts {z_j != 0} with the partition rho_j = |z_j|^2.
OrbifoldAtlas coordinate_atlas(int n, int m, const std::vector<int>& w);

/// `charts` group-averaged Gaussian bumps around seeded centers, normalized to a partition.
OrbifoldAtlas bump_atlas(int n, int m, const std::vector<int>& w, int charts, std::uint64_t seed);

/// Single chart with the trivial group.
OrbifoldAtlas trivial_atlas(int n);

}  // namespace szego
