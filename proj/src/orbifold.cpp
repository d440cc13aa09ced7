#include "szego/orbifold.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "szego/geometry.hpp"

namespace szego {

namespace {

void validate_action(int n, int m, const std::vector<int>& w) {
  if (m < 1) throw ConfigError("group order must be positive");
  if (w.size() != static_cast<std::size_t>(n) + 1) throw ConfigError("action weights must have n+1 entries");
}

}  // namespace

OrbifoldIntegral orbifold_integrate(const OrbifoldAtlas& atlas, const ScalarField& integrand,
                                    const QuadratureSpec& quad) {
  if (atlas.charts.empty()) throw ConfigError("atlas has no charts");
  OrbifoldIntegral out;
  double var = 0.0;
  for (std::size_t i = 0; i < atlas.charts.size(); ++i) {
    const auto& chart = atlas.charts[i];
    if (chart.group_order < 1) throw ConfigError("chart group order must be positive");
    QuadratureSpec spec = quad;
    spec.seed = splitmix64(quad.seed ^ splitmix64(0x6f72626966ULL + i));
    const SphereRule rule(atlas.n, spec);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double sum = 0.0;
      for (const auto& c : atlas.charts) {
        const double r = c.partition(rule.point(q));
        if (r < -1e-12) throw ConfigError("atlas error: negative partition function");
        sum += r;
      }
      out.partition_defect = std::max(out.partition_defect, std::abs(sum - 1.0));
    }
    if (out.partition_defect > 1e-10) {
      throw ConfigError("atlas error: partition of unity deviates from 1 by " + std::to_string(out.partition_defect));
    }
    const double inv = 1.0 / chart.group_order;
    auto est = rule.integrate([&](std::span<const cplx> z) { return inv * chart.partition(z) * integrand(z); });
    out.per_chart.push_back(est);
    out.total.value += est.value;
    var += est.std_error * est.std_error;
  }
  out.total.std_error = std::sqrt(var);
  return out;
}

OrbifoldAtlas coordinate_atlas(int n, int m, const std::vector<int>& w) {
  validate_action(n, m, w);
  OrbifoldAtlas atlas{n, {}};
  for (int j = 0; j <= n; ++j) {
    atlas.charts.push_back({"z_" + std::to_string(j) + " != 0", m, w,
                            [j](std::span<const cplx> z) { return std::norm(z[j]); }});
  }
  return atlas;
}

OrbifoldAtlas bump_atlas(int n, int m, const std::vector<int>& w, int charts, std::uint64_t seed) {
  validate_action(n, m, w);
  if (charts < 1) throw ConfigError("bump atlas needs at least one chart");
  std::mt19937_64 rng(seed);
  auto centers = std::make_shared<std::vector<std::vector<cplx>>>();
  for (int i = 0; i < charts; ++i) {
    const auto c = random_sphere_point(n, rng);
    centers->emplace_back(c.coords().begin(), c.coords().end());
  }
  auto bump = [centers, m, w](std::size_t i, std::span<const cplx> z) {
    // Averaged over the group so the bump descends to the quotient.
    double s = 0.0;
    for (int g = 0; g < m; ++g) {
      double d2 = 0.0;
      for (std::size_t j = 0; j < z.size(); ++j) {
        d2 += std::norm(std::polar(1.0, 2.0 * kPi * w[j] * g / m) * z[j] - (*centers)[i][j]);
      }
      s += std::exp(-2.0 * d2);
    }
    return s;
  };
  OrbifoldAtlas atlas{n, {}};
  for (int i = 0; i < charts; ++i) {
    atlas.charts.push_back({"bump " + std::to_string(i), m, w, [bump, i, charts](std::span<const cplx> z) {
                              double total = 0.0;
                              for (int c = 0; c < charts; ++c) total += bump(static_cast<std::size_t>(c), z);
                              return bump(static_cast<std::size_t>(i), z) / total;
                            }});
  }
  return atlas;
}

OrbifoldAtlas trivial_atlas(int n) {
  OrbifoldAtlas atlas{n, {}};
  atlas.charts.push_back({"S^{2n+1}", 1, std::vector<int>(static_cast<std::size_t>(n) + 1, 0),
                          [](std::span<const cplx>) { return 1.0; }});
  return atlas;
}

}  // namespace szego
