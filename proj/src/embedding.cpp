#include "szego/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "szego/kernels.hpp"

namespace szego {

ProjectivePoint kodaira_map(const MonomialBasis& basis, const SpherePoint& x) {
  const Eigen::VectorXcd v = basis.evaluate(x);
  const double norm = v.norm();
  if (!(norm > 0.0)) {
    throw BasePointError("base point: every degree-" + std::to_string(basis.degree()) + " section vanishes at x");
  }
  ProjectivePoint p;
  p.homogeneous.resize(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) p.homogeneous[i] = v[i] / norm;
  return p;
}

double fs_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
  if (p.homogeneous.size() != q.homogeneous.size()) throw ConfigError("projective points of different dimension");
  cplx inner = 0.0;
  for (std::size_t i = 0; i < p.homogeneous.size(); ++i) inner += std::conj(p.homogeneous[i]) * q.homogeneous[i];
  // atan2 of the orthogonal and parallel parts stays accurate near zero distance.
  double orth = 0.0;
  for (std::size_t i = 0; i < p.homogeneous.size(); ++i) orth += std::norm(q.homogeneous[i] - inner * p.homogeneous[i]);
  return std::atan2(std::sqrt(orth), std::abs(inner));
}

std::vector<double> default_separation_bins() { return {0.05, 0.2, 0.5, 1.0, 1.5}; }

namespace {

struct SampledPair {
  SpherePoint x, y;
  std::size_t bin = 0;
};

SampledPair sample_pair(const ModelSpace& X, std::uint64_t seed, std::size_t index, const std::vector<double>& edges) {
  const std::size_t bins = edges.size() - 1;
  const std::size_t bin = index % bins;
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(0x5eed0000ULL + index)));
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    const auto x = random_sphere_point(X.n(), rng);
    const auto dir = random_sphere_point(X.n(), rng);
    const double s = edges[bin] + (2.0 * edges[bin + 1] - edges[bin]) * uni(rng);
    std::vector<cplx> yz(x.coords().begin(), x.coords().end());
    for (std::size_t j = 0; j < yz.size(); ++j) yz[j] += s * dir[j];
    const auto y = SpherePoint::normalized(yz);
    const double d = orbit_distance(X, x, y);
    if (d >= edges[bin] && d < edges[bin + 1]) return {x, y, bin};
  }
  throw NumericalError("could not sample a pair in orbit-distance bin " + std::to_string(bin));
}

}  // namespace

ScanReport injectivity_scan(const ModelSpace& X, long k, std::size_t n_pairs, std::uint64_t seed,
                            const std::vector<double>& bin_edges) {
  if (bin_edges.size() < 2) throw ConfigError("need at least one separation bin");
  ScanReport rep;
  rep.k = k;
  rep.pairs = n_pairs;
  for (std::size_t b = 0; b + 1 < bin_edges.size(); ++b) {
    rep.bins.push_back({bin_edges[b], bin_edges[b + 1], 0, std::numeric_limits<double>::infinity()});
  }
  const auto basis = build_basis(X.weights(), k);
  for (std::size_t i = 0; i < n_pairs; ++i) {
    const auto pair = sample_pair(X, seed, i, bin_edges);
    auto& bin = rep.bins[pair.bin];
    ++bin.pairs;
    try {
      const double d = fs_distance(kodaira_map(basis, pair.x), kodaira_map(basis, pair.y));
      bin.min_separation = std::min(bin.min_separation, d);
    } catch (const BasePointError&) {
      ++rep.base_point_failures;
    }
  }
  rep.pass = rep.base_point_failures == 0;
  for (auto& bin : rep.bins) {
    if (bin.pairs == 0) bin.min_separation = 0.0;
    else if (!(bin.min_separation > 0.0)) rep.pass = false;
  }
  return rep;
}

ImmersionReport immersion_check(const ModelSpace& X, long k, const SpherePoint& x, double step) {
  const auto strat = stratification(X);
  if (k % strat.p != 0) throw ConfigError("immersion_check needs k to be a multiple of p = " + std::to_string(strat.p));
  if (isotropy_order(X, x) != strat.ell0) throw ConfigError("immersion_check needs a regular point");
  const auto basis = build_basis(X.weights(), k);
  if (basis.size() < 2) throw ConfigError("Kodaira map needs at least two sections");
  const Eigen::VectorXcd f0 = basis.evaluate(x);
  if (!(f0.norm() > 0.0)) throw BasePointError("base point at x");
  Eigen::Index pivot = 0;
  f0.cwiseAbs().maxCoeff(&pivot);
  const Eigen::Index d = f0.size();

  auto chart = [&](const std::vector<cplx>& z) {
    const Eigen::VectorXcd f = basis.evaluate(z);
    Eigen::VectorXd w(2 * (d - 1));
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
      if (i == pivot) continue;
      const cplx q = f[i] / f[pivot];
      w[r] = q.real();
      w[d - 1 + r] = q.imag();
      ++r;
    }
    return w;
  };
  auto along = [&](const std::vector<cplx>& v) {
    auto moved = [&](double s) {
      std::vector<cplx> z(x.coords().begin(), x.coords().end());
      for (std::size_t j = 0; j < z.size(); ++j) z[j] += s * v[j];
      return SpherePoint::normalized(z);
    };
    const auto p = moved(step), m = moved(-step);
    return Eigen::VectorXd((chart({p.coords().begin(), p.coords().end()}) -
                            chart({m.coords().begin(), m.coords().end()})) /
                           (2.0 * step));
  };

  const auto frame = holomorphic_frame(x.coords());
  Eigen::MatrixXd J(2 * (d - 1), 2 * static_cast<Eigen::Index>(frame.size()));
  Eigen::Index col = 0;
  for (const auto& u : frame) {
    std::vector<cplx> iu(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) iu[j] = cplx(0.0, 1.0) * u[j];
    J.col(col++) = along(u);
    J.col(col++) = along(iu);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  ImmersionReport rep;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) rep.singular_values.push_back(svd.singularValues()[i]);
  rep.smallest = rep.singular_values.empty() ? 0.0 : rep.singular_values.back();
  if (static_cast<Eigen::Index>(rep.singular_values.size()) < J.cols()) rep.smallest = 0.0;
  rep.reeb_derivative = along(X.reeb(x.coords())).norm();
  rep.pass = rep.smallest > kRankTolerance;
  return rep;
}

SweepReport embedding_sweep(const ModelSpace& X, long K_max, std::size_t n_pairs, std::size_t n_points,
                            std::uint64_t seed) {
  const auto strat = stratification(X);
  std::vector<SpherePoint> points;
  std::mt19937_64 rng(splitmix64(seed ^ 0x1a3e5eedULL));
  while (points.size() < n_points) {
    auto x = random_sphere_point(X.n(), rng);
    if (isotropy_order(X, x) == strat.ell0) points.push_back(std::move(x));
  }
  SweepReport rep;
  for (long K = 1; K <= K_max; ++K) {
    SweepRow row;
    row.K = K;
    row.k = K * strat.p;
    row.scan = injectivity_scan(X, row.k, n_pairs, seed);
    row.min_immersion = std::numeric_limits<double>::infinity();
    if (build_basis(X.weights(), row.k).size() >= 2) {
      for (const auto& x : points) {
        try {
          row.min_immersion = std::min(row.min_immersion, immersion_check(X, row.k, x).smallest);
        } catch (const BasePointError&) {
          row.min_immersion = 0.0;
        }
        ++row.immersion_points;
      }
    } else {
      row.min_immersion = 0.0;
    }
    row.good = row.scan.pass && row.min_immersion > kRankTolerance;
    rep.rows.push_back(std::move(row));
  }
  // K* is the start of the longest good suffix on which every bin's separation is non-decreasing.
  for (std::size_t start = rep.rows.size(); start-- > 0;) {
    if (!rep.rows[start].good) break;
    if (start + 1 < rep.rows.size()) {
      bool monotone = true;
      for (std::size_t b = 0; b < rep.rows[start].scan.bins.size(); ++b) {
        if (rep.rows[start + 1].scan.bins[b].min_separation < rep.rows[start].scan.bins[b].min_separation) {
          monotone = false;
        }
      }
      if (!monotone) break;
    }
    rep.k_star = rep.rows[start].K;
  }
  rep.pass = rep.k_star > 0;
  return rep;
}

CoherentState::CoherentState(MonomialBasis basis, const SpherePoint& x0) : basis_(std::move(basis)), x0_(x0) {
  const Eigen::VectorXcd f = basis_.evaluate(x0_);
  const double diag = f.squaredNorm();
  if (!(diag > 0.0)) throw BasePointError("coherent state centered at a base point");
  peak_ = std::sqrt(diag);
  coef_ = f.conjugate() / peak_;
}

cplx CoherentState::operator()(std::span<const cplx> z) const {
  return basis_.evaluate(z).transpose() * coef_;
}

std::pair<SpherePoint, double> CoherentState::sup(std::uint64_t seed, std::size_t samples) const {
  SpherePoint best = x0_;
  double best_value = std::abs((*this)(x0_.coords()));
  std::mt19937_64 rng(splitmix64(seed));
  for (std::size_t i = 0; i < samples; ++i) {
    const auto z = random_sphere_point(basis_.n(), rng);
    const double v = std::abs((*this)(z.coords()));
    if (v > best_value) {
      best_value = v;
      best = z;
    }
  }
  double radius = 0.1;
  std::normal_distribution<double> gauss;
  for (int iter = 0; iter < 400 && radius > 1e-9; ++iter) {
    std::vector<cplx> z(best.coords().begin(), best.coords().end());
    for (auto& c : z) c += radius * cplx(gauss(rng), gauss(rng));
    const auto cand = SpherePoint::normalized(z);
    const double v = std::abs((*this)(cand.coords()));
    if (v > best_value) {
      best_value = v;
      best = cand;
    } else {
      radius *= 0.9;
    }
  }
  return {best, best_value};
}

CoherentState coherent_state(const MonomialBasis& basis, const SpherePoint& x0) { return CoherentState(basis, x0); }

}  // namespace szego
