#include "szego/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

namespace szego {

namespace {

void require_size(const std::vector<int>& b, std::size_t dim) {
  if (b.size() != dim) throw ConfigError("auxiliary weights b must have one entry per coordinate");
}

long pairing(const std::vector<int>& b, const MultiIndex& alpha) {
  long s = 0;
  for (std::size_t j = 0; j < alpha.size(); ++j) s += static_cast<long>(b[j]) * alpha[j];
  return s;
}

}  // namespace

double moment_map(const ModelSpace& X, const std::vector<int>& b, const SpherePoint& x) {
  require_size(b, x.size());
  double s = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) s += b[j] * std::norm(x[j]);
  return -s / X.contact_scaling(x.coords());
}

double moment_gradient_norm(const ModelSpace& X, const std::vector<int>& b, const SpherePoint& x, double step) {
  std::vector<std::vector<cplx>> dirs;
  for (const auto& u : holomorphic_frame(x.coords())) {
    std::vector<cplx> iu(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) iu[j] = cplx(0.0, 1.0) * u[j];
    dirs.push_back(u);
    dirs.push_back(std::move(iu));
  }
  dirs.push_back(X.reeb(x.coords()));
  double g2 = 0.0;
  for (const auto& v : dirs) {
    auto moved = [&](double s) {
      std::vector<cplx> z(x.coords().begin(), x.coords().end());
      for (std::size_t j = 0; j < z.size(); ++j) z[j] += s * v[j];
      return SpherePoint::normalized(z);
    };
    const double d = (moment_map(X, b, moved(step)) - moment_map(X, b, moved(-step))) / (2.0 * step);
    g2 += d * d;
  }
  return std::sqrt(g2);
}

MomentLevelSet classify_level_set(const std::vector<int>& b, std::size_t dim) {
  require_size(b, dim);
  const bool pos = std::any_of(b.begin(), b.end(), [](int v) { return v > 0; });
  const bool neg = std::any_of(b.begin(), b.end(), [](int v) { return v < 0; });
  const bool zero = std::any_of(b.begin(), b.end(), [](int v) { return v == 0; });
  return {zero || (pos && neg), zero};
}

std::vector<std::vector<double>> level_polytope_vertices(const std::vector<int>& b) {
  const std::size_t N = b.size();
  std::vector<std::vector<double>> verts;
  for (std::size_t i = 0; i < N; ++i) {
    if (b[i] == 0) {
      std::vector<double> t(N, 0.0);
      t[i] = 1.0;
      verts.push_back(std::move(t));
    }
    for (std::size_t j = i + 1; j < N; ++j) {
      if (static_cast<long>(b[i]) * b[j] < 0) {
        std::vector<double> t(N, 0.0);
        const double bi = std::abs(b[i]), bj = std::abs(b[j]);
        t[i] = bj / (bi + bj);
        t[j] = bi / (bi + bj);
        verts.push_back(std::move(t));
      }
    }
  }
  return verts;
}

OrbitVolume orbit_volume(const ModelSpace& X, const std::vector<int>& b, const SpherePoint& x) {
  if (std::abs(moment_map(X, b, x)) > 1e-9) throw ConfigError("point is not on mu^{-1}(0)");
  OrbitVolume out;
  int g = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (std::abs(x[j]) > kSupportThreshold && b[j] != 0) g = std::gcd(g, std::abs(b[j]));
  }
  if (g == 0) {
    out.fixed_point = true;
    out.isotropy = 0;
    return out;
  }
  out.isotropy = g;
  // xi_X lies in HX on the level set, so its length uses the HX metric.
  constexpr int nodes = 64;
  const double period = 2.0 * kPi / g;
  for (int i = 0; i < nodes; ++i) {
    const double phi = period * i / nodes;
    std::vector<cplx> z(x.size());
    double speed2 = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      z[j] = std::polar(1.0, b[j] * phi) * x[j];
      speed2 += static_cast<double>(b[j]) * b[j] * std::norm(z[j]);
    }
    out.length += std::sqrt(X.metric_factor(z) * speed2) * period / nodes;
  }
  return out;
}

double v_eff(const ModelSpace& X, const std::vector<int>& b, const SpherePoint& x) {
  return orbit_volume(X, b, x).length;
}

std::uint64_t invariant_dim(const WeightVector& a, const std::vector<int>& b, long k) {
  require_size(b, a.size());
  std::uint64_t count = 0;
  for (const auto& alpha : enumerate_monomials(a, k)) {
    if (pairing(b, alpha) == 0) ++count;
  }
  return count;
}

ReductionPair find_reduction(const WeightVector& ambient, const std::vector<int>& b, long k_check) {
  const auto level = classify_level_set(b, ambient.size());
  if (std::all_of(b.begin(), b.end(), [](int v) { return v == 0; })) {
    throw ConfigError("auxiliary action is trivial");
  }
  if (!level.nonempty) throw ConfigError("0 is not a regular value: the moment map never vanishes");

  const std::size_t N = ambient.size();
  std::vector<MultiIndex> invariant;
  MultiIndex alpha(N, 0);
  auto rec = [&](auto&& self, std::size_t j, int budget) -> void {
    if (j == N) {
      const int total = std::accumulate(alpha.begin(), alpha.end(), 0);
      if (total > 0 && pairing(b, alpha) == 0) invariant.push_back(alpha);
      return;
    }
    for (int c = 0; c <= budget; ++c) {
      alpha[j] = c;
      self(self, j + 1, budget - c);
    }
    alpha[j] = 0;
  };
  rec(rec, 0, 3);

  auto reducible = [&](const MultiIndex& m) {
    for (const auto& p : invariant) {
      if (p == m) continue;
      MultiIndex rest(N);
      bool ok = true;
      for (std::size_t j = 0; j < N; ++j) {
        rest[j] = m[j] - p[j];
        if (rest[j] < 0) ok = false;
      }
      if (ok && std::find(invariant.begin(), invariant.end(), rest) != invariant.end()) return true;
    }
    return false;
  };
  ReductionPair pair{ambient, b, {}, {}, level};
  for (const auto& m : invariant) {
    if (!reducible(m)) pair.generators.push_back(m);
  }
  auto degree = [&](const MultiIndex& m) {
    long d = 0;
    for (std::size_t j = 0; j < N; ++j) d += static_cast<long>(ambient[j]) * m[j];
    return d;
  };
  std::sort(pair.generators.begin(), pair.generators.end(), [&](const MultiIndex& l, const MultiIndex& r) {
    return degree(l) != degree(r) ? degree(l) < degree(r) : l > r;
  });
  if (pair.generators.size() + 1 != N) {
    throw UnsupportedError("unsupported reduction: found " + std::to_string(pair.generators.size()) +
                           " invariant generators, need " + std::to_string(N - 1) +
                           " for a reduced weighted sphere with n' >= 1");
  }
  Eigen::MatrixXd E(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(pair.generators.size()));
  for (std::size_t g = 0; g < pair.generators.size(); ++g) {
    for (std::size_t j = 0; j < N; ++j) E(j, g) = pair.generators[g][j];
  }
  if (Eigen::FullPivLU<Eigen::MatrixXd>(E).rank() != E.cols()) {
    throw UnsupportedError("unsupported reduction: invariant generators are dependent");
  }
  std::vector<int> degrees;
  for (const auto& g : pair.generators) degrees.push_back(static_cast<int>(degree(g)));
  if (degrees.size() < 2) throw UnsupportedError("unsupported reduction: reduced space has n' = 0");
  pair.reduced = WeightVector(degrees);
  const auto reduced_dims = dim_table(pair.reduced, k_check);
  for (long k = 0; k <= k_check; ++k) {
    if (invariant_dim(ambient, b, k) != reduced_dims[k]) {
      throw UnsupportedError("unsupported reduction: generator identification fails at degree " + std::to_string(k));
    }
  }
  return pair;
}

ComparisonReport reduction_compare(const ReductionPair& pair, long k_max) {
  if (k_max < 0) throw ConfigError("k_max must be nonnegative");
  ComparisonReport rep;
  const auto reduced = dim_table(pair.reduced, k_max);
  for (long k = 0; k <= k_max; ++k) {
    rep.rows.push_back({k, invariant_dim(pair.ambient, pair.b, k), reduced[k]});
  }
  rep.threshold = k_max + 1;
  for (long k = k_max; k >= 0 && rep.rows[k].invariant == rep.rows[k].reduced; --k) rep.threshold = k;
  rep.pass = rep.threshold <= k_max / 2;
  return rep;
}

namespace {

struct SigmaAssembly {
  Eigen::MatrixXcd matrix;      // <h_alpha, g_beta>
  Eigen::MatrixXcd gram;        // <g_beta, g_beta'>
  Eigen::VectorXd h_norm_sq;    // ||h_alpha||^2
};

// (2 pi / M) sum_l e^{2 pi i m l / M}
cplx phase_rule(long m, long M) {
  cplx s = 0.0;
  for (long l = 0; l < M; ++l) s += std::polar(1.0, 2.0 * kPi * static_cast<double>(m * l % M) / M);
  return s * (2.0 * kPi / M);
}

SigmaAssembly assemble_sigma(const ModelSpace& X, const ReductionPair& pair, long k,
                             const std::vector<MultiIndex>& inv, const std::vector<MultiIndex>& red_ambient,
                             const std::vector<double>& log_red_norm_sq, std::size_t nodes, long phases) {
  const auto verts = level_polytope_vertices(pair.b);
  const std::size_t N = pair.ambient.size();
  const auto& P0 = verts[0];
  const auto& P1 = verts[1];
  // delta(g) dt_0 dt_1 over the segment, with t_2 eliminated.
  const double grad = std::hypot(pair.b[0] - pair.b[2], pair.b[1] - pair.b[2]);
  const double len = std::hypot(P1[0] - P0[0], P1[1] - P0[1]);
  if (!(grad > 0.0)) throw UnsupportedError("degenerate level set");
  // dV_{X_G} = delta(sum b|z|^2) d sigma / pi, d sigma = 2^{-n} dt dphi.
  const double measure = len / grad / kPi / 4.0;

  const auto rule = gauss_legendre01(nodes);
  const auto ni = static_cast<Eigen::Index>(inv.size());
  const auto nr = static_cast<Eigen::Index>(red_ambient.size());
  SigmaAssembly out{Eigen::MatrixXcd::Zero(nr, ni), Eigen::MatrixXcd::Zero(nr, nr), Eigen::VectorXd::Zero(ni)};

  std::vector<double> log_inv_norm_sq;
  for (const auto& a : inv) log_inv_norm_sq.push_back(log_monomial_norm_sq(X.n(), a));

  auto phase_integral = [&](const MultiIndex& mu, const MultiIndex& nu) {
    cplx p = 1.0;
    for (std::size_t j = 0; j < N; ++j) p *= phase_rule(mu[j] - nu[j], phases);
    return p;
  };
  std::vector<std::vector<cplx>> phase_hg(nr, std::vector<cplx>(ni)), phase_gg(nr, std::vector<cplx>(nr));
  for (Eigen::Index r = 0; r < nr; ++r) {
    for (Eigen::Index c = 0; c < ni; ++c) phase_hg[r][c] = phase_integral(inv[c], red_ambient[r]);
    for (Eigen::Index c = 0; c < nr; ++c) phase_gg[r][c] = phase_integral(red_ambient[r], red_ambient[c]);
  }
  const cplx phase_zero = std::pow(phase_rule(0, phases), static_cast<double>(N));
  const double scale = std::pow(static_cast<double>(k), -0.25);

  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double u = rule.nodes[q];
    const double s = u * u * (3.0 - 2.0 * u);
    const double w = rule.weights[q] * 6.0 * u * (1.0 - u) * measure;
    std::vector<double> t(N), logt(N);
    std::vector<cplx> z(N);
    for (std::size_t j = 0; j < N; ++j) {
      t[j] = std::max(0.0, (1.0 - s) * P0[j] + s * P1[j]);
      logt[j] = std::log(t[j]);
      z[j] = std::sqrt(t[j]);
    }
    const auto x = SpherePoint::normalized(z);
    const auto orbit = orbit_volume(X, pair.b, x);
    const double F = std::sqrt(orbit.length * orbit.isotropy);

    // Weighted radial scaling onto the reduced sphere: sum lambda^{2 a'_i} |z^{gamma_i}|^2 = 1.
    std::vector<double> log_r;
    for (const auto& g : pair.generators) {
      double l = 0.0;
      for (std::size_t j = 0; j < N; ++j) l += g[j] == 0 ? 0.0 : g[j] * logt[j];
      log_r.push_back(l);
    }
    auto excess = [&](double log_lambda) {
      double sum = 0.0;
      for (std::size_t i = 0; i < log_r.size(); ++i) sum += std::exp(2.0 * pair.reduced[i] * log_lambda + log_r[i]);
      return sum - 1.0;
    };
    double lo = -60.0, hi = 60.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (excess(mid) > 0.0 ? hi : lo) = mid;
    }
    const double log_lambda = 0.5 * (lo + hi);

    auto log_radial = [&](const MultiIndex& mu, const MultiIndex& nu) {
      double l = 0.0;
      for (std::size_t j = 0; j < N; ++j) {
        const int e = mu[j] + nu[j];
        if (e > 0) l += 0.5 * e * logt[j];
      }
      return l;
    };
    for (Eigen::Index r = 0; r < nr; ++r) {
      for (Eigen::Index c = 0; c < ni; ++c) {
        const double l = log_radial(inv[c], red_ambient[r]) + k * log_lambda - 0.5 * log_inv_norm_sq[c] -
                         0.5 * log_red_norm_sq[r];
        out.matrix(r, c) += w * scale * F * std::exp(l) * phase_hg[r][c];
      }
      for (Eigen::Index c = 0; c < nr; ++c) {
        const double l = log_radial(red_ambient[r], red_ambient[c]) + 2.0 * k * log_lambda -
                         0.5 * log_red_norm_sq[r] - 0.5 * log_red_norm_sq[c];
        out.gram(r, c) += w * std::exp(l) * phase_gg[r][c];
      }
    }
    for (Eigen::Index c = 0; c < ni; ++c) {
      const double l = log_radial(inv[c], inv[c]) - log_inv_norm_sq[c];
      out.h_norm_sq[c] += w * scale * scale * F * F * std::exp(l) * phase_zero.real();
    }
  }
  return out;
}

std::vector<double> singular_values(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) out.push_back(svd.singularValues()[i]);
  return out;
}

}  // namespace

SigmaReport sigma_map(const ReductionPair& pair, long k, std::size_t radial_nodes) {
  if (k < 1) throw ConfigError("sigma_map needs k >= 1");
  if (pair.ambient.size() != 3) throw UnsupportedError("sigma_map supports S^5 ambient spheres only");
  if (level_polytope_vertices(pair.b).size() != 2) {
    throw UnsupportedError("sigma_map needs the level polytope to be a segment");
  }
  const auto X = make_sphere(pair.ambient);
  std::vector<MultiIndex> inv;
  for (const auto& a : enumerate_monomials(pair.ambient, k)) {
    if (pairing(pair.b, a) == 0) inv.push_back(a);
  }
  std::vector<MultiIndex> red_ambient;
  std::vector<double> log_red_norm_sq;
  for (const auto& beta : enumerate_monomials(pair.reduced, k)) {
    MultiIndex m(pair.ambient.size(), 0);
    for (std::size_t i = 0; i < beta.size(); ++i) {
      for (std::size_t j = 0; j < m.size(); ++j) m[j] += beta[i] * pair.generators[i][j];
    }
    red_ambient.push_back(std::move(m));
    log_red_norm_sq.push_back(log_monomial_norm_sq(pair.reduced.n(), beta));
  }
  const long phases = 2 * k + 3;
  const auto coarse = assemble_sigma(X, pair, k, inv, red_ambient, log_red_norm_sq, radial_nodes, phases);
  const auto fine = assemble_sigma(X, pair, k, inv, red_ambient, log_red_norm_sq, 2 * radial_nodes, 2 * phases);

  SigmaReport rep;
  rep.k = k;
  rep.rows = red_ambient.size();
  rep.cols = inv.size();
  rep.radial_nodes = radial_nodes;
  rep.singular_values = singular_values(coarse.matrix);
  rep.refined_singular_values = singular_values(fine.matrix);
  rep.smallest = rep.singular_values.empty() ? 0.0 : rep.singular_values.back();
  if (rep.rows < rep.cols) rep.smallest = 0.0;  // kernel is nontrivial
  for (std::size_t i = 0; i < rep.singular_values.size(); ++i) {
    const double a = rep.singular_values[i], b = rep.refined_singular_values[i];
    rep.stability = std::max(rep.stability, std::abs(a - b) / std::max(std::abs(b), 1e-300));
  }
  // Residual of projecting each image onto span{g_beta} in L^2(X_G).
  const Eigen::MatrixXcd gram_t = fine.gram.transpose();
  const auto solver = gram_t.fullPivLu();
  for (Eigen::Index c = 0; c < fine.matrix.cols(); ++c) {
    const Eigen::VectorXcd m = fine.matrix.col(c);
    const Eigen::VectorXcd coef = solver.solve(m);
    const double proj = std::real(coef.dot(m));  // sum conj(coef) m, real for Hermitian Gram
    const double res2 = std::max(0.0, fine.h_norm_sq[c] - proj);
    rep.projection_residual = std::max(rep.projection_residual, std::sqrt(res2 / fine.h_norm_sq[c]));
  }
  if (rep.stability > 1e-2) {
    throw NumericalError("sigma quadrature did not converge: relative change " + std::to_string(rep.stability));
  }
  return rep;
}

}  // namespace szego
