#include "szego/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

namespace szego {

KernelValue szego_eval(const MonomialBasis& basis, const SpherePoint& x, const SpherePoint& y) {
  const Eigen::VectorXcd fx = basis.evaluate(x);
  const Eigen::VectorXcd fy = basis.evaluate(y);
  return {fy.dot(fx), basis.degree(), x, y};
}

double reproducing_check(const ModelSpace& X, const MonomialBasis& basis, const SpherePoint& x,
                         const QuadratureSpec& quad) {
  if (basis.weights() != X.weights()) throw ConfigError("basis and model use different weights");
  const SphereRule rule(X.n(), quad);
  const Eigen::VectorXcd fx = basis.evaluate(x);
  const auto d = static_cast<Eigen::Index>(basis.size());
  constexpr std::size_t shard = 4096;
  const std::size_t shards = (rule.size() + shard - 1) / shard;
  std::vector<Eigen::VectorXcd> partial(shards, Eigen::VectorXcd::Zero(d));
  for_each_shard(rule.size(), shard, [&](std::size_t s, std::size_t begin, std::size_t end) {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(d);
    for (std::size_t i = begin; i < end; ++i) {
      const auto z = rule.point(i);
      const Eigen::VectorXcd fz = basis.evaluate(z);
      const cplx kernel = fz.dot(fx);  // Pi_k(x, z)
      const double dv = rule.weight(i) * volume_density(X, z);
      acc += (dv * kernel) * fz;
    }
    partial[s] = acc;
  });
  Eigen::VectorXcd total = Eigen::VectorXcd::Zero(d);
  for (const auto& p : partial) total += p;
  return d == 0 ? 0.0 : (total - fx).cwiseAbs().maxCoeff();
}

DiagonalSeries diagonal_series(const ModelSpace& X, const SpherePoint& x, const std::vector<long>& ks) {
  if (!std::is_sorted(ks.begin(), ks.end())) throw ConfigError("k list must be increasing");
  DiagonalSeries s{x, isotropy_order(X, x), {}};
  for (long k : ks) {
    const auto basis = build_basis(X.weights(), k);
    s.entries.emplace_back(k, basis.diagonal(x.coords()));
  }
  return s;
}

namespace {

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double max_rel_residual = 0.0;
  double r_squared = 0.0;
};

LinearFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto rows = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd A(rows, 2);
  Eigen::VectorXd y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = xs[i];
    y[i] = ys[i];
  }
  const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd pred = A * coef;
  LinearFit out{coef[0], coef[1], 0.0, 1.0};
  const double mean = y.mean();
  double ss_res = 0.0, ss_tot = 0.0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    out.max_rel_residual = std::max(out.max_rel_residual, std::abs(pred[i] - y[i]) / std::max(std::abs(y[i]), 1e-300));
    ss_res += (pred[i] - y[i]) * (pred[i] - y[i]);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  out.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return out;
}

struct PolyFit {
  std::vector<double> coef;  // c_0 + c_1 x + ... + c_d x^d
  double max_rel_residual = 0.0;
};

PolyFit fit_poly(const std::vector<double>& xs, const std::vector<double>& ys, int degree) {
  const auto rows = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd A(rows, degree + 1);
  Eigen::VectorXd y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    double p = 1.0;
    for (int d = 0; d <= degree; ++d, p *= xs[i]) A(i, d) = p;
    y[i] = ys[i];
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd pred = A * c;
  PolyFit out{{c.data(), c.data() + c.size()}, 0.0};
  for (Eigen::Index i = 0; i < rows; ++i) {
    out.max_rel_residual = std::max(out.max_rel_residual, std::abs(pred[i] - y[i]) / std::max(std::abs(y[i]), 1e-300));
  }
  return out;
}

// Counts alpha >= 0 supported on the given weights with <w, alpha> = k, for k <= k_max.
std::vector<std::uint64_t> support_counts(const std::vector<int>& w, long k_max) {
  std::vector<std::uint64_t> c(static_cast<std::size_t>(k_max) + 1, 0);
  c[0] = 1;
  for (int a : w) {
    for (long s = a; s <= k_max; ++s) c[s] += c[s - a];
  }
  return c;
}

}  // namespace

double FitResult::model(long k, int n) const {
  double s = 1.0, p = 1.0;
  for (double c : corrections) s += c * (p /= static_cast<double>(k));
  return b0_hat * std::pow(static_cast<double>(k), n) * s;
}

FitResult fit_leading(const DiagonalSeries& series, const LeviData& levi, int n) {
  std::vector<double> inv_k, ys, logk, logv;
  for (const auto& [k, v] : series.entries) {
    if (k <= 0 || k % series.stratum != 0 || !(v > 0.0)) continue;
    const double density = v / levi.vol_density;
    inv_k.push_back(1.0 / static_cast<double>(k));
    ys.push_back(density / std::pow(static_cast<double>(k), n));
    logk.push_back(std::log(static_cast<double>(k)));
    logv.push_back(std::log(density));
  }
  if (ys.size() < 6) throw NumericalError("fit_leading needs at least six admissible entries");
  const auto poly = fit_poly(inv_k, ys, n);
  FitResult r;
  r.used = ys.size();
  r.b0_hat = poly.coef[0];
  for (std::size_t j = 1; j < poly.coef.size(); ++j) r.corrections.push_back(poly.coef[j] / poly.coef[0]);
  r.correction = r.corrections.front();
  r.residual = poly.max_rel_residual;
  r.order_hat = fit_line(logk, logv).slope;
  r.b0_model = 0.5 * std::pow(kPi, -n - 1) * std::abs(levi.det_levi);
  r.multiplicity = series.stratum;
  r.kappa_hat = r.b0_hat / (r.multiplicity * r.b0_model);
  if (r.residual > 1e-2) {
    throw NumericalError("leading-order fit rejected: relative residual " + std::to_string(r.residual));
  }
  return r;
}

SelectionReport stratum_selection(const ModelSpace& X, const SpherePoint& x, long k_max) {
  const auto strat = stratification(X);
  SelectionReport rep;
  rep.ell = isotropy_order(X, x);
  rep.ell0 = strat.ell0;
  if (rep.ell == strat.ell0) throw ConfigError("not a singular point: isotropy equals the generic order");
  if (k_max < 20) throw ConfigError("stratum_selection needs k_max >= 20");
  const int n = X.n();

  std::vector<int> support;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (std::abs(x[j]) > kSupportThreshold) support.push_back(X.weights()[j]);
  }
  const auto counts = support_counts(support, k_max);
  const double vol = levi_data(X, x).vol_density;

  std::vector<double> inv_k, ys;
  std::vector<double> top;
  for (long k = 1; k <= k_max; ++k) {
    const auto basis = build_basis(X.weights(), k);
    const double v = basis.diagonal(x.coords());
    SelectionRow row{k, v, counts[k] == 0};
    rep.rows.push_back(row);
    if (row.predicted_zero) {
      ++rep.forbidden;
      rep.max_forbidden_value = std::max(rep.max_forbidden_value, std::abs(v));
      if (std::abs(v) > 1e-14) ++rep.forbidden_violations;
      continue;
    }
    if (v == 0.0) {
      ++rep.admissible_zeros;
      continue;
    }
    if (k % rep.ell != 0) continue;
    const double scaled = v / vol / std::pow(static_cast<double>(k), n);
    if (2 * k >= k_max) {
      inv_k.push_back(1.0 / static_cast<double>(k));
      ys.push_back(scaled);
    }
    if (10 * k >= 9 * k_max) top.push_back(scaled);
  }
  if (ys.size() > static_cast<std::size_t>(n) + 1) rep.stratum_limit = fit_poly(inv_k, ys, n).coef[0];
  if (!top.empty()) {
    const auto [lo, hi] = std::minmax_element(top.begin(), top.end());
    const double mean = std::accumulate(top.begin(), top.end(), 0.0) / static_cast<double>(top.size());
    rep.fluctuation = (*hi - *lo) / mean;
  }
  rep.generic_limit = strat.ell0 * 0.5 * std::pow(kPi, -n - 1) * levi_volume_density(X, x.coords()) / vol;
  rep.stratum_ratio = rep.stratum_limit / rep.generic_limit;

  // Nearby regular point: push every coordinate off zero.
  std::vector<cplx> near(x.coords().begin(), x.coords().end());
  for (auto& c : near) c += 0.3 / std::sqrt(static_cast<double>(near.size()));
  const auto xn = SpherePoint::normalized(near);
  std::vector<long> ks;
  for (long k = (k_max / 2 / strat.p) * strat.p; k <= k_max; k += strat.p) {
    if (k > 0) ks.push_back(k);
  }
  if (ks.size() >= 6) {
    try {
      const auto fit = fit_leading(diagonal_series(X, xn, ks), levi_data(X, xn), n);
      rep.generic_limit_nearby = fit.b0_hat;
    } catch (const NumericalError&) {
      rep.generic_limit_nearby = 0.0;
    }
  }
  return rep;
}

DecayFit offdiag_decay(const ModelSpace& X, const SpherePoint& x, const SpherePoint& y, const std::vector<long>& ks) {
  DecayFit fit;
  fit.orbit_distance = orbit_distance(X, x, y);
  if (fit.orbit_distance < kMinOrbitDistance) {
    throw NumericalError("ill-conditioned: orbit distance " + std::to_string(fit.orbit_distance) + " below " +
                         std::to_string(kMinOrbitDistance));
  }
  const int n = X.n();
  const double d2 = fit.orbit_distance * fit.orbit_distance;
  fit.sandwich_lo = d2 / kDecayConstant;
  fit.sandwich_hi = kDecayConstant * d2;

  std::vector<double> kk, ys;
  for (long k : ks) {
    const auto basis = build_basis(X.weights(), k);
    const double v = std::abs(szego_eval(basis, x, y).value);
    fit.samples.emplace_back(k, v);
    if (v > 0.0 && k > 0) {
      kk.push_back(static_cast<double>(k));
      ys.push_back(std::log(v / std::pow(static_cast<double>(k), n)));
    }
  }
  if (kk.empty()) {
    fit.infinite_rate = true;
    fit.rate = std::numeric_limits<double>::infinity();
    fit.r_squared = 1.0;
    fit.within_sandwich = false;
    return fit;
  }
  if (kk.size() < 3) throw NumericalError("decay fit needs at least three nonzero samples");
  const auto lin = fit_line(kk, ys);
  fit.log_c = lin.intercept;
  fit.rate = -lin.slope;
  fit.r_squared = lin.r_squared;
  fit.within_sandwich = fit.rate >= fit.sandwich_lo && fit.rate <= fit.sandwich_hi;
  return fit;
}

CyclicAction CyclicAction::diagonal(int m, const std::vector<int>& w) {
  if (m < 1) throw ConfigError("cyclic order must be positive");
  CyclicAction a;
  a.m = m;
  const auto N = static_cast<Eigen::Index>(w.size());
  a.generator = Eigen::MatrixXcd::Zero(N, N);
  for (Eigen::Index j = 0; j < N; ++j) a.generator(j, j) = std::polar(1.0, 2.0 * kPi * w[j] / m);
  return a;
}

std::optional<std::vector<int>> CyclicAction::diagonal_weights() const {
  const Eigen::Index N = generator.rows();
  std::vector<int> w(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = 0; j < N; ++j) {
      if (i != j && std::abs(generator(i, j)) > 1e-12) return std::nullopt;
    }
    const double turns = std::arg(generator(i, i)) * m / (2.0 * kPi);
    const long r = std::lround(turns);
    if (std::abs(turns - r) > 1e-9) return std::nullopt;
    w[i] = static_cast<int>(((r % m) + m) % m);
  }
  return w;
}

namespace {

void validate_action(const CyclicAction& action, const WeightVector& weights) {
  const auto N = static_cast<Eigen::Index>(weights.size());
  if (action.m < 1) throw ConfigError("cyclic order must be positive");
  const auto& g = action.generator;
  if (g.rows() != N || g.cols() != N) throw ConfigError("group generator has the wrong size");
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(N, N);
  if ((g.adjoint() * g - I).cwiseAbs().maxCoeff() > 1e-10) throw ConfigError("group generator is not unitary");
  Eigen::MatrixXcd power = I;
  for (int j = 0; j < action.m; ++j) power = power * g;
  if ((power - I).cwiseAbs().maxCoeff() > 1e-10) throw ConfigError("generator does not have order dividing m");
  for (double theta : {0.7, 1.3}) {
    Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(N, N);
    for (Eigen::Index j = 0; j < N; ++j) D(j, j) = std::polar(1.0, weights[j] * theta);
    if ((g * D - D * g).cwiseAbs().maxCoeff() > 1e-10) {
      throw ConfigError("non-commuting action: the group does not commute with the circle action");
    }
  }
}

SpherePoint act_on(const Eigen::MatrixXcd& g, const SpherePoint& x) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(x.size()));
  for (std::size_t j = 0; j < x.size(); ++j) v[j] = x[j];
  const Eigen::VectorXcd w = g * v;
  return SpherePoint::normalized({w.data(), w.data() + w.size()});
}

}  // namespace

AveragedKernel averaged_kernel(const MonomialBasis& basis, const CyclicAction& action, const SpherePoint& x,
                               const SpherePoint& y) {
  validate_action(action, basis.weights());
  const auto weights = action.diagonal_weights();
  if (!weights) throw UnsupportedError("invariant sub-basis requires a diagonal cyclic action");

  std::vector<SpherePoint> gx, gy;
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(action.generator.rows(), action.generator.cols());
  for (int j = 0; j < action.m; ++j) {
    gx.push_back(act_on(g, x));
    gy.push_back(act_on(g, y));
    g = g * action.generator;
  }
  std::vector<Eigen::VectorXcd> fx, fy;
  for (int j = 0; j < action.m; ++j) {
    fx.push_back(basis.evaluate(gx[j]));
    fy.push_back(basis.evaluate(gy[j]));
  }
  AveragedKernel out;
  for (int h = 0; h < action.m; ++h) {
    for (int j = 0; j < action.m; ++j) out.double_sum += fy[j].dot(fx[h]);
  }
  out.double_sum /= static_cast<double>(action.m);
  for (int j = 0; j < action.m; ++j) out.single_sum += fy[j].dot(fx[0]);

  const auto inv = invariant_subbasis(basis, CyclicConstraint{action.m, *weights});
  out.invariant = static_cast<double>(action.m) * szego_eval(inv, x, y).value;
  out.max_deviation = std::max({std::abs(out.double_sum - out.single_sum), std::abs(out.double_sum - out.invariant),
                                std::abs(out.single_sum - out.invariant)});
  return out;
}

Calibration calibrate(const ModelSpace& round, const std::vector<long>& ks) {
  for (int a : round.weights().values()) {
    if (a != 1) throw ConfigError("calibration requires the round sphere (all weights 1)");
  }
  std::vector<cplx> z(round.weights().size(), cplx(0.0));
  z[0] = 1.0;
  const SpherePoint x(z);
  const auto fit = fit_leading(diagonal_series(round, x, ks), levi_data(round, x), round.n());
  Calibration c{fit.b0_hat / fit.b0_model, fit.b0_hat, fit.b0_model};
  if (std::abs(c.kappa - std::round(4.0 * c.kappa) / 4.0) > 0.02) {
    throw NumericalError("calibration failure: kappa = " + std::to_string(c.kappa) + " is not a simple rational");
  }
  return c;
}

Calibration calibrate(const ModelSpace& round) {
  std::vector<long> ks;
  for (long k = 50; k <= 200; k += 10) ks.push_back(k);
  return calibrate(round, ks);
}

}  // namespace szego
