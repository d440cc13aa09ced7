#include "szego/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

namespace szego {

std::vector<MultiIndex> enumerate_monomials(const WeightVector& a, long k) {
  std::vector<MultiIndex> out;
  if (k < 0) return out;
  const std::size_t N = a.size();
  MultiIndex alpha(N, 0);
  // Depth-first over coordinates in increasing order yields lexicographic output.
  auto rec = [&](auto&& self, std::size_t j, long rem) -> void {
    if (j + 1 == N) {
      if (rem % a[j] == 0) {
        alpha[j] = static_cast<int>(rem / a[j]);
        out.push_back(alpha);
      }
      return;
    }
    for (long c = 0; c * a[j] <= rem; ++c) {
      alpha[j] = static_cast<int>(c);
      self(self, j + 1, rem - c * a[j]);
    }
    alpha[j] = 0;
  };
  rec(rec, 0, k);
  return out;
}

double log_monomial_norm_sq(int n, const MultiIndex& alpha) {
  long total = 0;
  double s = std::log(2.0) + (n + 1) * std::log(kPi);
  for (int aj : alpha) {
    if (aj < 0) throw ConfigError("multi-index entries must be nonnegative");
    s += std::lgamma(aj + 1.0);
    total += aj;
  }
  return s - std::lgamma(static_cast<double>(n + total) + 1.0);
}

double monomial_norm(int n, const MultiIndex& alpha) { return std::exp(0.5 * log_monomial_norm_sq(n, alpha)); }

MonomialBasis::MonomialBasis(WeightVector weights, long k, std::vector<MultiIndex> exponents)
    : weights_(std::move(weights)), k_(k), exponents_(std::move(exponents)) {
  log_norm_sq_.reserve(exponents_.size());
  for (const auto& alpha : exponents_) {
    if (alpha.size() != weights_.size()) throw ConfigError("exponent length does not match the weights");
    log_norm_sq_.push_back(log_monomial_norm_sq(n(), alpha));
  }
}

double MonomialBasis::norm(std::size_t i) const { return std::exp(0.5 * log_norm_sq_[i]); }

Eigen::VectorXcd MonomialBasis::evaluate(std::span<const cplx> z) const {
  const std::size_t N = weights_.size();
  std::vector<double> logmod(N), arg(N);
  for (std::size_t j = 0; j < N; ++j) {
    logmod[j] = std::log(std::abs(z[j]));
    arg[j] = std::arg(z[j]);
  }
  Eigen::VectorXcd out(static_cast<Eigen::Index>(size()));
  for (std::size_t i = 0; i < size(); ++i) {
    const auto& alpha = exponents_[i];
    double lm = -0.5 * log_norm_sq_[i];
    double ph = 0.0;
    bool vanishes = false;
    for (std::size_t j = 0; j < N; ++j) {
      if (alpha[j] == 0) continue;
      if (z[j] == cplx(0.0)) {
        vanishes = true;
        break;
      }
      lm += alpha[j] * logmod[j];
      ph += alpha[j] * arg[j];
    }
    out[static_cast<Eigen::Index>(i)] = vanishes ? cplx(0.0) : std::polar(std::exp(lm), ph);
  }
  return out;
}

double MonomialBasis::diagonal(std::span<const cplx> z) const {
  const std::size_t N = weights_.size();
  std::vector<double> logmod(N);
  for (std::size_t j = 0; j < N; ++j) logmod[j] = std::log(std::norm(z[j]));
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    const auto& alpha = exponents_[i];
    double l = -log_norm_sq_[i];
    bool vanishes = false;
    for (std::size_t j = 0; j < N; ++j) {
      if (alpha[j] == 0) continue;
      if (z[j] == cplx(0.0)) {
        vanishes = true;
        break;
      }
      l += alpha[j] * logmod[j];
    }
    if (!vanishes) s += std::exp(l);
  }
  return s;
}

MonomialBasis MonomialBasis::subset(const std::vector<std::size_t>& keep) const {
  std::vector<MultiIndex> ex;
  ex.reserve(keep.size());
  for (auto i : keep) ex.push_back(exponents_.at(i));
  return MonomialBasis(weights_, k_, std::move(ex));
}

MonomialBasis build_basis(const WeightVector& a, long k) {
  if (k < 0) throw ConfigError("Fourier degree must be nonnegative");
  return MonomialBasis(a, k, enumerate_monomials(a, k));
}

double gram_check(const MonomialBasis& basis, const QuadratureSpec& quad) {
  const SphereRule rule(basis.n(), quad);
  const auto d = static_cast<Eigen::Index>(basis.size());
  constexpr std::size_t shard = 4096;
  const std::size_t shards = (rule.size() + shard - 1) / shard;
  std::vector<Eigen::MatrixXcd> partial(shards, Eigen::MatrixXcd::Zero(d, d));
  for_each_shard(rule.size(), shard, [&](std::size_t s, std::size_t begin, std::size_t end) {
    Eigen::MatrixXcd E(static_cast<Eigen::Index>(end - begin), d);
    for (std::size_t i = begin; i < end; ++i) {
      E.row(static_cast<Eigen::Index>(i - begin)) = basis.evaluate(rule.point(i)).transpose() * std::sqrt(rule.weight(i));
    }
    partial[s] = E.transpose() * E.conjugate();
  });
  Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& p : partial) G += p;
  return (G - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
}

std::vector<std::uint64_t> dim_table(const WeightVector& a, long k_max) {
  if (k_max < 0) return {};
  std::vector<std::uint64_t> c(static_cast<std::size_t>(k_max) + 1, 0);
  c[0] = 1;
  for (int w : a.values()) {
    for (long s = w; s <= k_max; ++s) c[s] += c[s - w];
  }
  return c;
}

std::uint64_t dim_fourier(const WeightVector& a, long k) {
  if (k < 0) return 0;
  return dim_table(a, k).back();
}

AsymptoticsReport dim_asymptotics(const ModelSpace& X, long k_max, const QuadratureSpec& quad) {
  if (k_max < 6) throw ConfigError("dim_asymptotics needs k_max >= 6");
  const auto strat = stratification(X);
  const int n = X.n();
  AsymptoticsReport rep;
  rep.ell0 = strat.ell0;
  rep.p = strat.p;
  const auto dims = dim_table(X.weights(), k_max * strat.p);
  bool any = false;
  for (long k = 1; k <= k_max; ++k) {
    rep.table.emplace_back(k * strat.p, dims[k * strat.p]);
    any = any || dims[k * strat.p] > 0;
  }
  if (!any) throw NumericalError("degenerate dimension table: every dimension is zero");

  const long first = k_max / 2;
  const auto rows = static_cast<Eigen::Index>(k_max - first + 1);
  Eigen::MatrixXd A(rows, 3);
  Eigen::VectorXd y(rows);
  for (long k = first; k <= k_max; ++k) {
    const double m = static_cast<double>(k * strat.p);
    const auto r = static_cast<Eigen::Index>(k - first);
    A(r, 0) = 1.0;
    A(r, 1) = 1.0 / m;
    A(r, 2) = 1.0 / (m * m);
    y[r] = static_cast<double>(dims[k * strat.p]) / std::pow(m, n);
  }
  const Eigen::Vector3d coef = A.colPivHouseholderQr().solve(y);
  rep.limit_hat = coef[0];
  rep.fit_residual = (A * coef - y).cwiseAbs().maxCoeff();
  rep.integral = geometric_integral(X, quad);
  rep.model_rhs = 0.5 * strat.ell0 * std::pow(kPi, -n - 1) * rep.integral.value;
  rep.kappa_hat = rep.limit_hat / rep.model_rhs;
  return rep;
}

bool is_invariant(const MultiIndex& alpha, const SubbasisConstraint& constraint) {
  if (const auto* cyc = std::get_if<CyclicConstraint>(&constraint)) {
    if (cyc->w.size() != alpha.size()) throw ConfigError("cyclic action weights do not match the dimension");
    if (cyc->m < 1) throw ConfigError("cyclic order must be positive");
    long s = 0;
    for (std::size_t j = 0; j < alpha.size(); ++j) s += static_cast<long>(cyc->w[j]) * alpha[j];
    return ((s % cyc->m) + cyc->m) % cyc->m == 0;
  }
  const auto& lin = std::get<LinearWeightConstraint>(constraint);
  if (lin.b.size() != alpha.size()) throw ConfigError("auxiliary weights do not match the dimension");
  long s = 0;
  for (std::size_t j = 0; j < alpha.size(); ++j) s += static_cast<long>(lin.b[j]) * alpha[j];
  return s == 0;
}

MonomialBasis invariant_subbasis(const MonomialBasis& basis, const SubbasisConstraint& constraint) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (is_invariant(basis.exponents()[i], constraint)) keep.push_back(i);
  }
  return basis.subset(keep);
}

double cr_equation_residual(const MonomialBasis& basis, const SpherePoint& x, double step) {
  const auto frame = holomorphic_frame(x.coords());
  const std::size_t N = x.size();
  std::vector<Eigen::VectorXcd> dzbar(N);
  for (std::size_t j = 0; j < N; ++j) {
    auto shifted = [&](cplx delta) {
      std::vector<cplx> z(x.coords().begin(), x.coords().end());
      z[j] += delta;
      return basis.evaluate(z);
    };
    const Eigen::VectorXcd dx = (shifted(step) - shifted(-step)) / (2.0 * step);
    const Eigen::VectorXcd dy = (shifted(cplx(0.0, step)) - shifted(cplx(0.0, -step))) / (2.0 * step);
    dzbar[j] = 0.5 * (dx + cplx(0.0, 1.0) * dy);
  }
  double worst = 0.0;
  for (const auto& u : frame) {
    Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t j = 0; j < N; ++j) acc += std::conj(u[j]) * dzbar[j];
    if (acc.size() > 0) worst = std::max(worst, acc.cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace szego
