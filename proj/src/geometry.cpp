#include "szego/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

namespace szego {

MetricConvention parse_metric_convention(const std::string& text) {
  if (text == "sphere_measure") return MetricConvention::sphere_measure;
  if (text == "euclidean") return MetricConvention::euclidean;
  if (text == "euclidean_unit_dz") return MetricConvention::euclidean_unit_dz;
  throw ConfigError("unknown metric convention '" + text + "'");
}

std::string to_string(MetricConvention convention) {
  switch (convention) {
    case MetricConvention::sphere_measure: return "sphere_measure";
    case MetricConvention::euclidean: return "euclidean";
    case MetricConvention::euclidean_unit_dz: return "euclidean_unit_dz";
  }
  return "?";
}

ModelSpace::ModelSpace(WeightVector weights, MetricConvention metric)
    : weights_(std::move(weights)), metric_(metric) {}

double ModelSpace::contact_scaling(std::span<const cplx> z) const {
  double s = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) s += weights_[j] * std::norm(z[j]);
  return s;
}

std::vector<cplx> ModelSpace::act(double theta, std::span<const cplx> z) const {
  std::vector<cplx> out(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) out[j] = std::polar(1.0, weights_[j] * theta) * z[j];
  return out;
}

SpherePoint ModelSpace::act(double theta, const SpherePoint& x) const {
  return SpherePoint::normalized(act(theta, x.coords()));
}

std::vector<cplx> ModelSpace::reeb(std::span<const cplx> z) const {
  std::vector<cplx> r(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) r[j] = cplx(0.0, weights_[j]) * z[j];
  return r;
}

double ModelSpace::contact_form(std::span<const cplx> z, std::span<const cplx> v) const {
  // alpha = sum (y_j dx_j - x_j dy_j)
  double a = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    a += z[j].imag() * v[j].real() - z[j].real() * v[j].imag();
  }
  return a / contact_scaling(z);
}

double ModelSpace::metric_factor(std::span<const cplx> z) const {
  if (metric_ == MetricConvention::sphere_measure) return std::pow(contact_scaling(z), 1.0 / n());
  return 1.0;
}

double ModelSpace::dz_norm_sq() const {
  return metric_ == MetricConvention::euclidean_unit_dz ? 1.0 : 0.5;
}

ModelSpace make_sphere(const WeightVector& a, MetricConvention metric) { return ModelSpace(a, metric); }

int isotropy_order(const ModelSpace& X, const SpherePoint& x) {
  if (x.size() != X.weights().size()) throw ConfigError("point dimension does not match the weights");
  int g = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (std::abs(x[j]) > kSupportThreshold) g = std::gcd(g, X.weights()[j]);
  }
  if (g == 0) throw ConfigError("invalid point: every coordinate is below the support threshold");
  return g;
}

Stratification stratification(const ModelSpace& X) {
  std::set<int> gcds;
  for (int a : X.weights().values()) {
    std::set<int> next = gcds;
    next.insert(a);
    for (int g : gcds) next.insert(std::gcd(g, a));
    gcds = std::move(next);
  }
  Stratification s;
  s.ell_values.assign(gcds.begin(), gcds.end());
  s.ell0 = s.ell_values.front();
  s.p = 1;
  for (int l : s.ell_values) s.p = std::lcm(s.p, static_cast<long>(l));
  return s;
}

namespace {

void require_on_model(const ModelSpace& X, const SpherePoint& x) {
  if (x.size() != X.weights().size()) throw ConfigError("point dimension does not match the weights");
}

// Coefficients of omega_0 = sum c_i dx_i in real coordinates (x_0..x_n, y_0..y_n),
// using the natural extension off the sphere.
Eigen::VectorXd contact_coefficients(const ModelSpace& X, const Eigen::VectorXd& r) {
  const auto N = r.size() / 2;
  double s = 0.0;
  for (Eigen::Index j = 0; j < N; ++j) s += X.weights()[j] * (r[j] * r[j] + r[N + j] * r[N + j]);
  Eigen::VectorXd c(r.size());
  for (Eigen::Index j = 0; j < N; ++j) {
    c[j] = r[N + j] / s;
    c[N + j] = -r[j] / s;
  }
  return c;
}

// Matrix of d omega_0: d omega_0(U, V) = U^T Omega V.
Eigen::MatrixXd contact_differential(const ModelSpace& X, std::span<const cplx> z, double h) {
  const auto N = static_cast<Eigen::Index>(z.size());
  Eigen::VectorXd r(2 * N);
  for (Eigen::Index j = 0; j < N; ++j) {
    r[j] = z[j].real();
    r[N + j] = z[j].imag();
  }
  Eigen::MatrixXd J(2 * N, 2 * N);  // J(i, j) = d_i c_j
  for (Eigen::Index i = 0; i < 2 * N; ++i) {
    Eigen::VectorXd plus = r, minus = r;
    plus[i] += h;
    minus[i] -= h;
    J.row(i) = (contact_coefficients(X, plus) - contact_coefficients(X, minus)).transpose() / (2.0 * h);
  }
  return J - J.transpose();
}

Eigen::VectorXd real_components(std::span<const cplx> v) {
  const auto N = static_cast<Eigen::Index>(v.size());
  Eigen::VectorXd out(2 * N);
  for (Eigen::Index j = 0; j < N; ++j) {
    out[j] = v[j].real();
    out[N + j] = v[j].imag();
  }
  return out;
}

}  // namespace

std::vector<std::vector<cplx>> holomorphic_frame(std::span<const cplx> z) {
  const auto N = static_cast<Eigen::Index>(z.size());
  Eigen::VectorXcd zv(N);
  for (Eigen::Index j = 0; j < N; ++j) zv[j] = z[j];
  // Householder QR of z gives a unitary whose trailing columns span z^perp.
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(zv);
  Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(N, N);
  std::vector<std::vector<cplx>> frame;
  for (Eigen::Index c = 1; c < N; ++c) {
    std::vector<cplx> u(N);
    for (Eigen::Index j = 0; j < N; ++j) u[j] = Q(j, c);
    frame.push_back(std::move(u));
  }
  return frame;
}

LeviData levi_data(const ModelSpace& X, const SpherePoint& x) {
  require_on_model(X, x);
  const int n = X.n();
  LeviData d;
  d.f = 1.0 / X.contact_scaling(x.coords());
  const double c = X.metric_factor(x.coords());
  const double mu = 0.5 * d.f / (X.dz_norm_sq() * c);
  d.levi_eigenvalues.assign(n, mu);
  d.det_levi = std::pow(mu, n);
  d.vol_density = volume_density(X, x.coords());
  return d;
}

double volume_density(const ModelSpace& X, std::span<const cplx> z) {
  return std::pow(X.metric_factor(z), X.n()) / X.contact_scaling(z);
}

LeviData levi_data_frame(const ModelSpace& X, const SpherePoint& x, double step) {
  require_on_model(X, x);
  const int n = X.n();
  const auto N = static_cast<Eigen::Index>(x.size());
  const Eigen::MatrixXd omega = contact_differential(X, x.coords(), step);
  const auto frame = holomorphic_frame(x.coords());

  // W = sum u_j d/dz_j has real components (u/2, -i u/2); conj(W) has (ubar/2, i ubar/2).
  auto holo = [&](const std::vector<cplx>& u) {
    Eigen::VectorXcd w(2 * N);
    for (Eigen::Index j = 0; j < N; ++j) {
      w[j] = 0.5 * u[j];
      w[N + j] = cplx(0.0, -0.5) * u[j];
    }
    return w;
  };
  Eigen::MatrixXcd L(n, n);
  for (int a = 0; a < n; ++a) {
    const Eigen::VectorXcd wa = holo(frame[a]);
    for (int b = 0; b < n; ++b) {
      const Eigen::VectorXcd wb_bar = holo(frame[b]).conjugate();
      const cplx domega = wa.transpose() * omega.cast<cplx>() * wb_bar;
      L(a, b) = -domega / cplx(0.0, 2.0);
    }
  }
  const double g = X.dz_norm_sq() * X.metric_factor(x.coords());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(L / g);

  LeviData d;
  d.f = 1.0 / X.contact_scaling(x.coords());
  d.det_levi = 1.0;
  for (int a = 0; a < n; ++a) {
    d.levi_eigenvalues.push_back(eig.eigenvalues()[a]);
    d.det_levi *= eig.eigenvalues()[a];
  }

  // dV_X = |omega_0| wedge vol_HX; the Euclidean normal to HX inside TX is the round
  // rotation generator iz, on which alpha = -1.
  std::vector<cplx> round(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) round[j] = cplx(0.0, 1.0) * x[j];
  d.vol_density = std::abs(X.contact_form(x.coords(), round)) * std::pow(X.metric_factor(x.coords()), n);
  return d;
}

double ContactResiduals::max() const { return std::max({reeb_pairing, horizontal, reeb_interior}); }

ContactResiduals check_contact(const ModelSpace& X, const SpherePoint& x, double step) {
  require_on_model(X, x);
  ContactResiduals res;
  const auto R = X.reeb(x.coords());
  res.reeb_pairing = std::abs(X.contact_form(x.coords(), R) + 1.0);

  std::vector<std::vector<cplx>> tangent;
  for (const auto& u : holomorphic_frame(x.coords())) {
    std::vector<cplx> iu(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) iu[j] = cplx(0.0, 1.0) * u[j];
    res.horizontal = std::max({res.horizontal, std::abs(X.contact_form(x.coords(), u)),
                               std::abs(X.contact_form(x.coords(), iu))});
    tangent.push_back(u);
    tangent.push_back(std::move(iu));
  }
  tangent.push_back(R);

  const Eigen::MatrixXd omega = contact_differential(X, x.coords(), step);
  const Eigen::VectorXd r = real_components(R);
  for (const auto& v : tangent) {
    res.reeb_interior = std::max(res.reeb_interior, std::abs(r.dot(omega * real_components(v))));
  }
  return res;
}

double levi_volume_density(const ModelSpace& X, std::span<const cplx> z) {
  const int n = X.n();
  const double f = 1.0 / X.contact_scaling(z);
  const double c = X.metric_factor(z);
  const double mu = 0.5 * f / (X.dz_norm_sq() * c);
  return std::pow(mu, n) * std::pow(c, n) * f;
}

Estimate geometric_integral(const ModelSpace& X, const QuadratureSpec& quad) {
  const SphereRule rule(X.n(), quad);
  return rule.integrate([&](std::span<const cplx> z) { return levi_volume_density(X, z); });
}

double orbit_distance(const ModelSpace& X, const SpherePoint& x, const SpherePoint& y) {
  require_on_model(X, x);
  require_on_model(X, y);
  auto dist2 = [&](double theta) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      s += std::norm(x[j] - std::polar(1.0, X.weights()[j] * theta) * y[j]);
    }
    return s;
  };
  const int grid = 128 * X.weights().max();
  const double dtheta = 2.0 * kPi / grid;
  std::vector<std::pair<double, int>> samples;
  samples.reserve(grid);
  for (int i = 0; i < grid; ++i) samples.emplace_back(dist2(i * dtheta), i);
  std::partial_sort(samples.begin(), samples.begin() + std::min(4, grid), samples.end());
  double best = samples.front().first;
  for (int c = 0; c < std::min(4, grid); ++c) {
    const double center = samples[c].second * dtheta;
    const auto r = boost::math::tools::brent_find_minima(dist2, center - dtheta, center + dtheta, 52);
    best = std::min(best, r.second);
  }
  return std::sqrt(std::max(0.0, best));
}

}  // namespace szego
