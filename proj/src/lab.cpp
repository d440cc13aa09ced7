#include "szego/lab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "szego/core.hpp"
#include "szego/embedding.hpp"
#include "szego/geometry.hpp"
#include "szego/hardy.hpp"
#include "szego/kernels.hpp"
#include "szego/orbifold.hpp"
#include "szego/quadrature.hpp"
#include "szego/reduction.hpp"

namespace szego::lab {

// ---------------------------------------------------------------------------
// Report plumbing

bool Verdict::pass() const {
  return error.empty() && !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

bool Report::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass(); });
}

namespace {

Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Json to_json(const Verdict& v) {
  Json checks = Json::array();
  for (const auto& c : v.checks) {
    checks.push_back({{"name", c.name},
                      {"measured", number(c.measured)},
                      {"relation", c.relation},
                      {"threshold", number(c.threshold)},
                      {"pass", c.pass}});
  }
  Json out = {{"id", v.id}, {"title", v.title}, {"status", v.pass() ? "PASS" : "FAIL"}, {"checks", checks}};
  if (!v.error.empty()) out["error"] = v.error;
  return out;
}

}  // namespace

Json Report::to_json() const {
  Json out;
  out["schema_version"] = kSchemaVersion;
  out["command"] = command;
  out["config"] = config;
  out["results"] = results;
  Json v = Json::array();
  for (const auto& verdict : verdicts) v.push_back(lab::to_json(verdict));
  out["verdicts"] = v;
  out["status"] = all_pass() ? "PASS" : "FAIL";
  if (timing_seconds) out["timing_seconds"] = *timing_seconds;
  return out;
}

std::string Report::json_text() const { return to_json().dump(2) + "\n"; }

std::string Report::csv_text() const {
  std::ostringstream os;
  os << "k,value,fit,residual\n";
  char buf[128];
  for (const auto& r : series) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,%.17g\n", r.k, r.value, r.fit, r.residual);
    os << buf;
  }
  return os.str();
}

int exit_code(const Report& report) { return report.all_pass() ? 0 : 4; }

std::string verdict_line(const Verdict& v) {
  std::ostringstream os;
  os << (v.pass() ? "PASS" : "FAIL") << ' ' << v.id << ' ' << v.title;
  if (!v.error.empty()) os << " | error: " << v.error;
  char buf[256];
  for (std::size_t i = 0; i < v.checks.size(); ++i) {
    const auto& c = v.checks[i];
    std::snprintf(buf, sizeof buf, "%s %s=%.6g %s %.6g", i == 0 ? " |" : ";", c.name.c_str(), c.measured,
                  c.relation.c_str(), c.threshold);
    os << buf;
  }
  return os.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot write output file: " + path);
    f << content;
    if (!f.flush()) throw ConfigError("cannot write output file: " + path);
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("cannot write output file: " + path);
  }
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("malformed integer list: " + text);
    }
  }
  if (out.empty()) throw ConfigError("empty integer list");
  return out;
}

std::vector<long> parse_k_list(const std::string& text) {
  std::vector<long> out;
  if (text.find(':') != std::string::npos) {
    long start = 0, stop = 0, step = 1;
    char c1 = 0, c2 = 0;
    std::istringstream is(text);
    if (!(is >> start >> c1 >> stop) || c1 != ':') throw ConfigError("malformed k range: " + text);
    if (is >> c2 && !(c2 == ':' && is >> step)) throw ConfigError("malformed k range: " + text);
    if (step <= 0 || start < 0 || stop < start) throw ConfigError("malformed k range: " + text);
    for (long k = start; k <= stop; k += step) out.push_back(k);
    return out;
  }
  for (int v : parse_int_list(text)) {
    if (v < 0) throw ConfigError("k values must be nonnegative");
    out.push_back(v);
  }
  return out;
}

namespace {

// ---------------------------------------------------------------------------
// Helpers

std::vector<long> range(long start, long stop, long step) {
  std::vector<long> out;
  for (long k = start; k <= stop; k += step) out.push_back(k);
  return out;
}

Check check(std::string name, double measured, const std::string& relation, double threshold) {
  bool pass = false;
  if (relation == "<=") pass = measured <= threshold;
  else if (relation == "<") pass = measured < threshold;
  else if (relation == ">=") pass = measured >= threshold;
  else if (relation == ">") pass = measured > threshold;
  else if (relation == "==") pass = measured == threshold;
  return {std::move(name), measured, threshold, relation, pass};
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t tag) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(tag)));
}

Json point_json(const SpherePoint& x) {
  Json out = Json::array();
  for (std::size_t j = 0; j < x.size(); ++j) out.push_back(Json::array({x[j].real(), x[j].imag()}));
  return out;
}

Json ints(std::span<const int> v) { return Json(std::vector<int>(v.begin(), v.end())); }

double closed_form_integral(const ModelSpace& X) {
  const int n = X.n();
  double denom = std::tgamma(n + 1.0);
  for (int a : X.weights().values()) denom *= a;
  double scale = 1.0;
  if (X.metric() == MetricConvention::euclidean_unit_dz) scale = std::pow(0.5, n);
  return 2.0 * std::pow(kPi, n + 1) / denom * scale;
}

WeightVector weights_or(const RunConfig& c, const char* fallback) {
  return WeightVector::parse(c.weights.value_or(fallback));
}

MetricConvention metric_of(const RunConfig& c) {
  return c.metric ? parse_metric_convention(*c.metric) : MetricConvention::sphere_measure;
}

QuadratureSpec quad_for(const RunConfig& c, int n) {
  QuadratureSpec q;
  q.seed = c.seed;
  q.method = c.quadrature ? parse_quadrature_method(*c.quadrature)
                          : (n == 1 ? QuadratureMethod::product1d : QuadratureMethod::montecarlo);
  q.samples = c.samples.value_or(q.method == QuadratureMethod::product1d ? 64 : 200000);
  return q;
}

Json quad_json(const QuadratureSpec& q) {
  return {{"method", to_string(q.method)}, {"samples", q.samples}, {"seed", q.seed}};
}

Json estimate_json(const Estimate& e) { return {{"value", e.value}, {"std_error", e.std_error}}; }

double tol_or(const RunConfig& c, double fallback) {
  const double t = c.tol.value_or(fallback);
  if (!(t > 0.0)) throw ConfigError("--tol must be positive");
  return t;
}

/// Points with every |z_j|^2 >= floor, away from the singular strata.
std::vector<SpherePoint> generic_points(int n, std::size_t count, std::uint64_t seed, double floor) {
  auto rng = stream(seed, 0x67656e65726963ULL);
  std::vector<SpherePoint> out;
  while (out.size() < count) {
    auto x = random_sphere_point(n, rng);
    bool ok = true;
    for (std::size_t j = 0; j < x.size(); ++j) ok = ok && std::norm(x[j]) >= floor;
    if (ok) out.push_back(std::move(x));
  }
  return out;
}

/// Uniform points on each coordinate support whose gcd exceeds ell0.
std::vector<SpherePoint> singular_points(const ModelSpace& X) {
  const auto& a = X.weights();
  const auto N = a.size();
  const int ell0 = stratification(X).ell0;
  std::vector<SpherePoint> out;
  for (unsigned mask = 1; mask < (1u << N); ++mask) {
    int g = 0;
    std::vector<cplx> z(N, 0.0);
    const double amp = 1.0 / std::sqrt(static_cast<double>(std::popcount(mask)));
    for (std::size_t j = 0; j < N; ++j) {
      if (mask & (1u << j)) {
        g = std::gcd(g, a[j]);
        z[j] = amp;
      }
    }
    if (g > ell0) out.push_back(SpherePoint::normalized(z));
  }
  return out;
}

/// x = (sqrt(.7), sqrt(.3), 0, ...) and y rotated by phi in the real (z_0, z_1) plane.
std::pair<SpherePoint, SpherePoint> decay_pair(int n, double phi) {
  const double beta = std::atan2(std::sqrt(0.3), std::sqrt(0.7));
  std::vector<cplx> x(static_cast<std::size_t>(n) + 1, 0.0), y = x;
  x[0] = std::cos(beta);
  x[1] = std::sin(beta);
  y[0] = std::cos(beta + phi);
  y[1] = std::sin(beta + phi);
  return {SpherePoint::normalized(x), SpherePoint::normalized(y)};
}

const std::vector<double>& decay_angles() {
  static const std::vector<double> angles{0.08, 0.16, 0.24};
  return angles;
}

Json fit_json(const FitResult& f) {
  return {{"b0_hat", f.b0_hat},         {"corrections", f.corrections}, {"order_hat", f.order_hat},
          {"residual", f.residual},     {"b0_model", f.b0_model},     {"multiplicity", f.multiplicity},
          {"kappa_hat", f.kappa_hat},   {"used", f.used}};
}

Json decay_json(const DecayFit& d) {
  Json samples = Json::array();
  for (const auto& [k, v] : d.samples) samples.push_back({{"k", k}, {"abs_kernel", v}});
  return {{"orbit_distance", d.orbit_distance},
          {"rate", number(d.rate)},
          {"log_c", number(d.log_c)},
          {"r_squared", d.r_squared},
          {"infinite_rate", d.infinite_rate},
          {"sandwich_lo", d.sandwich_lo},
          {"sandwich_hi", d.sandwich_hi},
          {"within_sandwich", d.within_sandwich},
          {"samples", samples}};
}

Json selection_json(const SelectionReport& s, bool with_rows) {
  Json out = {{"ell", s.ell},
              {"ell0", s.ell0},
              {"forbidden", s.forbidden},
              {"forbidden_violations", s.forbidden_violations},
              {"admissible_zeros", s.admissible_zeros},
              {"max_forbidden_value", s.max_forbidden_value},
              {"fluctuation", s.fluctuation},
              {"stratum_limit", s.stratum_limit},
              {"generic_limit", s.generic_limit},
              {"generic_limit_nearby", s.generic_limit_nearby},
              {"stratum_ratio", s.stratum_ratio}};
  if (with_rows) {
    Json rows = Json::array();
    for (const auto& r : s.rows) rows.push_back({{"k", r.k}, {"value", r.value}, {"predicted_zero", r.predicted_zero}});
    out["rows"] = rows;
  }
  return out;
}

Json scan_json(const ScanReport& s) {
  Json bins = Json::array();
  for (const auto& b : s.bins) {
    bins.push_back({{"lo", b.lo}, {"hi", b.hi}, {"pairs", b.pairs}, {"min_separation", b.min_separation}});
  }
  return {{"k", s.k}, {"pairs", s.pairs}, {"base_point_failures", s.base_point_failures}, {"bins", bins},
          {"pass", s.pass}};
}

Json sigma_json(const SigmaReport& s) {
  return {{"k", s.k},
          {"rows", s.rows},
          {"cols", s.cols},
          {"singular_values", s.singular_values},
          {"refined_singular_values", s.refined_singular_values},
          {"smallest", s.smallest},
          {"stability", s.stability},
          {"projection_residual", s.projection_residual},
          {"radial_nodes", s.radial_nodes}};
}

Json pair_json(const ReductionPair& p) {
  Json gens = Json::array();
  for (const auto& g : p.generators) gens.push_back(g);
  return {{"ambient", ints(p.ambient.values())},
          {"b", p.b},
          {"generators", gens},
          {"reduced", ints(p.reduced.values())},
          {"level_set_nonempty", p.level_set.nonempty},
          {"level_set_has_fixed_points", p.level_set.has_fixed_points}};
}

// Orbifold integrands on S^3 / Z_m; each is invariant under the default diagonal actions.
struct NamedField {
  std::string name;
  ScalarField fn;
};

const std::vector<NamedField>& orbifold_integrands() {
  static const std::vector<NamedField> fields{
      {"one", [](std::span<const cplx>) { return 1.0; }},
      {"abs_z0_pow4", [](std::span<const cplx> z) { return std::norm(z[0]) * std::norm(z[0]); }},
      {"re_z0sq_conj_z1sq_plus_2abs_z1sq",
       [](std::span<const cplx> z) {
         return std::real(z[0] * z[0] * std::conj(z[1] * z[1])) + 2.0 * std::norm(z[1]);
       }},
  };
  return fields;
}

// ---------------------------------------------------------------------------
// Acceptance criteria. Each returns its verdict and writes details into `out`.

using Criterion = Verdict (*)(std::uint64_t seed, bool quick, Json& out);

Verdict guarded(const std::string& id, const std::string& title, Criterion fn, std::uint64_t seed, bool quick,
                Json& out) {
  try {
    Verdict v = fn(seed, quick, out);
    v.id = id;
    v.title = title;
    return v;
  } catch (const std::exception& e) {
    Verdict v{id, title, {}, e.what()};
    out["error"] = e.what();
    return v;
  }
}

double calibrated_kappa(Json& out) {
  const auto cal = calibrate(make_sphere(WeightVector({1, 1})));
  out["calibration"] = {{"kappa", cal.kappa}, {"b0_hat", cal.b0_hat}, {"b0_model", cal.b0_model}};
  return cal.kappa;
}

Verdict criterion_dimension(std::uint64_t seed, bool, Json& out) {
  const double kappa = calibrated_kappa(out);
  Verdict v;
  double worst = 0.0;
  Json rows = Json::array();
  for (const auto& w : std::vector<std::vector<int>>{{1, 1}, {1, 2}, {1, 2, 3}, {2, 4}}) {
    const auto X = make_sphere(WeightVector(w));
    const long p = stratification(X).p;
    QuadratureSpec q;
    q.seed = splitmix64(seed + 11);
    q.method = X.n() == 1 ? QuadratureMethod::product1d : QuadratureMethod::montecarlo;
    q.samples = X.n() == 1 ? 64 : 200000;
    const auto rep = dim_asymptotics(X, 400 / p, q);
    const double rel = std::abs(rep.kappa_hat - kappa) / kappa;
    worst = std::max(worst, rel);
    rows.push_back({{"weights", w},
                    {"ell0", rep.ell0},
                    {"p", rep.p},
                    {"k_max", (400 / p) * p},
                    {"limit_hat", rep.limit_hat},
                    {"fit_residual", rep.fit_residual},
                    {"integral", estimate_json(rep.integral)},
                    {"model_rhs", rep.model_rhs},
                    {"kappa_hat", rep.kappa_hat},
                    {"relative_error", rel}});
  }
  out["rows"] = rows;
  v.checks.push_back(check("max_relative_error_vs_kappa", worst, "<=", 0.03));
  return v;
}

Verdict criterion_diagonal(std::uint64_t seed, bool quick, Json& out) {
  const double kappa = calibrated_kappa(out);
  Verdict v;
  const auto ks = quick ? range(60, 200, 20) : range(60, 200, 10);
  double worst = 0.0;
  Json rows = Json::array();
  for (const auto& w : std::vector<std::vector<int>>{{1, 1}, {1, 2}, {1, 2, 3}}) {
    const auto X = make_sphere(WeightVector(w));
    const auto pts = generic_points(X.n(), 5, seed + w.size() * 31 + w.back(), 0.1);
    for (const auto& x : pts) {
      const auto fit = fit_leading(diagonal_series(X, x, ks), levi_data(X, x), X.n());
      const double rel = std::abs(fit.kappa_hat - kappa) / kappa;
      worst = std::max(worst, rel);
      rows.push_back({{"weights", w}, {"x", point_json(x)}, {"fit", fit_json(fit)}, {"relative_error", rel}});
    }
  }
  out["rows"] = rows;
  const auto round = make_sphere(WeightVector({1, 1}));
  const SpherePoint e0(std::vector<cplx>{1.0, 0.0});
  const double pi200 = szego_eval(build_basis(round.weights(), 200), e0, e0).value.real();
  const double b0_round = pi200 / 200.0;
  const double target = 1.0 / (2.0 * kPi * kPi);
  out["round_sphere"] = {{"k", 200}, {"b0_hat", b0_round}, {"target", target}};
  v.checks.push_back(check("max_kappa_relative_error", worst, "<=", 0.03));
  v.checks.push_back(check("round_b0_relative_error", std::abs(b0_round - target) / target, "<=", 0.01));
  return v;
}

Verdict criterion_stratum(std::uint64_t, bool, Json& out) {
  Verdict v;
  double max_forbidden = 0.0, worst_fluct = 0.0;
  std::size_t violations = 0, forbidden = 0, points = 0;
  Json rows = Json::array();
  for (const auto& w : std::vector<std::vector<int>>{{1, 2}, {1, 2, 3}}) {
    const auto X = make_sphere(WeightVector(w));
    for (const auto& x : singular_points(X)) {
      const auto s = stratum_selection(X, x, 200);
      ++points;
      violations += s.forbidden_violations;
      forbidden += s.forbidden;
      max_forbidden = std::max(max_forbidden, s.max_forbidden_value);
      worst_fluct = std::max(worst_fluct, s.fluctuation);
      Json row = selection_json(s, false);
      row["weights"] = w;
      row["x"] = point_json(x);
      rows.push_back(row);
    }
  }
  out["rows"] = rows;
  v.checks.push_back(check("singular_points", static_cast<double>(points), ">=", 3));
  v.checks.push_back(check("forbidden_degrees_tested", static_cast<double>(forbidden), ">", 0));
  v.checks.push_back(check("max_abs_kernel_on_forbidden_degrees", max_forbidden, "<=", 1e-14));
  v.checks.push_back(check("forbidden_violations", static_cast<double>(violations), "==", 0));
  v.checks.push_back(check("max_top_tenth_fluctuation", worst_fluct, "<", 0.05));
  return v;
}

Verdict criterion_averaging(std::uint64_t seed, bool, Json& out) {
  Verdict v;
  const WeightVector round({1, 1});
  double worst = 0.0;
  Json rows = Json::array();
  for (int m : {2, 3, 4}) {
    const auto action = CyclicAction::diagonal(m, {1, m - 1});
    for (long k : {3L, 7L, 12L}) {
      const auto basis = build_basis(round, k);
      auto rng = stream(seed, 0x617667ULL + 100 * m + k);
      double dev = 0.0;
      for (int i = 0; i < 100; ++i) {
        const auto x = random_sphere_point(1, rng);
        const auto y = random_sphere_point(1, rng);
        dev = std::max(dev, averaged_kernel(basis, action, x, y).max_deviation);
      }
      worst = std::max(worst, dev);
      rows.push_back({{"m", m}, {"action", {1, m - 1}}, {"k", k}, {"pairs", 100}, {"max_deviation", dev}});
    }
  }
  out["rows"] = rows;
  v.checks.push_back(check("max_two_way_deviation", worst, "<=", 1e-10));
  return v;
}

Verdict criterion_decay(std::uint64_t seed, bool, Json& out) {
  Verdict v;
  const auto round = make_sphere(WeightVector({1, 1}));
  auto rng = stream(seed, 0x646563ULL);
  double closed = 0.0;
  for (long k : {1L, 5L, 10L, 20L, 50L}) {
    const auto basis = build_basis(round.weights(), k);
    for (int i = 0; i < 100; ++i) {
      const auto x = random_sphere_point(1, rng);
      const auto y = random_sphere_point(1, rng);
      const double exact =
          (k + 1) * std::pow(std::abs(std::conj(x[0]) * y[0] + std::conj(x[1]) * y[1]), k) / (2.0 * kPi * kPi);
      closed = std::max(closed, std::abs(std::abs(szego_eval(basis, x, y).value) - exact));
    }
  }
  out["round_closed_form_max_error"] = closed;
  const auto X = make_sphere(WeightVector({1, 2}));
  const auto ks = range(20, 200, 10);
  double min_rate = std::numeric_limits<double>::infinity(), min_r2 = 1.0;
  std::vector<std::pair<double, double>> by_distance;
  Json rows = Json::array();
  for (double phi : decay_angles()) {
    const auto [x, y] = decay_pair(1, phi);
    const auto d = offdiag_decay(X, x, y, ks);
    min_rate = std::min(min_rate, d.rate);
    min_r2 = std::min(min_r2, d.r_squared);
    by_distance.emplace_back(d.orbit_distance, d.rate);
    Json row = decay_json(d);
    row["x"] = point_json(x);
    row["y"] = point_json(y);
    rows.push_back(row);
  }
  std::sort(by_distance.begin(), by_distance.end());
  double monotone_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < by_distance.size(); ++i) {
    monotone_gap = std::min(monotone_gap, by_distance[i].second - by_distance[i - 1].second);
  }
  out["weighted_pairs"] = rows;
  v.checks.push_back(check("round_closed_form_max_error", closed, "<=", 1e-10));
  v.checks.push_back(check("min_decay_rate", min_rate, ">", 0.0));
  v.checks.push_back(check("min_r_squared", min_r2, ">=", 0.95));
  v.checks.push_back(check("min_rate_increment_with_distance", monotone_gap, ">", 0.0));
  return v;
}

Verdict criterion_reproducing(std::uint64_t seed, bool, Json& out) {
  Verdict v;
  const auto X1 = make_sphere(WeightVector({1, 2}));
  const QuadratureSpec product{QuadratureMethod::product1d, 64, seed};
  const auto b1 = build_basis(X1.weights(), 9);
  const auto x1 = generic_points(1, 1, seed + 5, 0.1).front();
  const double gram1 = gram_check(b1, product);
  const double repr1 = reproducing_check(X1, b1, x1, product);

  const auto X2 = make_sphere(WeightVector({1, 1, 1}));
  const QuadratureSpec mc{QuadratureMethod::montecarlo, 200000, splitmix64(seed + 6)};
  // Plain Monte Carlo: 5e-3 is about three standard errors for the k = 1 Gram entries.
  // The k = 2 basis is reported alongside without gating.
  const auto b2 = build_basis(X2.weights(), 1);
  const auto x2 = generic_points(2, 1, seed + 7, 0.1).front();
  const double gram2 = gram_check(b2, mc);
  const double repr2 = reproducing_check(X2, b2, x2, mc);
  const auto b2_info = build_basis(X2.weights(), 2);
  const double gram2_info = gram_check(b2_info, mc);
  out["product_n1"] = {{"weights", {1, 2}}, {"k", 9}, {"dim", b1.size()}, {"quadrature", quad_json(product)},
                       {"gram_deviation", gram1}, {"reproducing_residual", repr1}};
  out["montecarlo_n2"] = {{"weights", {1, 1, 1}}, {"k", 1}, {"dim", b2.size()}, {"quadrature", quad_json(mc)},
                          {"gram_deviation", gram2}, {"reproducing_residual", repr2},
                          {"informational_k2_gram_deviation", gram2_info}};
  v.checks.push_back(check("product_gram_deviation", gram1, "<=", 1e-8));
  v.checks.push_back(check("product_reproducing_residual", repr1, "<=", 1e-8));
  v.checks.push_back(check("montecarlo_gram_deviation", gram2, "<=", 5e-3));
  v.checks.push_back(check("montecarlo_reproducing_residual", repr2, "<=", 5e-3));
  return v;
}

Verdict criterion_embedding(std::uint64_t seed, bool quick, Json& out) {
  Verdict v;
  const auto X = make_sphere(WeightVector({1, 2}));
  const std::size_t pairs = quick ? 200 : 500;
  const std::size_t points = quick ? 20 : 50;
  const auto sweep = embedding_sweep(X, 10, pairs, points, seed);
  Json rows = Json::array();
  for (const auto& r : sweep.rows) {
    rows.push_back({{"K", r.K}, {"k", r.k}, {"scan", scan_json(r.scan)}, {"min_immersion", r.min_immersion},
                    {"immersion_points", r.immersion_points}, {"good", r.good}});
  }
  out["pairs"] = pairs;
  out["immersion_points"] = points;
  out["rows"] = rows;
  out["k_star"] = sweep.k_star;
  double min_sep = std::numeric_limits<double>::infinity(), min_imm = min_sep;
  std::size_t failures = 0;
  for (const auto& r : sweep.rows) {
    if (sweep.k_star < 0 || r.K < sweep.k_star) continue;
    failures += r.scan.base_point_failures;
    min_imm = std::min(min_imm, r.min_immersion);
    for (const auto& b : r.scan.bins) {
      if (b.pairs > 0) min_sep = std::min(min_sep, b.min_separation);
    }
  }
  v.checks.push_back(check("k_star", sweep.k_star < 0 ? std::numeric_limits<double>::infinity() : sweep.k_star,
                           "<=", 10));
  v.checks.push_back(check("base_point_failures_beyond_k_star", static_cast<double>(failures), "==", 0));
  v.checks.push_back(check("min_fs_separation_beyond_k_star", min_sep, ">", 0.0));
  v.checks.push_back(check("min_immersion_singular_value_beyond_k_star", min_imm, ">", kRankTolerance));
  v.checks.push_back(check("sweep_pass", sweep.pass ? 1.0 : 0.0, "==", 1.0));
  return v;
}

Verdict criterion_reduction(std::uint64_t, bool, Json& out) {
  Verdict v;
  const auto pair = find_reduction(WeightVector({1, 1, 1}), {1, -1, 0});
  const auto cmp = reduction_compare(pair, 100);
  std::size_t mismatches = 0;
  for (const auto& r : cmp.rows) mismatches += r.invariant != r.reduced;
  double smallest = std::numeric_limits<double>::infinity(), stability = 0.0;
  Json sig = Json::array();
  for (long k = 2; k <= 20; k += 2) {
    const auto s = sigma_map(pair, k);
    smallest = std::min(smallest, s.smallest);
    stability = std::max(stability, s.stability);
    sig.push_back(sigma_json(s));
  }
  out["pair"] = pair_json(pair);
  out["threshold"] = cmp.threshold;
  out["dimension_mismatches"] = mismatches;
  out["sigma"] = sig;
  v.checks.push_back(check("dimension_mismatches_k_le_100", static_cast<double>(mismatches), "==", 0));
  v.checks.push_back(check("min_sigma_singular_value", smallest, ">", 1e-6));
  v.checks.push_back(check("max_sigma_refinement_change", stability, "<=", 0.01));
  return v;
}

Verdict criterion_orbifold(std::uint64_t seed, bool, Json& out) {
  Verdict v;
  const auto atlas_a = coordinate_atlas(1, 2, {1, 1});
  const auto atlas_b = bump_atlas(1, 2, {1, 1}, 4, splitmix64(seed + 17));
  const QuadratureSpec qa{QuadratureMethod::montecarlo, 200000, splitmix64(seed + 18)};
  const QuadratureSpec qb{QuadratureMethod::montecarlo, 200000, splitmix64(seed + 19)};
  double worst = 0.0;
  Json rows = Json::array();
  for (const auto& f : orbifold_integrands()) {
    const auto a = orbifold_integrate(atlas_a, f.fn, qa);
    const auto b = orbifold_integrate(atlas_b, f.fn, qb);
    const double se = std::hypot(a.total.std_error, b.total.std_error);
    const double z = std::abs(a.total.value - b.total.value) / se;
    worst = std::max(worst, z);
    rows.push_back({{"integrand", f.name},
                    {"coordinate_atlas", estimate_json(a.total)},
                    {"bump_atlas", estimate_json(b.total)},
                    {"difference_in_standard_errors", z}});
  }
  out["quotient"] = "S^3/Z_2, action (1,1)";
  out["rows"] = rows;
  v.checks.push_back(check("max_atlas_difference_in_standard_errors", worst, "<=", 3.0));
  return v;
}

struct CriterionEntry {
  const char* id;
  const char* title;
  Criterion fn;
};

const std::vector<CriterionEntry>& criteria() {
  static const std::vector<CriterionEntry> list{
      {"criterion-1", "dimension asymptotics match the calibrated Levi integral", criterion_dimension},
      {"criterion-2", "diagonal leading coefficient matches the calibrated constant", criterion_diagonal},
      {"criterion-3", "stratum Fourier selection and convergence along admissible degrees", criterion_stratum},
      {"criterion-4", "two-way quotient kernels agree", criterion_averaging},
      {"criterion-5", "off-diagonal closed form and decay", criterion_decay},
      {"criterion-6", "reproducing property and Gram orthonormality", criterion_reproducing},
      {"criterion-7", "Kodaira-Bailey embedding for weights (1,2)", criterion_embedding},
      {"criterion-8", "quantization commutes with reduction on S^5", criterion_reduction},
      {"criterion-9", "orbifold integral is atlas independent", criterion_orbifold},
  };
  return list;
}

Report battery(std::uint64_t seed, bool quick) {
  Report rep;
  rep.command = "suite";
  rep.config = {{"seed", seed}, {"quick", quick}};
  for (const auto& c : criteria()) {
    Json detail = Json::object();
    rep.verdicts.push_back(guarded(c.id, c.title, c.fn, seed, quick, detail));
    rep.results[c.id] = detail;
  }
  return rep;
}

}  // namespace

Report acceptance_suite(std::uint64_t seed, bool quick, bool check_determinism) {
  Report rep = battery(seed, quick);
  if (!check_determinism) return rep;
  // Second run on one worker thread: any dependence on scheduling shows up here.
  set_worker_threads(1);
  Report again;
  try {
    again = battery(seed, quick);
  } catch (...) {
    set_worker_threads(0);
    throw;
  }
  set_worker_threads(0);
  const auto first = rep.json_text();
  const auto second = again.json_text();
  std::size_t differing = 0;
  for (std::size_t i = 0; i < std::min(first.size(), second.size()); ++i) differing += first[i] != second[i];
  differing += std::max(first.size(), second.size()) - std::min(first.size(), second.size());
  Verdict v{"criterion-10", "suite report is byte-identical across runs with the same seed", {}, {}};
  v.checks.push_back(check("differing_bytes", static_cast<double>(differing), "==", 0));
  rep.results["criterion-10"] = {{"report_bytes", first.size()}, {"second_run_threads", 1}};
  rep.verdicts.push_back(v);
  return rep;
}

namespace {

// ---------------------------------------------------------------------------
// Commands

Report cmd_dims(const RunConfig& c) {
  const auto X = make_sphere(weights_or(c, "1,2"), metric_of(c));
  const long k_max = c.k_max.value_or(100);
  if (k_max < 0) throw ConfigError("--k-max must be nonnegative");
  const auto strat = stratification(X);
  const int n = X.n();
  double denom = std::tgamma(n + 1.0);
  for (int a : X.weights().values()) denom *= a;
  const double leading = strat.ell0 / denom;
  Report rep;
  rep.config = {{"weights", ints(X.weights().values())}, {"k_max", k_max}, {"metric", to_string(X.metric())}};
  const auto table = dim_table(X.weights(), k_max);
  Json rows = Json::array();
  for (long k = 0; k <= k_max; ++k) {
    const double fit = k % strat.ell0 == 0 ? leading * std::pow(static_cast<double>(k), n) : 0.0;
    rows.push_back({{"k", k}, {"dim", table[k]}});
    rep.series.push_back({k, static_cast<double>(table[k]), fit, static_cast<double>(table[k]) - fit});
  }
  rep.results["table"] = rows;
  rep.results["leading_coefficient"] = leading;
  if (k_max / strat.p >= 6) {
    const auto q = quad_for(c, n);
    Json cal = Json::object();
    const auto cal_value = calibrate(make_sphere(WeightVector({1, 1}), X.metric()));
    const auto a = dim_asymptotics(X, k_max / strat.p, q);
    rep.config["quadrature"] = quad_json(q);
    rep.results["asymptotics"] = {{"ell0", a.ell0},         {"p", a.p},
                                  {"limit_hat", a.limit_hat}, {"fit_residual", a.fit_residual},
                                  {"integral", estimate_json(a.integral)},
                                  {"model_rhs", a.model_rhs}, {"kappa_hat", a.kappa_hat},
                                  {"calibrated_kappa", cal_value.kappa}};
    const double tol = tol_or(c, 0.03);
    rep.verdicts.push_back({"dims-kappa", "extrapolated dimension limit matches the calibrated constant",
                            {check("relative_error", std::abs(a.kappa_hat - cal_value.kappa) / cal_value.kappa,
                                   "<=", tol)},
                            {}});
  }
  return rep;
}

Report cmd_stratify(const RunConfig& c) {
  const auto X = make_sphere(weights_or(c, "1,2,3"), metric_of(c));
  const auto s = stratification(X);
  const std::size_t samples = c.samples.value_or(10000);
  auto rng = stream(c.seed, 0x737472ULL);
  std::map<int, std::size_t> seen;
  std::size_t bad_divisibility = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const int ell = isotropy_order(X, random_sphere_point(X.n(), rng));
    ++seen[ell];
    if (s.p % ell != 0 || ell % s.ell0 != 0) ++bad_divisibility;
  }
  Report rep;
  rep.config = {{"weights", ints(X.weights().values())}, {"samples", samples}, {"seed", c.seed}};
  Json sampled = Json::array();
  for (const auto& [ell, count] : seen) sampled.push_back({{"ell", ell}, {"count", count}});
  Json singular = Json::array();
  for (const auto& x : singular_points(X)) {
    singular.push_back({{"x", point_json(x)}, {"ell", isotropy_order(X, x)}});
  }
  rep.results = {{"ell_values", s.ell_values}, {"ell0", s.ell0}, {"p", s.p}, {"sampled_orders", sampled},
                 {"singular_points", singular}};
  const double non_generic = static_cast<double>(samples - seen[s.ell0]);
  rep.verdicts.push_back({"stratify-generic", "random points lie on the generic stratum",
                          {check("non_generic_samples", non_generic, "==", 0),
                           check("divisibility_violations", static_cast<double>(bad_divisibility), "==", 0)},
                          {}});
  return rep;
}

Report cmd_levi(const RunConfig& c) {
  const auto X = make_sphere(weights_or(c, "1,2"), metric_of(c));
  const std::size_t samples = c.samples.value_or(100);
  auto rng = stream(c.seed, 0x6c657669ULL);
  std::vector<SpherePoint> pts;
  for (std::size_t j = 0; j < X.weights().size(); ++j) {
    std::vector<cplx> z(X.weights().size(), 0.0);
    z[j] = 1.0;
    pts.emplace_back(z);
  }
  for (std::size_t i = 0; i < samples; ++i) pts.push_back(random_sphere_point(X.n(), rng));
  double frame_dev = 0.0, contact = 0.0, min_det = std::numeric_limits<double>::infinity();
  Json rows = Json::array();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto closed = levi_data(X, pts[i]);
    const auto frame = levi_data_frame(X, pts[i]);
    double dev = std::abs(closed.det_levi - frame.det_levi) + std::abs(closed.vol_density - frame.vol_density);
    for (std::size_t e = 0; e < closed.levi_eigenvalues.size(); ++e) {
      dev = std::max(dev, std::abs(closed.levi_eigenvalues[e] - frame.levi_eigenvalues[e]));
    }
    frame_dev = std::max(frame_dev, dev);
    contact = std::max(contact, check_contact(X, pts[i]).max());
    min_det = std::min(min_det, closed.det_levi);
    if (i < X.weights().size() + 5) {
      rows.push_back({{"x", point_json(pts[i])},
                      {"f", closed.f},
                      {"levi_eigenvalues", closed.levi_eigenvalues},
                      {"det_levi", closed.det_levi},
                      {"vol_density", closed.vol_density},
                      {"frame_deviation", dev}});
    }
  }
  Report rep;
  rep.config = {{"weights", ints(X.weights().values())}, {"metric", to_string(X.metric())}, {"samples", samples},
                {"seed", c.seed}};
  rep.results = {{"points", rows}, {"max_frame_deviation", frame_dev}, {"max_contact_residual", contact},
                 {"min_det_levi", min_det}};
  const double tol = tol_or(c, 1e-6);
  rep.verdicts.push_back({"levi-frame", "closed form and frame evaluation agree",
                          {check("max_frame_deviation", frame_dev, "<=", tol)}, {}});
  rep.verdicts.push_back({"levi-contact", "contact identities hold", {check("max_contact_residual", contact, "<=", tol)},
                          {}});
  rep.verdicts.push_back({"levi-pseudoconvex", "Levi determinant is positive", {check("min_det_levi", min_det, ">", 0)},
                          {}});
  return rep;
}

Report cmd_geom_integral(const RunConfig& c) {
  const auto X = make_sphere(weights_or(c, "1,1"), metric_of(c));
  const auto q = quad_for(c, X.n());
  const auto est = geometric_integral(X, q);
  const double exact = closed_form_integral(X);
  Report rep;
  rep.config = {{"weights", ints(X.weights().values())}, {"metric", to_string(X.metric())},
                {"quadrature", quad_json(q)}};
  rep.results = {{"integral", estimate_json(est)}, {"closed_form", exact}};
  const double tol = std::max(3.0 * est.std_error, tol_or(c, 1e-9) * exact);
  rep.verdicts.push_back({"geom-integral", "quadrature matches the closed form",
                          {check("abs_error", std::abs(est.value - exact), "<=", tol)}, {}});
  return rep;
}

Report cmd_integrate_orbifold(const RunConfig& c) {
  const int n = c.n.value_or(1);
  const int m = c.m.value_or(2);
  if (n < 1) throw ConfigError("--n must be at least 1");
  std::vector<int> w = c.action ? parse_int_list(*c.action) : std::vector<int>(static_cast<std::size_t>(n) + 1, 1);
  const std::size_t samples = c.samples.value_or(200000);
  const auto atlas_a = coordinate_atlas(n, m, w);
  const auto atlas_b = bump_atlas(n, m, w, 4, splitmix64(c.seed + 17));
  const QuadratureSpec qa{QuadratureMethod::montecarlo, samples, splitmix64(c.seed + 18)};
  const QuadratureSpec qb{QuadratureMethod::montecarlo, samples, splitmix64(c.seed + 19)};
  Report rep;
  rep.config = {{"n", n}, {"m", m}, {"action", w}, {"samples", samples}, {"seed", c.seed}};
  Json rows = Json::array();
  std::vector<Check> checks;
  const double limit = tol_or(c, 3.0);
  for (const auto& f : orbifold_integrands()) {
    if (n != 1 && f.name != "one") continue;
    const auto a = orbifold_integrate(atlas_a, f.fn, qa);
    const auto b = orbifold_integrate(atlas_b, f.fn, qb);
    const double z = std::abs(a.total.value - b.total.value) / std::hypot(a.total.std_error, b.total.std_error);
    Json row = {{"integrand", f.name}, {"coordinate_atlas", estimate_json(a.total)},
                {"bump_atlas", estimate_json(b.total)}, {"difference_in_standard_errors", z}};
    if (f.name == "one") row["exact"] = sphere_volume(n) / m;
    rows.push_back(row);
    checks.push_back(check(f.name + "_difference_in_standard_errors", z, "<=", limit));
  }
  rep.results["rows"] = rows;
  rep.verdicts.push_back({"orbifold-atlas", "two atlases agree", checks, {}});
  return rep;
}

Report cmd_kernel_diag(const RunConfig& c) {
  const auto X = make_sphere(weights_or(c, "1,2"), metric_of(c));
  const auto ks = c.k_list.value_or(range(60, 200, 10));
  const std::size_t count = c.samples.value_or(5);
  const auto cal = calibrate(make_sphere(WeightVector({1, 1}), X.metric()));
  Report rep;
  rep.config = {{"weights", ints(X.weights().values())}, {"metric", to_string(X.metric())}, {"k_list", ks},
                {"points", count}, {"seed", c.seed}};
  Json rows = Json::array();
  double worst = 0.0;
  const auto pts = generic_points(X.n(), count, c.seed, 0.1);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto levi = levi_data(X, pts[i]);
    const auto series = diagonal_series(X, pts[i], ks);
    const auto fit = fit_leading(series, levi, X.n());
    worst = std::max(worst, std::abs(fit.kappa_hat - cal.kappa) / cal.kappa);
    rows.push_back({{"x", point_json(pts[i])}, {"fit", fit_json(fit)}});
    if (i == 0) {
      for (const auto& [k, v] : series.entries) {
        const double value = v / levi.vol_density;
        const double model = fit.model(k, X.n());
        rep.series.push_back({k, value, model, (value - model) / model});
      }
    }
  }
  rep.results = {{"calibrated_kappa", cal.kappa}, {"points", rows}};
  rep.verdicts.push_back({"kernel-diag", "leading coefficient matches the calibrated constant",
                          {check("max_kappa_relative_error", worst, "<=", tol_or(c, 0.03))}, {}});
  return rep;
}

Report cmd_kernel_offdiag(const RunConfig& c) {
  const auto X = make_sphere(weights_or(c, "1,2"), metric_of(c));
  const auto ks = c.k_list.value_or(range(20, 200, 10));
  Report rep;
  rep.config = {{"weights", ints(X.weights().values())}, {"k_list", ks}, {"seed", c.seed}};
  std::vector<Check> checks;
  bool round = true;
  for (int a : X.weights().values()) round = round && a == 1;
  if (round) {
    auto rng = stream(c.seed, 0x646563ULL);
    double closed = 0.0;
    for (long k : ks) {
      const auto basis = build_basis(X.weights(), k);
      const double dim = static_cast<double>(basis.size());
      for (int i = 0; i < 20; ++i) {
        const auto x = random_sphere_point(X.n(), rng);
        const auto y = random_sphere_point(X.n(), rng);
        cplx ip = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) ip += std::conj(x[j]) * y[j];
        const double exact = dim * std::pow(std::abs(ip), k) / sphere_volume(X.n());
        closed = std::max(closed, std::abs(std::abs(szego_eval(basis, x, y).value) - exact) / std::max(1.0, exact));
      }
    }
    rep.results["round_closed_form_max_error"] = closed;
    checks.push_back(check("round_closed_form_max_error", closed, "<=", 1e-10));
  }
  Json rows = Json::array();
  std::vector<std::pair<double, double>> by_distance;
  for (double phi : decay_angles()) {
    const auto [x, y] = decay_pair(X.n(), phi);
    const auto d = offdiag_decay(X, x, y, ks);
    by_distance.emplace_back(d.orbit_distance, d.rate);
    Json row = decay_json(d);
    row["x"] = point_json(x);
    row["y"] = point_json(y);
    rows.push_back(row);
    checks.push_back(check("rate_at_distance_" + std::to_string(d.orbit_distance).substr(0, 6), d.rate, ">", 0.0));
    checks.push_back(check("r_squared_at_distance_" + std::to_string(d.orbit_distance).substr(0, 6), d.r_squared,
                           ">=", 0.95));
    if (rep.series.empty()) {
      for (const auto& [k, v] : d.samples) {
        const double value = std::log(v / std::pow(static_cast<double>(k), X.n()));
        const double fit = d.log_c - d.rate * k;
        rep.series.push_back({k, value, fit, value - fit});
      }
    }
  }
  std::sort(by_distance.begin(), by_distance.end());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < by_distance.size(); ++i) gap = std::min(gap, by_distance[i].second - by_distance[i - 1].second);
  checks.push_back(check("min_rate_increment_with_distance", gap, ">", 0.0));
  rep.results["pairs"] = rows;
  rep.verdicts.push_back({"kernel-offdiag", "off-diagonal decay", checks, {}});
  return rep;
}

Report cmd_stratum(const RunConfig& c) {
  const auto X = make_sphere(weights_or(c, "1,2"), metric_of(c));
  const long k_max = c.k_max.value_or(200);
  const auto pts = singular_points(X);
  if (pts.empty()) throw ConfigError("weights have no singular stratum");
  Report rep;
  rep.config = {{"weights", ints(X.weights().values())}, {"k_max", k_max}};
  Json rows = Json::array();
  std::vector<Check> checks;
  for (const auto& x : pts) {
    const auto s = stratum_selection(X, x, k_max);
    Json row = selection_json(s, true);
    row["x"] = point_json(x);
    rows.push_back(row);
    checks.push_back(check("ell" + std::to_string(s.ell) + "_max_forbidden", s.max_forbidden_value, "<=", 1e-14));
    checks.push_back(check("ell" + std::to_string(s.ell) + "_fluctuation", s.fluctuation, "<", tol_or(c, 0.05)));
    if (rep.series.empty()) {
      for (const auto& r : s.rows) {
        if (r.predicted_zero || r.k == 0) continue;
        const double value = r.value / std::pow(static_cast<double>(r.k), X.n());
        rep.series.push_back({r.k, value, s.stratum_limit, value - s.stratum_limit});
      }
    }
  }
  rep.results["points"] = rows;
  rep.verdicts.push_back({"stratum", "Fourier selection at singular points", checks, {}});
  return rep;
}

Report cmd_quotient_avg(const RunConfig& c) {
  const auto X = make_sphere(weights_or(c, "1,1"), metric_of(c));
  const std::vector<int> orders = c.m ? std::vector<int>{*c.m} : std::vector<int>{2, 3, 4};
  const auto ks = c.k_list.value_or(std::vector<long>{3, 7, 12});
  const std::size_t pairs = c.samples.value_or(100);
  Report rep;
  rep.config = {{"weights", ints(X.weights().values())}, {"orders", orders}, {"k_list", ks}, {"pairs", pairs},
                {"seed", c.seed}};
  Json rows = Json::array();
  double worst = 0.0;
  for (int m : orders) {
    std::vector<int> w;
    if (c.action) w = parse_int_list(*c.action);
    else {
      w.assign(X.weights().size(), 1);
      w.back() = m - 1;
    }
    const auto action = CyclicAction::diagonal(m, w);
    for (long k : ks) {
      const auto basis = build_basis(X.weights(), k);
      auto rng = stream(c.seed, 0x617667ULL + 100 * m + k);
      double dev = 0.0;
      for (std::size_t i = 0; i < pairs; ++i) {
        const auto x = random_sphere_point(X.n(), rng);
        const auto y = random_sphere_point(X.n(), rng);
        dev = std::max(dev, averaged_kernel(basis, action, x, y).max_deviation);
      }
      worst = std::max(worst, dev);
      rows.push_back({{"m", m}, {"action", w}, {"k", k}, {"max_deviation", dev}});
    }
  }
  rep.results["rows"] = rows;
  rep.verdicts.push_back({"quotient-avg", "two-way quotient kernels agree",
                          {check("max_deviation", worst, "<=", tol_or(c, 1e-10))}, {}});
  return rep;
}

Report cmd_calibrate(const RunConfig& c) {
  const int n = c.n.value_or(1);
  if (n < 1) throw ConfigError("--n must be at least 1");
  const auto X = make_sphere(WeightVector(std::vector<int>(static_cast<std::size_t>(n) + 1, 1)), metric_of(c));
  const auto ks = c.k_list.value_or(range(50, 200, 10));
  const auto cal = calibrate(X, ks);
  Report rep;
  rep.config = {{"n", n}, {"metric", to_string(X.metric())}, {"k_list", ks}};
  rep.results = {{"kappa", cal.kappa}, {"b0_hat", cal.b0_hat}, {"b0_model", cal.b0_model}};
  const double nearest = std::round(4.0 * cal.kappa) / 4.0;
  rep.results["kappa_rounded"] = nearest;
  rep.verdicts.push_back({"calibrate", "kappa is a clean constant",
                          {check("distance_to_quarter_grid", std::abs(cal.kappa - nearest), "<=", tol_or(c, 0.01))},
                          {}});
  return rep;
}

Report cmd_embed(const RunConfig& c) {
  const auto X = make_sphere(weights_or(c, "1,2"), metric_of(c));
  const long K_max = c.k_max.value_or(10);
  const std::size_t pairs = c.samples.value_or(c.quick ? 200 : 500);
  const std::size_t points = c.quick ? 20 : 50;
  const auto sweep = embedding_sweep(X, K_max, pairs, points, c.seed);
  Report rep;
  rep.config = {{"weights", ints(X.weights().values())}, {"K_max", K_max}, {"pairs", pairs},
                {"immersion_points", points}, {"seed", c.seed}};
  Json rows = Json::array();
  for (const auto& r : sweep.rows) {
    rows.push_back({{"K", r.K}, {"k", r.k}, {"scan", scan_json(r.scan)}, {"min_immersion", r.min_immersion},
                    {"good", r.good}});
    double sep = std::numeric_limits<double>::infinity();
    for (const auto& b : r.scan.bins) {
      if (b.pairs > 0) sep = std::min(sep, b.min_separation);
    }
    rep.series.push_back({r.k, sep, r.min_immersion, static_cast<double>(r.scan.base_point_failures)});
  }
  rep.results = {{"rows", rows}, {"k_star", sweep.k_star}};
  rep.verdicts.push_back(
      {"embed", "Kodaira-Bailey map embeds for large k",
       {check("k_star", sweep.k_star < 0 ? std::numeric_limits<double>::infinity() : sweep.k_star, "<=",
              static_cast<double>(K_max)),
        check("sweep_pass", sweep.pass ? 1.0 : 0.0, "==", 1.0)},
       {}});
  return rep;
}

ReductionPair pair_of(const RunConfig& c) {
  return find_reduction(weights_or(c, "1,1,1"), parse_int_list(c.b.value_or("1,-1,0")));
}

Report cmd_reduce(const RunConfig& c) {
  const auto pair = pair_of(c);
  const long k_max = c.k_max.value_or(100);
  const auto cmp = reduction_compare(pair, k_max);
  const auto X = make_sphere(pair.ambient, metric_of(c));
  auto rng = stream(c.seed, 0x726564ULL);
  double min_grad = std::numeric_limits<double>::infinity(), max_mu = 0.0;
  Json samples = Json::array();
  for (int i = 0; i < 20; ++i) {
    const auto x = random_level_point(X, pair.b, rng);
    max_mu = std::max(max_mu, std::abs(moment_map(X, pair.b, x)));
    min_grad = std::min(min_grad, moment_gradient_norm(X, pair.b, x));
    if (i < 3) {
      const auto o = orbit_volume(X, pair.b, x);
      samples.push_back({{"x", point_json(x)}, {"v_eff", o.length}, {"isotropy", o.isotropy}});
    }
  }
  Report rep;
  rep.config = {{"weights", ints(pair.ambient.values())}, {"b", pair.b}, {"k_max", k_max}, {"seed", c.seed}};
  std::size_t mismatches = 0;
  Json rows = Json::array();
  for (const auto& r : cmp.rows) {
    mismatches += r.invariant != r.reduced;
    rows.push_back({{"k", r.k}, {"invariant", r.invariant}, {"reduced", r.reduced}});
    rep.series.push_back({r.k, static_cast<double>(r.invariant), static_cast<double>(r.reduced),
                          static_cast<double>(r.invariant) - static_cast<double>(r.reduced)});
  }
  rep.results = {{"pair", pair_json(pair)},    {"table", rows},
                 {"threshold", cmp.threshold}, {"level_samples", samples},
                 {"max_abs_moment", max_mu},   {"min_moment_gradient", min_grad}};
  rep.verdicts.push_back({"reduce", "invariant and reduced dimensions agree",
                          {check("mismatches", static_cast<double>(mismatches), "==", 0),
                           check("threshold", static_cast<double>(cmp.threshold), "<=", k_max / 2.0),
                           check("min_moment_gradient", min_grad, ">", 0.0)},
                          {}});
  return rep;
}

Report cmd_sigma(const RunConfig& c) {
  const auto pair = pair_of(c);
  const auto ks = c.k_list.value_or(range(2, 20, 2));
  const std::size_t nodes = c.samples.value_or(48);
  Report rep;
  rep.config = {{"weights", ints(pair.ambient.values())}, {"b", pair.b}, {"k_list", ks}, {"radial_nodes", nodes}};
  Json rows = Json::array();
  double smallest = std::numeric_limits<double>::infinity(), stability = 0.0;
  for (long k : ks) {
    const auto s = sigma_map(pair, k, nodes);
    smallest = std::min(smallest, s.smallest);
    stability = std::max(stability, s.stability);
    rows.push_back(sigma_json(s));
    rep.series.push_back({k, s.smallest, s.singular_values.empty() ? 0.0 : s.singular_values.front(),
                          s.projection_residual});
  }
  rep.results = {{"pair", pair_json(pair)}, {"rows", rows}};
  rep.verdicts.push_back({"sigma", "sigma_k is injective and quadrature-stable",
                          {check("min_singular_value", smallest, ">", tol_or(c, 1e-6)),
                           check("max_refinement_change", stability, "<=", 0.01)},
                          {}});
  return rep;
}

using Command = Report (*)(const RunConfig&);

const std::vector<std::pair<std::string, Command>>& command_table() {
  static const std::vector<std::pair<std::string, Command>> table{
      {"dims", cmd_dims},
      {"stratify", cmd_stratify},
      {"levi", cmd_levi},
      {"geom-integral", cmd_geom_integral},
      {"integrate-orbifold", cmd_integrate_orbifold},
      {"kernel-diag", cmd_kernel_diag},
      {"kernel-offdiag", cmd_kernel_offdiag},
      {"stratum", cmd_stratum},
      {"quotient-avg", cmd_quotient_avg},
      {"calibrate", cmd_calibrate},
      {"embed", cmd_embed},
      {"reduce", cmd_reduce},
      {"sigma", cmd_sigma},
      {"suite", [](const RunConfig& c) { return acceptance_suite(c.seed, c.quick); }},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : command_table()) out.push_back(name);
    return out;
  }();
  return names;
}

Report run(const RunConfig& config) {
  for (const auto& [name, fn] : command_table()) {
    if (name != config.command) continue;
    const auto start = std::chrono::steady_clock::now();
    Report rep = fn(config);
    rep.command = name;
    if (config.timing) {
      rep.timing_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return rep;
  }
  throw ConfigError("unknown command: " + config.command);
}

}  // namespace szego::lab
