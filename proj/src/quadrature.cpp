#include "szego/quadrature.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

namespace szego {

QuadratureMethod parse_quadrature_method(const std::string& text) {
  if (text == "montecarlo" || text == "mc") return QuadratureMethod::montecarlo;
  if (text == "product1d") return QuadratureMethod::product1d;
  throw ConfigError("unknown quadrature method '" + text + "'");
}

std::string to_string(QuadratureMethod method) {
  return method == QuadratureMethod::montecarlo ? "montecarlo" : "product1d";
}

double sphere_volume(int n) { return 2.0 * std::pow(kPi, n + 1) / std::tgamma(n + 1.0); }

GaussRule gauss_legendre01(std::size_t order) {
  if (order == 0) throw ConfigError("Gauss-Legendre order must be positive");
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const auto m = static_cast<int>(order);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= m; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[m - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[m - 1 - i] = 0.5 * w;
  }
  return rule;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {
std::atomic<unsigned> g_thread_override{0};
}  // namespace

void set_worker_threads(unsigned threads) { g_thread_override = threads; }

unsigned worker_threads() {
  if (const unsigned forced = g_thread_override.load(); forced > 0) return forced;
  if (const char* env = std::getenv("SZEGO_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void for_each_shard(std::size_t count, std::size_t shard_size,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  if (count == 0) return;
  const std::size_t shards = (count + shard_size - 1) / shard_size;
  const unsigned threads = std::min<std::size_t>(worker_threads(), shards);
  auto run = [&](unsigned tid) {
    for (std::size_t s = tid; s < shards; s += threads) {
      body(s, s * shard_size, std::min(count, (s + 1) * shard_size));
    }
  };
  if (threads <= 1) {
    run(0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(run, t);
  for (auto& th : pool) th.join();
}

namespace {
constexpr std::size_t kShard = 4096;
}

SphereRule::SphereRule(int n, const QuadratureSpec& spec)
    : n_(n), dim_(static_cast<std::size_t>(n) + 1), spec_(spec) {
  if (n < 1) throw ConfigError("sphere rule needs n >= 1");
  if (spec.samples == 0) throw ConfigError("quadrature needs at least one sample");
  if (spec.method == QuadratureMethod::montecarlo) {
    exact_ = false;
    const std::size_t count = spec.samples;
    points_.resize(count * dim_);
    weights_.assign(count, sphere_volume(n) / static_cast<double>(count));
    for_each_shard(count, kShard, [&](std::size_t shard, std::size_t begin, std::size_t end) {
      std::mt19937_64 rng(splitmix64(spec.seed ^ splitmix64(shard + 1)));
      std::normal_distribution<double> gauss;
      for (std::size_t i = begin; i < end; ++i) {
        double r2 = 0.0;
        cplx* p = points_.data() + i * dim_;
        do {
          r2 = 0.0;
          for (std::size_t j = 0; j < dim_; ++j) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            p[j] = {re, im};
            r2 += re * re + im * im;
          }
        } while (r2 == 0.0);
        const double r = std::sqrt(r2);
        for (std::size_t j = 0; j < dim_; ++j) p[j] /= r;
      }
    });
    return;
  }

  if (n != 1) throw ConfigError("product1d quadrature is only available for n = 1");
  exact_ = true;
  const auto rule = gauss_legendre01(spec.samples);
  const std::size_t phases = spec.samples;
  const double dphi = 2.0 * kPi / static_cast<double>(phases);
  points_.reserve(spec.samples * phases * phases * dim_);
  weights_.reserve(spec.samples * phases * phases);
  for (std::size_t it = 0; it < rule.nodes.size(); ++it) {
    const double t = rule.nodes[it];
    const double r1 = std::sqrt(1.0 - t);
    const double r2 = std::sqrt(t);
    for (std::size_t a = 0; a < phases; ++a) {
      for (std::size_t b = 0; b < phases; ++b) {
        points_.push_back(std::polar(r1, dphi * static_cast<double>(a)));
        points_.push_back(std::polar(r2, dphi * static_cast<double>(b)));
        weights_.push_back(0.5 * rule.weights[it] * dphi * dphi);
      }
    }
  }
}

SpherePoint SphereRule::sphere_point(std::size_t i) const {
  auto p = point(i);
  return SpherePoint::normalized({p.begin(), p.end()});
}

Estimate SphereRule::integrate(const std::function<double(std::span<const cplx>)>& fn) const {
  const std::size_t count = size();
  const std::size_t shards = (count + kShard - 1) / kShard;
  std::vector<double> sums(shards, 0.0), sq(shards, 0.0);
  for_each_shard(count, kShard, [&](std::size_t shard, std::size_t begin, std::size_t end) {
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const double v = fn(point(i));
      s += weights_[i] * v;
      s2 += v * v;
    }
    sums[shard] = s;
    sq[shard] = s2;
  });
  Estimate est;
  double s2 = 0.0;
  for (std::size_t s = 0; s < shards; ++s) {
    est.value += sums[s];
    s2 += sq[s];
  }
  if (!exact_ && count > 1) {
    const double vol = sphere_volume(n_);
    const double mean = est.value / vol;
    const double var = std::max(0.0, (s2 / count - mean * mean) * count / (count - 1.0));
    est.std_error = vol * std::sqrt(var / count);
  }
  return est;
}

}  // namespace szego
