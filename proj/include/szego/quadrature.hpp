#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "szego/core.hpp"

namespace szego {

enum class QuadratureMethod { montecarlo, product1d };

QuadratureMethod parse_quadrature_method(const std::string& text);
std::string to_string(QuadratureMethod method);

struct QuadratureSpec {
  QuadratureMethod method = QuadratureMethod::montecarlo;
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
};

/// Euclidean volume of the unit sphere S^{2n+1} in C^{n+1}.
double sphere_volume(int n);

/// Gauss-Legendre nodes and weights on [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre01(std::size_t order);

/// Deterministic 64-bit mixer used to derive per-shard RNG seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Worker threads for sample sweeps (SZEGO_THREADS overrides the hardware count).
unsigned worker_threads();

/// Process-wide override of worker_threads(); 0 restores the default.
void set_worker_threads(unsigned threads);

/// Runs body(begin, end) over [0, count) in fixed-size shards, possibly in parallel.
/// Shard boundaries never depend on the thread count.
void for_each_shard(std::size_t count, std::size_t shard_size,
                    const std::function<void(std::size_t shard, std::size_t begin, std::size_t end)>& body);

/// Weighted nodes on S^{2n+1} with respect to the Euclidean surface measure.
///
/// Monte-Carlo nodes are uniform (normalized Gaussian vectors) with weight vol/N.
/// The product rule exists for n = 1: Gauss-Legendre in t = |z_2|^2 times uniform
/// phase grids, using d sigma = (1/2) dt dphi_1 dphi_2.
class SphereRule {
 public:
  SphereRule(int n, const QuadratureSpec& spec);

  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return weights_.size(); }
  bool exact() const noexcept { return exact_; }
  const QuadratureSpec& spec() const noexcept { return spec_; }

  /// Node i as a span of n+1 coordinates.
  std::span<const cplx> point(std::size_t i) const {
    return {points_.data() + i * dim_, dim_};
  }
  SpherePoint sphere_point(std::size_t i) const;
  double weight(std::size_t i) const { return weights_[i]; }

  /// Integral of a real function with standard error (zero for the product rule).
  Estimate integrate(const std::function<double(std::span<const cplx>)>& fn) const;

 private:
  int n_;
  std::size_t dim_;
  QuadratureSpec spec_;
  bool exact_;
  std::vector<cplx> points_;
  std::vector<double> weights_;
};

}  // namespace szego
