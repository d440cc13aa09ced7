#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "szego/core.hpp"
#include "szego/geometry.hpp"
#include "szego/hardy.hpp"

namespace szego {

struct KernelValue {
  cplx value;
  long k = 0;
  SpherePoint x;
  SpherePoint y;
};

/// Pi_k(x, y) = sum_alpha f_alpha(x) conj(f_alpha(y)).
KernelValue szego_eval(const MonomialBasis& basis, const SpherePoint& x, const SpherePoint& y);

/// max over basis elements f of |int Pi_k(x, .) f dV - f(x)|, dV = vol_density d sigma.
double reproducing_check(const ModelSpace& X, const MonomialBasis& basis, const SpherePoint& x,
                         const QuadratureSpec& quad);

struct DiagonalSeries {
  SpherePoint x;
  int stratum = 1;
  std::vector<std::pair<long, double>> entries;  // (k, Pi_k(x, x))
};

DiagonalSeries diagonal_series(const ModelSpace& X, const SpherePoint& x, const std::vector<long>& ks);

struct FitResult {
  double b0_hat = 0.0;
  /// Model value b0 k^n (1 + sum c_j / k^j).
  double model(long k, int n) const;
  double correction = 0.0;           // c_1
  std::vector<double> corrections;   // c_1..c_n in b0 k^n (1 + c_1/k + ... + c_n/k^n)
  double order_hat = 0.0;   // slope of log Pi_k against log k
  double residual = 0.0;    // max relative residual of the fit
  double b0_model = 0.0;    // (1/2) pi^{-n-1} |det L_x|
  int multiplicity = 1;     // isotropy order of x: the j-sum contributes this many equal terms
  double kappa_hat = 0.0;   // b0_hat / (multiplicity * b0_model)
  std::size_t used = 0;
};

/// Least-squares fit Pi_k(x,x) / vol_density = b0 k^n (1 + c_1/k + ... + c_n/k^n) over entries with
/// stratum | k. Throws NumericalError if fewer than six usable entries or the
/// relative residual exceeds 1e-2.
FitResult fit_leading(const DiagonalSeries& series, const LeviData& levi, int n);

struct SelectionRow {
  long k = 0;
  double value = 0.0;
  bool predicted_zero = false;
};

struct SelectionReport {
  int ell = 1;
  int ell0 = 1;
  std::vector<SelectionRow> rows;
  std::size_t forbidden = 0;             // k with no monomial supported on supp(x)
  std::size_t forbidden_violations = 0;  // of those, |Pi_k(x,x)| > 1e-14
  std::size_t admissible_zeros = 0;      // admissible k with Pi_k(x,x) == 0
  double max_forbidden_value = 0.0;
  double fluctuation = 0.0;              // (max - min) / mean of Pi_k/k^n over the top tenth
  double stratum_limit = 0.0;            // extrapolated lim Pi_k/k^n along ell | k
  double generic_limit = 0.0;            // ell0 (1/2) pi^{-n-1} |det L| dV/dsigma at x
  double generic_limit_nearby = 0.0;     // extrapolated limit at a nearby regular point
  double stratum_ratio = 0.0;            // stratum_limit / generic_limit
};

/// Fourier selection at a singular point: exact zeros off the support semigroup,
/// convergence of Pi_k/k^n along admissible k.
SelectionReport stratum_selection(const ModelSpace& X, const SpherePoint& x, long k_max);

struct DecayFit {
  double orbit_distance = 0.0;
  double rate = 0.0;  // c in log(|Pi_k(x,y)| / k^n) = log C - c k
  double log_c = 0.0;
  double r_squared = 0.0;
  bool infinite_rate = false;  // kernel vanishes identically on the list
  double sandwich_lo = 0.0;    // d^2 / C0
  double sandwich_hi = 0.0;    // C0 d^2
  bool within_sandwich = false;
  std::vector<std::pair<long, double>> samples;  // (k, |Pi_k(x,y)|)
};

inline constexpr double kDecayConstant = 10.0;
inline constexpr double kMinOrbitDistance = 0.05;

DecayFit offdiag_decay(const ModelSpace& X, const SpherePoint& x, const SpherePoint& y, const std::vector<long>& ks);

/// Finite cyclic group Z_m generated by a unitary matrix on C^{n+1}.
struct CyclicAction {
  int m = 1;
  Eigen::MatrixXcd generator;

  /// z_j -> e^{2 pi i w_j / m} z_j.
  static CyclicAction diagonal(int m, const std::vector<int>& w);

  /// Recovers integer weights when the generator is diagonal.
  std::optional<std::vector<int>> diagonal_weights() const;
};

struct AveragedKernel {
  cplx double_sum;  // (1/m) sum_{g,h} Pi_k(h x, g y)
  cplx single_sum;  // sum_g Pi_k(x, g y)
  cplx invariant;   // m * Pi_k^{inv}(x, y) from the invariant sub-basis
  double max_deviation = 0.0;
};

/// Throws ConfigError if the action is not a unitary Z_m commuting with the circle action.
AveragedKernel averaged_kernel(const MonomialBasis& basis, const CyclicAction& action, const SpherePoint& x,
                               const SpherePoint& y);

struct Calibration {
  double kappa = 0.0;
  double b0_hat = 0.0;
  double b0_model = 0.0;
};

/// kappa = b0_hat / b0_model on the round sphere. Throws NumericalError unless kappa
/// is within 0.02 of a multiple of 1/4.
Calibration calibrate(const ModelSpace& round, const std::vector<long>& ks);
Calibration calibrate(const ModelSpace& round);

}  // namespace szego
