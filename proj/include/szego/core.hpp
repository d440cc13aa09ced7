#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace szego {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Coordinates with modulus at or below this count as zero for stratum membership.
inline constexpr double kSupportThreshold = 1e-9;

enum class ErrorKind { config, numerical, unsupported };

/// Base exception. The kind decides the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorKind::numerical, what) {}
};

class UnsupportedError : public Error {
 public:
  explicit UnsupportedError(const std::string& what) : Error(ErrorKind::unsupported, what) {}
};

/// Circle-action weights (a_0, ..., a_n), all >= 1, at least two entries.
class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(std::vector<int> a);

  /// Parses "1,2,3".
  static WeightVector parse(const std::string& text);

  int n() const noexcept { return static_cast<int>(a_.size()) - 1; }
  std::size_t size() const noexcept { return a_.size(); }
  int operator[](std::size_t j) const { return a_[j]; }
  std::span<const int> values() const noexcept { return a_; }
  int max() const;
  std::string str() const;

  bool operator==(const WeightVector&) const = default;

 private:
  std::vector<int> a_;
};

/// Unit vector in C^{n+1}.
class SpherePoint {
 public:
  SpherePoint() = default;

  /// Validates |z| = 1 within 1e-12.
  explicit SpherePoint(std::vector<cplx> z);

  /// Scales a nonzero vector onto the sphere.
  static SpherePoint normalized(std::vector<cplx> z);

  std::size_t size() const noexcept { return z_.size(); }
  const cplx& operator[](std::size_t j) const { return z_[j]; }
  std::span<const cplx> coords() const noexcept { return z_; }

 private:
  std::vector<cplx> z_;
};

/// Value with a one-sigma error estimate (zero for deterministic rules).
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

}  // namespace szego
