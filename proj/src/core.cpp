#include "szego/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace szego {

WeightVector::WeightVector(std::vector<int> a) : a_(std::move(a)) {
  if (a_.size() < 2) {
    throw ConfigError("weight vector needs at least two entries (n >= 1)");
  }
  for (int w : a_) {
    if (w < 1) throw ConfigError("weights must be positive integers, got " + std::to_string(w));
  }
}

WeightVector WeightVector::parse(const std::string& text) {
  std::vector<int> a;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("malformed weights '" + text + "'");
    }
    if (used != item.size()) throw ConfigError("malformed weights '" + text + "'");
    a.push_back(value);
  }
  return WeightVector(std::move(a));
}

int WeightVector::max() const { return *std::max_element(a_.begin(), a_.end()); }

std::string WeightVector::str() const {
  std::string out = "(";
  for (std::size_t j = 0; j < a_.size(); ++j) {
    if (j) out += ",";
    out += std::to_string(a_[j]);
  }
  return out + ")";
}

namespace {
double norm2(const std::vector<cplx>& z) {
  double s = 0.0;
  for (const auto& c : z) s += std::norm(c);
  return s;
}
}  // namespace

SpherePoint::SpherePoint(std::vector<cplx> z) : z_(std::move(z)) {
  if (z_.size() < 2) throw ConfigError("sphere point needs at least two coordinates");
  if (std::abs(norm2(z_) - 1.0) > 1e-12) {
    throw ConfigError("point is not on the unit sphere");
  }
}

SpherePoint SpherePoint::normalized(std::vector<cplx> z) {
  const double r = std::sqrt(norm2(z));
  if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("cannot normalize a zero vector");
  for (auto& c : z) c /= r;
  return SpherePoint(std::move(z));
}

}  // namespace szego
