#include "distq/noise.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "distq/error.hpp"

namespace distq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTailSigmas = 8.0;

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, "prob_model::NoiseModel", what);
}

}  // namespace

NoiseModel NoiseModel::delta() { return NoiseModel(); }

NoiseModel NoiseModel::gaussian(double sigma) {
  require(sigma > 0.0 && std::isfinite(sigma), "gaussian noise needs sigma > 0");
  NoiseModel n;
  n.kind_ = NoiseKind::Gaussian;
  n.sigma_ = sigma;
  n.support_ = {-kTailSigmas * sigma, kTailSigmas * sigma};
  return n;
}

NoiseModel NoiseModel::raised_cosine(double center) {
  require(std::isfinite(center), "raised-cosine centre must be finite");
  NoiseModel n;
  n.kind_ = NoiseKind::RaisedCosine;
  n.center_ = center;
  n.support_ = {center - 1.0, center + 1.0};
  return n;
}

NoiseModel NoiseModel::tabulated(std::vector<double> nodes, std::vector<double> density) {
  require(nodes.size() >= 2 && nodes.size() == density.size(),
          "tabulated noise needs at least two (w, density) pairs");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    require(nodes[i] > nodes[i - 1], "tabulated noise nodes must be strictly increasing");
  for (double d : density) require(d >= 0.0 && std::isfinite(d), "tabulated density must be nonnegative");
  double area = 0.0;
  for (std::size_t i = 1; i < nodes.size(); ++i)
    area += 0.5 * (density[i] + density[i - 1]) * (nodes[i] - nodes[i - 1]);
  require(area > 0.0, "tabulated noise density has zero mass");
  for (double& d : density) d /= area;
  NoiseModel n;
  n.kind_ = NoiseKind::Tabulated;
  n.cum_.assign(nodes.size(), 0.0);
  for (std::size_t i = 1; i < nodes.size(); ++i)
    n.cum_[i] = n.cum_[i - 1] + 0.5 * (density[i] + density[i - 1]) * (nodes[i] - nodes[i - 1]);
  n.cum_.back() = 1.0;
  n.support_ = {nodes.front(), nodes.back()};
  n.nodes_ = std::move(nodes);
  n.dens_ = std::move(density);
  return n;
}

double NoiseModel::density(double w) const {
  switch (kind_) {
    case NoiseKind::Delta:
      return 0.0;
    case NoiseKind::Gaussian: {
      const double z = w / sigma_;
      return std::exp(-0.5 * z * z) / (sigma_ * std::sqrt(2.0 * kPi));
    }
    case NoiseKind::RaisedCosine: {
      const double x = w - center_;
      if (x < -1.0 || x > 1.0) return 0.0;
      return 0.25 * kPi * std::cos(0.5 * kPi * x);
    }
    case NoiseKind::Tabulated: {
      if (w < nodes_.front() || w > nodes_.back()) return 0.0;
      auto it = std::upper_bound(nodes_.begin(), nodes_.end(), w);
      std::size_t i = std::clamp<std::size_t>(it - nodes_.begin(), 1, nodes_.size() - 1);
      const double s = (w - nodes_[i - 1]) / (nodes_[i] - nodes_[i - 1]);
      return dens_[i - 1] + s * (dens_[i] - dens_[i - 1]);
    }
  }
  return 0.0;
}

double NoiseModel::cdf(double w) const {
  switch (kind_) {
    case NoiseKind::Delta:
      return w >= 0.0 ? 1.0 : 0.0;
    case NoiseKind::Gaussian:
      return 0.5 * std::erfc(-w / (sigma_ * std::numbers::sqrt2));
    case NoiseKind::RaisedCosine: {
      const double x = w - center_;
      if (x <= -1.0) return 0.0;
      if (x >= 1.0) return 1.0;
      // sin^2 form of (1/2)(1 + sin(pi x / 2)), exact near both ends
      const double s = std::sin(0.25 * kPi * (x + 1.0));
      return s * s;
    }
    case NoiseKind::Tabulated: {
      if (w <= nodes_.front()) return 0.0;
      if (w >= nodes_.back()) return 1.0;
      auto it = std::upper_bound(nodes_.begin(), nodes_.end(), w);
      const std::size_t i = it - nodes_.begin();
      const double dx = w - nodes_[i - 1];
      const double slope = (dens_[i] - dens_[i - 1]) / (nodes_[i] - nodes_[i - 1]);
      return cum_[i - 1] + dens_[i - 1] * dx + 0.5 * slope * dx * dx;
    }
  }
  return 0.0;
}

double NoiseModel::survival(double w) const {
  switch (kind_) {
    case NoiseKind::Delta:
      return w <= 0.0 ? 1.0 : 0.0;
    case NoiseKind::Gaussian:
      return 0.5 * std::erfc(w / (sigma_ * std::numbers::sqrt2));
    case NoiseKind::RaisedCosine: {
      const double x = w - center_;
      if (x <= -1.0) return 1.0;
      if (x >= 1.0) return 0.0;
      const double s = std::sin(0.25 * kPi * (1.0 - x));
      return s * s;
    }
    case NoiseKind::Tabulated:
      return 1.0 - cdf(w);
  }
  return 0.0;
}

double NoiseModel::quantile(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  switch (kind_) {
    case NoiseKind::Delta:
      return 0.0;
    case NoiseKind::Gaussian: {
      static const boost::math::normal_distribution<double> standard;
      return sigma_ * boost::math::quantile(standard, std::clamp(u, 1e-300, 1.0 - 1e-16));
    }
    case NoiseKind::RaisedCosine:
      return center_ + (2.0 / kPi) * std::asin(2.0 * u - 1.0);
    case NoiseKind::Tabulated: {
      auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
      std::size_t i = std::clamp<std::size_t>(it - cum_.begin(), 1, nodes_.size() - 1);
      const double d0 = dens_[i - 1];
      const double width = nodes_[i] - nodes_[i - 1];
      const double s = (dens_[i] - d0) / width;
      const double r = u - cum_[i - 1];
      double x;
      if (std::abs(s) * width < 1e-12 * std::max(d0, 1e-300)) {
        x = d0 > 0.0 ? r / d0 : 0.0;
      } else {
        x = 2.0 * r / (d0 + std::sqrt(std::max(d0 * d0 + 2.0 * s * r, 0.0)));
      }
      return nodes_[i - 1] + std::clamp(x, 0.0, width);
    }
  }
  return 0.0;
}

double NoiseModel::sample(Rng& rng) const {
  if (kind_ == NoiseKind::Delta) return 0.0;
  return quantile(rng.uniform());
}

std::complex<double> NoiseModel::fourier(double f) const {
  switch (kind_) {
    case NoiseKind::Delta:
      return 1.0;
    case NoiseKind::Gaussian:
      return std::exp(-2.0 * kPi * kPi * sigma_ * sigma_ * f * f);
    case NoiseKind::RaisedCosine: {
      // cos(2 pi f) / (1 - 16 f^2), with the removable point f = +/- 1/4.
      const double den = 1.0 - 16.0 * f * f;
      const double mag = std::abs(den) < 1e-12 ? 0.25 * kPi : std::cos(2.0 * kPi * f) / den;
      return mag * std::polar(1.0, -2.0 * kPi * f * center_);
    }
    case NoiseKind::Tabulated: {
      std::complex<double> acc = 0.0;
      for (std::size_t i = 1; i < nodes_.size(); ++i) {
        const double a = nodes_[i - 1], b = nodes_[i];
        const double re = gauss_legendre(
            [&](double w) { return density(w) * std::cos(2.0 * kPi * f * w); }, a, b, 16);
        const double im = gauss_legendre(
            [&](double w) { return -density(w) * std::sin(2.0 * kPi * f * w); }, a, b, 16);
        acc += std::complex<double>(re, im);
      }
      return acc;
    }
  }
  return 0.0;
}

double NoiseModel::location_fisher() const {
  switch (kind_) {
    case NoiseKind::Delta:
    case NoiseKind::RaisedCosine:
      return std::numeric_limits<double>::infinity();
    case NoiseKind::Gaussian:
      return 1.0 / (sigma_ * sigma_);
    case NoiseKind::Tabulated: {
      double acc = 0.0;
      for (std::size_t i = 1; i < nodes_.size(); ++i) {
        const double a = nodes_[i - 1], b = nodes_[i];
        const double slope = (dens_[i] - dens_[i - 1]) / (b - a);
        if (slope == 0.0) continue;
        // integral of slope^2 / p over a linear cell
        if (dens_[i] <= 0.0 || dens_[i - 1] <= 0.0) return std::numeric_limits<double>::infinity();
        acc += slope * (std::log(dens_[i]) - std::log(dens_[i - 1]));
      }
      return acc;
    }
  }
  return 0.0;
}

std::vector<double> NoiseModel::breakpoints() const {
  switch (kind_) {
    case NoiseKind::Delta:
      return {0.0};
    case NoiseKind::Gaussian:
      return {support_.lo, support_.hi};
    case NoiseKind::RaisedCosine:
      return {support_.lo, support_.hi};
    case NoiseKind::Tabulated:
      return nodes_;
  }
  return {};
}

}  // namespace distq
