#pragma once

#include <complex>
#include <vector>

#include "distq/quadrature.hpp"
#include "distq/random.hpp"

namespace distq {

enum class NoiseKind { Delta, Gaussian, RaisedCosine, Tabulated };

/// Additive observation-noise law W in Y = theta + W.
///
/// `raised_cosine(T)` has density (pi/4) cos(pi (w - T) / 2) on [T-1, T+1],
/// the law under which a threshold at T reproduces the least-favourable
/// sine response. Gaussian support is cut at +/- 8 sigma.
class NoiseModel {
 public:
  static NoiseModel delta();
  static NoiseModel gaussian(double sigma);
  static NoiseModel raised_cosine(double center);
  static NoiseModel tabulated(std::vector<double> nodes, std::vector<double> density);

  NoiseKind kind() const noexcept { return kind_; }
  bool is_delta() const noexcept { return kind_ == NoiseKind::Delta; }
  Interval support() const noexcept { return support_; }
  double sigma() const noexcept { return sigma_; }
  double center() const noexcept { return center_; }

  /// Density; 0 everywhere for the delta law (which has no density).
  double density(double w) const;
  /// P(W <= w).
  double cdf(double w) const;
  /// P(W >= w); differs from 1 - cdf(w) only for the delta law at w = 0.
  double survival(double w) const;
  double quantile(double u) const;
  /// Inverse-CDF draw. The delta law returns 0 without consuming randomness.
  double sample(Rng& rng) const;

  /// Fourier transform P_W(f) = integral p_W(w) exp(-2 pi i f w) dw.
  std::complex<double> fourier(double f) const;

  /// Location Fisher information I* = integral p'^2 / p; +inf when the law
  /// is not regular (delta, raised cosine).
  double location_fisher() const;

  /// Points where the density (or its derivative) is not smooth.
  std::vector<double> breakpoints() const;

  const std::vector<double>& table_nodes() const noexcept { return nodes_; }
  const std::vector<double>& table_density() const noexcept { return dens_; }

 private:
  NoiseModel() = default;

  NoiseKind kind_ = NoiseKind::Delta;
  Interval support_{0.0, 0.0};
  double sigma_ = 0.0;
  double center_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> dens_;
  std::vector<double> cum_;
};

}  // namespace distq
