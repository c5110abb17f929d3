#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "distq/quadrature.hpp"
#include "distq/random.hpp"

namespace distq {

enum class PriorKind { Uniform, Gaussian, Tabulated };

/// Nodes and normalised weights for expectations E[f(theta)].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  double expect(const std::function<double(double)>& f) const;
};

/// Prior law of the scalar parameter.
///
/// Gaussian priors are unbounded unless a truncation interval is given; for
/// quadrature an unbounded Gaussian is cut at mean +/- 8 sigma. A tabulated
/// prior is piecewise linear between its nodes; a single-node table is a
/// point mass.
class ParamPrior {
 public:
  static ParamPrior uniform(double lo, double hi);
  static ParamPrior gaussian(double mean, double variance);
  static ParamPrior gaussian(double mean, double variance, Interval truncation);
  static ParamPrior tabulated(std::vector<double> nodes, std::vector<double> density);
  static ParamPrior point_mass(double at);

  PriorKind kind() const noexcept { return kind_; }
  bool bounded() const noexcept { return kind_ != PriorKind::Gaussian || truncation_.has_value(); }
  bool is_point_mass() const noexcept { return kind_ == PriorKind::Tabulated && nodes_.size() == 1; }

  /// Integration range: the true support when bounded, mean +/- 8 sigma otherwise.
  Interval support() const noexcept { return support_; }

  double density(double theta) const;
  double density_derivative(double theta) const;
  /// d^2/dtheta^2 of ln p(theta); -inf where the density vanishes.
  double log_curvature(double theta) const;

  double mean() const noexcept { return mean_; }
  double variance() const noexcept { return variance_; }

  double cdf(double theta) const;
  double quantile(double u) const;
  /// Inverse-CDF draw; consumes one uniform variate (none for a point mass).
  double sample(Rng& rng) const;

  /// Simpson rule over the support (single node for a point mass).
  QuadratureRule quadrature(std::size_t nodes = kDefaultNodes) const;
  double expect(const std::function<double(double)>& f, std::size_t nodes = kDefaultNodes) const;

  /// Gaussian parameters of the untruncated law (Gaussian kind only).
  double gaussian_mean() const noexcept { return g_mean_; }
  double gaussian_sigma() const noexcept { return g_sigma_; }
  const std::optional<Interval>& truncation() const noexcept { return truncation_; }
  const std::vector<double>& table_nodes() const noexcept { return nodes_; }
  const std::vector<double>& table_density() const noexcept { return dens_; }

 private:
  ParamPrior() = default;
  void finish_moments();

  PriorKind kind_ = PriorKind::Uniform;
  Interval support_{};
  double mean_ = 0.0;
  double variance_ = 0.0;
  double g_mean_ = 0.0;
  double g_sigma_ = 1.0;
  double trunc_mass_ = 1.0;
  double trunc_cdf_lo_ = 0.0;
  std::optional<Interval> truncation_;
  std::vector<double> nodes_;
  std::vector<double> dens_;
  std::vector<double> cum_;  // CDF at tabulated nodes
};

/// Prior contribution F_P = -E[d^2 ln p / dtheta^2] over the open interior of
/// the support. Throws UnboundedCurvature when a tabulated prior has a cell
/// where the second difference of ln p diverges.
double prior_fisher(const ParamPrior& prior);

}  // namespace distq
