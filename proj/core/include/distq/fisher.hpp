#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "distq/noise.hpp"
#include "distq/prior.hpp"
#include "distq/quantizer.hpp"

namespace distq {

/// Posterior Fisher information split into its data, FC-observation and
/// prior parts.
struct FisherReport {
  double F_D = 0.0;
  double F_0 = 0.0;
  double F_P = 0.0;
  double F_total = 0.0;
  double pcrlb = 0.0;
  std::vector<double> per_sensor;

  /// Fills F_D, F_total and pcrlb from the other fields.
  static FisherReport assemble(std::vector<double> per_sensor, double F_0, double F_P);

  std::string csv_header() const;
  std::string csv_row() const;
};

/// I = g'^2 / (g (1 - g)). Throws DegenerateResponse when g <= 1e-12 or
/// g >= 1 - 1e-12.
double fi_pointwise(double g, double gprime);

/// I(theta) at every node of the curve.
///
/// A single end node where g hits 0 or 1 takes the curve's known endpoint
/// limit when it has one and is otherwise extrapolated quadratically from the
/// three neighbouring nodes. Longer degenerate runs at either end are
/// saturated tails: g'^2 / (g (1 - g)) is used unguarded there, and 0 where
/// g is exactly 0 or 1. Any other degenerate node throws DegenerateResponse.
std::vector<double> information_profile(const ResponseCurve& curve);

/// F = N E[I(theta)] + F0 + F_P for N identical sensors.
FisherReport posterior_fisher(const ResponseCurve& curve, const ParamPrior& prior, std::size_t N,
                              double F0 = 0.0);

/// Location information of one Gaussian observation, 1/sigma^2.
double gaussian_single_obs_fisher(double sigma2);

/// Information of one sensor thresholding a Gaussian observation at the
/// prior mean:
/// (1 / (2 pi sigma^2)) E[exp(-(theta - mu)^2 / sigma^2) / (Q(x) Q(-x))],
/// x = (mu - theta) / sigma.
double gaussian_binary_threshold_fisher(const ParamPrior& prior, double sigma2);

/// 1' Sigma^{-1} 1 for N observations with variance sigma2 and common
/// correlation rho, i.e. N / (sigma2 (1 + (N - 1) rho)).
double equicorrelated_fisher(std::size_t N, double sigma2, double rho);

enum class DataProcessingStatus { Holds, Violated, NotApplicable };

struct DataProcessingReport {
  double F_i = 0.0;
  double I_star = 0.0;
  DataProcessingStatus status = DataProcessingStatus::NotApplicable;
  bool holds() const noexcept { return status == DataProcessingStatus::Holds; }
};

/// Compares one sensor's information E[I(theta)] with the unquantised
/// location information I*. An infinite I* (e.g. noiseless observation)
/// gives NotApplicable.
DataProcessingReport data_processing_check(const ResponseCurve& curve, const ParamPrior& prior,
                                           double i_star);
DataProcessingReport data_processing_check(const ResponseCurve& curve, const ParamPrior& prior,
                                           const NoiseModel& noise);

}  // namespace distq
