#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "distq/noise.hpp"
#include "distq/prior.hpp"
#include "distq/quantizer.hpp"

namespace distq {

/// (2/pi) asin(2 k / N - 1).
double mle_estimate(std::size_t ones, std::size_t N);

struct SimConfig {
  ParamPrior prior = ParamPrior::uniform(-1.0, 1.0);
  NoiseModel noise = NoiseModel::raised_cosine(0.0);
  BinaryQuantizer quantizer = BinaryQuantizer::threshold(0.0);
  std::vector<std::size_t> sensors;  // N ladder
  std::size_t runs = 5000;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  /// 2^4, ..., 2^14.
  static std::vector<std::size_t> default_ladder();
};

struct SimRow {
  std::size_t N = 0;
  double mse = 0.0;
  double standard_error = 0.0;
  double pcrlb_limit = 0.0;  // 4 / (N pi^2)
};

struct SimResult {
  std::vector<SimRow> rows;
  std::string csv() const;  // N,mse,stderr,pcrlb_limit
};

/// Squared error of one run: theta from the prior, N noisy observations
/// quantized independently, fused by mle_estimate. Run r at ladder index j
/// draws from Rng(seed).split(j).split(r) only.
double simulate_run(const SimConfig& cfg, std::size_t ladder_index, std::size_t run);

/// Mean squared error and its standard error per N. The result does not
/// depend on cfg.threads. ConfigDomainMismatch unless the prior support lies
/// in [-1, 1].
SimResult run_mse_experiment(const SimConfig& cfg);

struct CurvePoint {
  double rho = 0.0;
  double fisher = 0.0;
};

std::vector<CurvePoint> equicorrelated_curve(std::size_t N, double sigma2, const std::vector<double>& rhos);
std::string equicorrelated_csv(const std::vector<CurvePoint>& curve);

}  // namespace distq
