#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "distq/fisher.hpp"
#include "distq/prior.hpp"

namespace distq {

/// ceil(log2 D) for D >= 2, in exact integer arithmetic.
std::size_t bits_for_levels(std::size_t levels);

struct RateBudget {
  std::size_t R = 0;
  std::vector<std::size_t> levels;

  /// Sum of ceil(log2 D_i). Throws InvalidLevels if some D_i < 2.
  std::size_t bits_used() const;
};

/// bits_used <= R.
bool check_feasible(const RateBudget& budget);

/// F_b >= I*/2, inclusive up to 1e-9.
bool binary_optimality_condition(double F_b, double I_star);

struct LowSnrReport {
  double ratio = 0.0;      // var_theta / sigma2
  double threshold = 0.0;  // 2 ln(4 / pi)
  bool holds = false;
};

LowSnrReport gaussian_low_snr_test(double var_theta, double sigma2);

/// Information of one sensor that reports which cell of `breakpoints` the
/// Gaussian observation theta + W falls in, averaged over the prior.
double multilevel_fisher(const ParamPrior& prior, double sigma2, const std::vector<double>& breakpoints);

struct MultiLevelDesign {
  std::vector<double> breakpoints;
  double fisher = 0.0;
};

/// D-level threshold quantizer maximising multilevel_fisher, by coordinate
/// descent with a golden-section search per breakpoint.
MultiLevelDesign best_multilevel_quantizer(const ParamPrior& prior, double sigma2, std::size_t levels);

struct RateCandidate {
  std::string name;
  std::vector<std::pair<std::size_t, std::size_t>> groups;  // (levels, sensor count)
};

struct RankedCandidate {
  RateCandidate candidate;
  std::size_t bits_used = 0;
  std::size_t rank = 0;  // 1 = largest F_D
  FisherReport report;
};

/// Scores every candidate under budget R: binary sensors at the
/// threshold-at-mean value, D > 2 sensors at the best D-level threshold
/// partition. Sorted by F_D, descending (stable). InfeasibleCandidate when
/// a candidate needs more than R bits.
std::vector<RankedCandidate> compare_rate_strategies(std::size_t R, const std::vector<RateCandidate>& candidates,
                                                     const ParamPrior& prior, double sigma2);

}  // namespace distq
