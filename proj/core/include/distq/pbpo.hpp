#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "distq/hci.hpp"
#include "distq/random.hpp"
#include "distq/table.hpp"

namespace distq {

enum class CostKind { SquaredError, AbsoluteError, Constant };
enum class EstimatorKind {
  Table,  // fixed table over outcome tuples
  Mmse,   // posterior mean, recomputed for every strategy
};

/// Finite estimation problem.
///
/// Without a lambda table, `observation[i]` holds p(y_i | theta) (rows
/// indexed by theta). With one, it holds p(y_i | lambda) and the sensors are
/// conditionally independent given lambda. Outcome tuples (u_1, ..., u_N)
/// are indexed in mixed radix with sensor 1 most significant; symbols are
/// 0-based internally.
struct DiscreteProblem {
  std::vector<double> theta;
  std::vector<double> prior;
  std::optional<Table> lambda_given_theta;
  std::vector<Table> observation;
  std::vector<std::size_t> levels;
  EstimatorKind estimator = EstimatorKind::Mmse;
  std::vector<double> estimator_table;
  CostKind cost = CostKind::SquaredError;
  double constant_cost = 1.0;

  std::size_t sensors() const noexcept { return observation.size(); }
  bool dependent() const noexcept { return lambda_given_theta.has_value(); }
  std::size_t y_count(std::size_t sensor) const { return observation.at(sensor).cols(); }
  std::size_t outcome_count() const;

  /// Throws InvalidArgument (or InvalidLevels) on a malformed problem.
  void validate() const;

  static DiscreteProblem from_hci(const HciModel& model, std::vector<std::size_t> levels);
};

/// Per-sensor maps from y index to symbol (0-based).
struct Strategy {
  std::vector<std::vector<std::size_t>> rules;

  bool operator==(const Strategy&) const = default;
  /// Every sensor sends symbol 0 for every y.
  static Strategy constant(const DiscreteProblem& p);
  /// Uniformly random symbols.
  static Strategy random(const DiscreteProblem& p, Rng& rng);
  /// CSV rows (sensor, y_index, symbol) with 1-based indices and symbols.
  std::string csv() const;
};

/// Exact E[C(theta_hat(U), theta)].
double bayes_risk(const DiscreteProblem& p, const Strategy& s);

/// Posterior-mean estimate for every outcome tuple (the prior mean where an
/// outcome has zero probability).
std::vector<double> mmse_table(const DiscreteProblem& p, const Strategy& s);

/// Best response of sensor i with the other rules held fixed; ties go to
/// the smallest symbol. Requires a problem without lambda table.
std::vector<std::size_t> best_response_independent(const DiscreteProblem& p, const Strategy& s,
                                                   std::size_t sensor);

/// Same update averaged over (theta, lambda); requires a lambda table.
std::vector<std::size_t> best_response_dependent(const DiscreteProblem& p, const Strategy& s,
                                                 std::size_t sensor);

enum class SweepMode { Independent, Dependent };

struct SweepResult {
  Strategy strategy;
  double risk = 0.0;
  /// Risk of the initial strategy followed by the risk after every update.
  std::vector<double> trace;
  std::size_t sweeps = 0;
  bool converged = false;  // false: stopped at the sweep limit
};

/// Cycles through sensors 1..N applying best responses until a full sweep
/// changes no rule or `max_sweeps` is reached.
SweepResult pbpo_sweep(const DiscreteProblem& p, Strategy init, SweepMode mode,
                       std::size_t max_sweeps = 100);

/// Best of a sweep from the constant strategy and `starts - 1` sweeps from
/// random strategies drawn from `seed`.
SweepResult pbpo_multistart(const DiscreteProblem& p, SweepMode mode, std::size_t starts,
                            std::uint64_t seed, std::size_t max_sweeps = 100);

struct BruteForceResult {
  Strategy strategy;
  double risk = 0.0;
  std::uint64_t evaluated = 0;
};

/// Exhaustive search; ties (within 1e-12 relative) go to the
/// lexicographically smallest strategy. TooLarge above 1e7 strategies. The
/// result does not depend on `threads`.
BruteForceResult brute_force(const DiscreteProblem& p, unsigned threads = 1);

/// Data part of the Fisher information of a strategy, sum over sensors of
/// sum_theta p(theta) sum_u (dP(u|theta)/dtheta)^2 / P(u|theta), with the
/// derivative taken by finite differences over the theta grid.
double strategy_fisher(const DiscreteProblem& p, const Strategy& s);

struct GroupingReport {
  bool identical_optimal = false;
  double identical_best = 0.0;  // best F_D with one rule per level count
  double free_best = 0.0;       // best F_D over all strategies
  Strategy identical_strategy;
  Strategy free_strategy;
  std::size_t distinct_rules = 0;  // in free_strategy
};

/// Compares the best strategy that gives every sensor with the same level
/// count the same rule against the unrestricted optimum. Requires sensors
/// that are i.i.d. given theta.
GroupingReport grouping_check(const DiscreteProblem& p);

struct CounterexampleReport {
  std::size_t n = 0;
  std::size_t sensors = 0;
  double identical_best_risk = 0.0;
  double nonidentical_risk = 0.0;
  double margin = 0.0;
  Strategy identical_strategy;
  Strategy bisection_strategy;
  DiscreteProblem problem;
};

/// N = 2^n - 1 binary sensors observing theta through one common,
/// deterministic noise value (lambda = theta + v, v = 0) on a 16-point grid
/// of cell centres in [-1, 1]. Compares the best strategy in which all
/// sensors share a rule with the bisection strategy whose thresholds sit on
/// the 2^n - 1 interior region boundaries, both under the MMSE estimator.
CounterexampleReport dependence_counterexample(std::size_t n);

struct RandomProblemSpec {
  std::size_t sensors = 2;
  std::size_t theta_points = 4;
  std::size_t y_points = 4;
  std::size_t levels = 2;
  std::size_t lambda_points = 0;  // 0: conditionally independent given theta
  bool identical_sensors = false;
  EstimatorKind estimator = EstimatorKind::Mmse;
};

/// Seeded random instance: theta grid on [-1, 1], Dirichlet-like prior and
/// conditional tables. Fixed-table estimators draw theta_hat uniformly in
/// [-1, 1].
DiscreteProblem random_problem(const RandomProblemSpec& spec, Rng& rng);

}  // namespace distq
