#include "distq/pbpo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <thread>

#include "distq/csv.hpp"
#include "distq/error.hpp"

namespace distq {

namespace {

constexpr std::uint64_t kBruteForceLimit = 10'000'000;
constexpr double kTieTol = 1e-12;

// (lambda row, weight) pairs for each theta. Without a lambda table the
// observation rows are indexed by theta itself.
using LambdaView = std::vector<std::vector<std::pair<std::size_t, double>>>;

LambdaView lambda_view(const DiscreteProblem& p) {
  LambdaView view(p.theta.size());
  for (std::size_t t = 0; t < p.theta.size(); ++t) {
    if (!p.dependent()) {
      view[t].push_back({t, 1.0});
      continue;
    }
    const Table& lt = *p.lambda_given_theta;
    for (std::size_t l = 0; l < lt.cols(); ++l)
      if (lt(t, l) != 0.0) view[t].push_back({l, lt(t, l)});
  }
  return view;
}

// P(u | row) for one sensor, rows as in the observation table.
Table symbol_given_row(const DiscreteProblem& p, const Strategy& s, std::size_t sensor) {
  const Table& obs = p.observation[sensor];
  const auto& rule = s.rules[sensor];
  Table out(obs.rows(), p.levels[sensor]);
  for (std::size_t r = 0; r < obs.rows(); ++r)
    for (std::size_t y = 0; y < obs.cols(); ++y) out(r, rule[y]) += obs(r, y);
  return out;
}

// Distribution over outcome tuples given one observation row.
void tuple_distribution(const std::vector<Table>& symbol, const std::vector<std::size_t>& levels,
                        std::size_t row, std::vector<double>& dist, std::vector<double>& scratch) {
  dist.assign(1, 1.0);
  for (std::size_t j = 0; j < symbol.size(); ++j) {
    scratch.assign(dist.size() * levels[j], 0.0);
    for (std::size_t k = 0; k < dist.size(); ++k)
      for (std::size_t u = 0; u < levels[j]; ++u) scratch[k * levels[j] + u] = dist[k] * symbol[j](row, u);
    dist.swap(scratch);
  }
}

// P(theta, u) as a |theta| x outcome_count table.
Table joint(const DiscreteProblem& p, const Strategy& s, const LambdaView& view) {
  std::vector<Table> symbol;
  for (std::size_t i = 0; i < p.sensors(); ++i) symbol.push_back(symbol_given_row(p, s, i));
  Table out(p.theta.size(), p.outcome_count());
  std::vector<double> dist, scratch;
  for (std::size_t t = 0; t < p.theta.size(); ++t)
    for (const auto& [row, w] : view[t]) {
      tuple_distribution(symbol, p.levels, row, dist, scratch);
      const double scale = p.prior[t] * w;
      for (std::size_t k = 0; k < dist.size(); ++k) out(t, k) += scale * dist[k];
    }
  return out;
}

std::vector<double> posterior_mean(const DiscreteProblem& p, const Table& j) {
  double prior_mean = 0.0;
  for (std::size_t t = 0; t < p.theta.size(); ++t) prior_mean += p.prior[t] * p.theta[t];
  std::vector<double> est(j.cols(), prior_mean);
  for (std::size_t k = 0; k < j.cols(); ++k) {
    double mass = 0.0, first = 0.0;
    for (std::size_t t = 0; t < j.rows(); ++t) {
      mass += j(t, k);
      first += j(t, k) * p.theta[t];
    }
    if (mass > 0.0) est[k] = first / mass;
  }
  return est;
}

double cost(const DiscreteProblem& p, double estimate, double theta) {
  switch (p.cost) {
    case CostKind::SquaredError: return (estimate - theta) * (estimate - theta);
    case CostKind::AbsoluteError: return std::abs(estimate - theta);
    case CostKind::Constant: return p.constant_cost;
  }
  return 0.0;
}

std::vector<double> estimates(const DiscreteProblem& p, const Strategy& s, const Table& j) {
  if (p.estimator == EstimatorKind::Table) return p.estimator_table;
  (void)s;
  return posterior_mean(p, j);
}

double risk_from_joint(const DiscreteProblem& p, const Table& j, const std::vector<double>& est) {
  double risk = 0.0;
  for (std::size_t t = 0; t < j.rows(); ++t)
    for (std::size_t k = 0; k < j.cols(); ++k)
      if (j(t, k) != 0.0) risk += j(t, k) * cost(p, est[k], p.theta[t]);
  return risk;
}

void check_strategy(const DiscreteProblem& p, const Strategy& s) {
  if (s.rules.size() != p.sensors())
    throw Error(ErrorKind::InvalidArgument, "pbpo::Strategy", "one rule per sensor required");
  for (std::size_t i = 0; i < p.sensors(); ++i) {
    if (s.rules[i].size() != p.y_count(i))
      throw Error(ErrorKind::InvalidArgument, "pbpo::Strategy",
                  "rule of sensor " + std::to_string(i + 1) + " is not total over its y grid");
    for (std::size_t d : s.rules[i])
      if (d >= p.levels[i])
        throw Error(ErrorKind::InvalidArgument, "pbpo::Strategy",
                    "symbol out of range for sensor " + std::to_string(i + 1));
  }
}

std::vector<std::size_t> best_response(const DiscreteProblem& p, const Strategy& s,
                                       std::size_t sensor, const LambdaView& view) {
  check_strategy(p, s);
  if (sensor >= p.sensors())
    throw Error(ErrorKind::InvalidArgument, "pbpo::best_response", "sensor index out of range");
  const std::size_t N = p.sensors();
  const std::size_t Di = p.levels[sensor];
  std::size_t stride = 1;
  for (std::size_t j = sensor + 1; j < N; ++j) stride *= p.levels[j];

  const Table j = joint(p, s, view);
  const std::vector<double> est = estimates(p, s, j);

  // Distribution over the other sensors' symbols, with sensor i's slot
  // pinned to 0 so that index + d * stride selects symbol d.
  std::vector<Table> symbol;
  std::vector<std::size_t> levels = p.levels;
  for (std::size_t k = 0; k < N; ++k) {
    if (k == sensor) {
      Table pinned(p.observation[k].rows(), Di, 0.0);
      for (std::size_t r = 0; r < pinned.rows(); ++r) pinned(r, 0) = 1.0;
      symbol.push_back(std::move(pinned));
    } else {
      symbol.push_back(symbol_given_row(p, s, k));
    }
  }

  const Table& obs = p.observation[sensor];
  Table value(obs.cols(), Di, 0.0);
  std::vector<double> dist, scratch, a(Di);
  for (std::size_t t = 0; t < p.theta.size(); ++t) {
    for (const auto& [row, w] : view[t]) {
      tuple_distribution(symbol, levels, row, dist, scratch);
      std::fill(a.begin(), a.end(), 0.0);
      for (std::size_t k = 0; k < dist.size(); ++k) {
        if (dist[k] == 0.0) continue;
        for (std::size_t d = 0; d < Di; ++d) a[d] += dist[k] * cost(p, est[k + d * stride], p.theta[t]);
      }
      const double scale = p.prior[t] * w;
      for (std::size_t y = 0; y < obs.cols(); ++y) {
        const double py = obs(row, y);
        if (py == 0.0) continue;
        for (std::size_t d = 0; d < Di; ++d) value(y, d) += scale * py * a[d];
      }
    }
  }

  std::vector<std::size_t> rule(obs.cols());
  for (std::size_t y = 0; y < obs.cols(); ++y) {
    const auto row = value.row(y);
    const double lo = *std::min_element(row.begin(), row.end());
    double scale = 0.0;
    for (double v : row) scale = std::max(scale, std::abs(v));
    std::size_t pick = 0;
    while (row[pick] > lo + kTieTol * scale) ++pick;
    rule[y] = pick;
  }
  return rule;
}

}  // namespace

std::size_t DiscreteProblem::outcome_count() const {
  std::size_t n = 1;
  for (std::size_t d : levels) n *= d;
  return n;
}

void DiscreteProblem::validate() const {
  const char* where = "pbpo::DiscreteProblem";
  if (theta.empty() || prior.size() != theta.size())
    throw Error(ErrorKind::InvalidArgument, where, "theta grid and prior weights must match");
  double mass = 0.0;
  for (double w : prior) {
    if (!(w >= 0.0)) throw Error(ErrorKind::InvalidArgument, where, "prior weights must be >= 0");
    mass += w;
  }
  if (std::abs(mass - 1.0) > 1e-12)
    throw Error(ErrorKind::InvalidArgument, where, "prior weights must sum to 1");
  if (observation.empty()) throw Error(ErrorKind::InvalidArgument, where, "at least one sensor required");
  if (levels.size() != observation.size())
    throw Error(ErrorKind::InvalidArgument, where, "one level count per sensor required");
  for (std::size_t d : levels)
    if (d < 2) throw Error(ErrorKind::InvalidLevels, where, "every sensor needs D >= 2");
  const std::size_t rows = dependent() ? lambda_given_theta->cols() : theta.size();
  if (dependent() && (lambda_given_theta->rows() != theta.size() || !lambda_given_theta->row_stochastic()))
    throw Error(ErrorKind::InvalidArgument, where, "p(lambda|theta) must be row-stochastic over theta");
  for (const Table& t : observation)
    if (t.rows() != rows || t.cols() == 0 || !t.row_stochastic())
      throw Error(ErrorKind::InvalidArgument, where, "observation tables must be row-stochastic");
  if (estimator == EstimatorKind::Table && estimator_table.size() != outcome_count())
    throw Error(ErrorKind::InvalidArgument, where, "estimator table must cover every outcome tuple");
  if (estimator == EstimatorKind::Mmse && cost == CostKind::AbsoluteError)
    throw Error(ErrorKind::InvalidArgument, where,
                "the posterior-mean estimator is only paired with squared-error or constant cost");
}

DiscreteProblem DiscreteProblem::from_hci(const HciModel& model, std::vector<std::size_t> levels) {
  DiscreteProblem p;
  p.theta = model.theta();
  p.prior = model.prior();
  p.lambda_given_theta = model.lambda_given_theta();
  for (std::size_t i = 0; i < model.sensor_count(); ++i) p.observation.push_back(model.y_given_lambda(i));
  p.levels = std::move(levels);
  p.validate();
  return p;
}

Strategy Strategy::constant(const DiscreteProblem& p) {
  Strategy s;
  for (std::size_t i = 0; i < p.sensors(); ++i) s.rules.emplace_back(p.y_count(i), 0);
  return s;
}

Strategy Strategy::random(const DiscreteProblem& p, Rng& rng) {
  Strategy s = constant(p);
  for (std::size_t i = 0; i < p.sensors(); ++i)
    for (auto& d : s.rules[i])
      d = std::min<std::size_t>(static_cast<std::size_t>(rng.uniform() * double(p.levels[i])),
                                p.levels[i] - 1);
  return s;
}

std::string Strategy::csv() const {
  std::string out = "sensor,y_index,symbol\n";
  for (std::size_t i = 0; i < rules.size(); ++i)
    for (std::size_t y = 0; y < rules[i].size(); ++y)
      out += std::to_string(i + 1) + ',' + std::to_string(y + 1) + ',' + std::to_string(rules[i][y] + 1) + '\n';
  return out;
}

double bayes_risk(const DiscreteProblem& p, const Strategy& s) {
  check_strategy(p, s);
  const Table j = joint(p, s, lambda_view(p));
  return risk_from_joint(p, j, estimates(p, s, j));
}

std::vector<double> mmse_table(const DiscreteProblem& p, const Strategy& s) {
  check_strategy(p, s);
  return posterior_mean(p, joint(p, s, lambda_view(p)));
}

std::vector<std::size_t> best_response_independent(const DiscreteProblem& p, const Strategy& s,
                                                   std::size_t sensor) {
  if (p.dependent())
    throw Error(ErrorKind::InvalidArgument, "pbpo::best_response_independent",
                "problem has a latent variable; use the dependent update");
  return best_response(p, s, sensor, lambda_view(p));
}

std::vector<std::size_t> best_response_dependent(const DiscreteProblem& p, const Strategy& s,
                                                 std::size_t sensor) {
  if (!p.dependent())
    throw Error(ErrorKind::InvalidArgument, "pbpo::best_response_dependent",
                "problem has no latent variable table");
  return best_response(p, s, sensor, lambda_view(p));
}

SweepResult pbpo_sweep(const DiscreteProblem& p, Strategy init, SweepMode mode, std::size_t max_sweeps) {
  p.validate();
  if ((mode == SweepMode::Dependent) != p.dependent())
    throw Error(ErrorKind::InvalidArgument, "pbpo::pbpo_sweep",
                "sweep mode does not match the problem's dependence structure");
  SweepResult r;
  r.strategy = std::move(init);
  r.trace.push_back(bayes_risk(p, r.strategy));
  const LambdaView view = lambda_view(p);
  while (r.sweeps < max_sweeps) {
    ++r.sweeps;
    bool changed = false;
    for (std::size_t i = 0; i < p.sensors(); ++i) {
      auto rule = best_response(p, r.strategy, i, view);
      if (rule != r.strategy.rules[i]) {
        r.strategy.rules[i] = std::move(rule);
        changed = true;
      }
      r.trace.push_back(bayes_risk(p, r.strategy));
    }
    if (!changed) {
      r.converged = true;
      break;
    }
  }
  r.risk = r.trace.back();
  return r;
}

SweepResult pbpo_multistart(const DiscreteProblem& p, SweepMode mode, std::size_t starts,
                            std::uint64_t seed, std::size_t max_sweeps) {
  SweepResult best = pbpo_sweep(p, Strategy::constant(p), mode, max_sweeps);
  const Rng master(seed);
  for (std::size_t k = 1; k < starts; ++k) {
    Rng rng = master.split(k);
    SweepResult r = pbpo_sweep(p, Strategy::random(p, rng), mode, max_sweeps);
    if (r.risk < best.risk - kTieTol * std::max(1.0, std::abs(best.risk))) best = std::move(r);
  }
  return best;
}

namespace {

// Strategies enumerated in lexicographic order of the concatenated rules,
// last position least significant.
struct Enumerator {
  std::vector<std::pair<std::size_t, std::size_t>> slots;  // (sensor, y)
  std::vector<std::size_t> radix;
  std::uint64_t total = 1;

  Enumerator(const DiscreteProblem& p, const char* where) {
    for (std::size_t i = 0; i < p.sensors(); ++i)
      for (std::size_t y = 0; y < p.y_count(i); ++y) {
        slots.push_back({i, y});
        radix.push_back(p.levels[i]);
        if (total > kBruteForceLimit / p.levels[i])
          throw Error(ErrorKind::TooLarge, where,
                      "more than 1e7 strategies; shrink the grids or level counts");
        total *= p.levels[i];
      }
  }

  void decode(std::uint64_t k, Strategy& s) const {
    for (std::size_t pos = slots.size(); pos-- > 0;) {
      s.rules[slots[pos].first][slots[pos].second] = static_cast<std::size_t>(k % radix[pos]);
      k /= radix[pos];
    }
  }
};

// Smallest index whose objective is within tolerance of the global minimum.
// The minimum is found first and the earliest index within tolerance
// second, so the answer does not depend on how the range is split.
std::pair<std::uint64_t, double> argmin_range(std::uint64_t total, unsigned threads,
                                              const std::function<double(std::uint64_t)>& f) {
  threads = static_cast<unsigned>(std::clamp<std::uint64_t>(threads, 1, std::min<std::uint64_t>(total, 64)));
  const std::uint64_t chunk = (total + threads - 1) / threads;
  auto parallel = [&](auto&& body) {
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(body, t);
    body(0u);
    for (auto& th : pool) th.join();
  };
  std::vector<double> chunk_min(threads, std::numeric_limits<double>::infinity());
  parallel([&](unsigned t) {
    const std::uint64_t lo = t * chunk, hi = std::min(total, lo + chunk);
    for (std::uint64_t k = lo; k < hi; ++k) chunk_min[t] = std::min(chunk_min[t], f(k));
  });
  const double best = *std::min_element(chunk_min.begin(), chunk_min.end());
  const double tol = kTieTol * std::max(1.0, std::abs(best));
  std::vector<std::uint64_t> first(threads, total);
  std::vector<double> first_value(threads, best);
  parallel([&](unsigned t) {
    if (chunk_min[t] > best + tol) return;
    const std::uint64_t lo = t * chunk, hi = std::min(total, lo + chunk);
    for (std::uint64_t k = lo; k < hi; ++k) {
      const double v = f(k);
      if (v <= best + tol) {
        first[t] = k;
        first_value[t] = v;
        return;
      }
    }
  });
  for (unsigned t = 0; t < threads; ++t)
    if (first[t] < total) return {first[t], first_value[t]};
  return {0, best};
}

void require_iid(const DiscreteProblem& p, const char* where) {
  if (p.dependent())
    throw Error(ErrorKind::InvalidArgument, where, "sensors must be conditionally independent given theta");
  for (std::size_t i = 1; i < p.sensors(); ++i) {
    const Table& a = p.observation[0];
    const Table& b = p.observation[i];
    bool same = a.rows() == b.rows() && a.cols() == b.cols();
    for (std::size_t r = 0; same && r < a.rows(); ++r)
      for (std::size_t c = 0; same && c < a.cols(); ++c) same = a(r, c) == b(r, c);
    if (!same) throw Error(ErrorKind::InvalidArgument, where, "sensors must share one observation law");
  }
}

}  // namespace

BruteForceResult brute_force(const DiscreteProblem& p, unsigned threads) {
  p.validate();
  const Enumerator e(p, "pbpo::brute_force");
  const auto [k, risk] = argmin_range(e.total, threads, [&](std::uint64_t idx) {
    Strategy s = Strategy::constant(p);
    e.decode(idx, s);
    return bayes_risk(p, s);
  });
  BruteForceResult r;
  r.strategy = Strategy::constant(p);
  e.decode(k, r.strategy);
  r.risk = risk;
  r.evaluated = e.total;
  return r;
}

double strategy_fisher(const DiscreteProblem& p, const Strategy& s) {
  check_strategy(p, s);
  if (p.dependent())
    throw Error(ErrorKind::InvalidArgument, "pbpo::strategy_fisher",
                "the additive Fisher surrogate needs sensors independent given theta");
  const std::size_t T = p.theta.size();
  if (T < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < p.sensors(); ++i) {
    const Table q = symbol_given_row(p, s, i);
    for (std::size_t u = 0; u < q.cols(); ++u) {
      for (std::size_t t = 0; t < T; ++t) {
        const std::size_t a = t == 0 ? 0 : t - 1;
        const std::size_t b = t + 1 == T ? T - 1 : t + 1;
        const double slope = (q(b, u) - q(a, u)) / (p.theta[b] - p.theta[a]);
        if (q(t, u) > 1e-300) total += p.prior[t] * slope * slope / q(t, u);
      }
    }
  }
  return total;
}

GroupingReport grouping_check(const DiscreteProblem& p) {
  const char* where = "pbpo::grouping_check";
  p.validate();
  require_iid(p, where);
  GroupingReport r;

  const Enumerator e(p, where);
  const auto [kf, neg_free] = argmin_range(e.total, 1, [&](std::uint64_t idx) {
    Strategy s = Strategy::constant(p);
    e.decode(idx, s);
    return -strategy_fisher(p, s);
  });
  r.free_strategy = Strategy::constant(p);
  e.decode(kf, r.free_strategy);
  r.free_best = -neg_free;

  // One shared rule per distinct level count.
  std::vector<std::size_t> classes = p.levels;
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  const std::size_t Y = p.y_count(0);
  std::uint64_t total = 1;
  for (std::size_t D : classes)
    for (std::size_t y = 0; y < Y; ++y) total *= D;
  auto build = [&](std::uint64_t idx) {
    Strategy s = Strategy::constant(p);
    std::vector<std::vector<std::size_t>> shared(classes.size(), std::vector<std::size_t>(Y));
    for (std::size_t c = classes.size(); c-- > 0;)
      for (std::size_t y = Y; y-- > 0;) {
        shared[c][y] = static_cast<std::size_t>(idx % classes[c]);
        idx /= classes[c];
      }
    for (std::size_t i = 0; i < p.sensors(); ++i) {
      const auto c = std::lower_bound(classes.begin(), classes.end(), p.levels[i]) - classes.begin();
      s.rules[i] = shared[c];
    }
    return s;
  };
  const auto [ki, neg_ident] =
      argmin_range(total, 1, [&](std::uint64_t idx) { return -strategy_fisher(p, build(idx)); });
  r.identical_strategy = build(ki);
  r.identical_best = -neg_ident;
  r.identical_optimal = std::abs(r.identical_best - r.free_best) <= 1e-9;

  std::vector<std::vector<std::size_t>> seen;
  for (const auto& rule : r.free_strategy.rules)
    if (std::find(seen.begin(), seen.end(), rule) == seen.end()) seen.push_back(rule);
  r.distinct_rules = seen.size();
  return r;
}

CounterexampleReport dependence_counterexample(std::size_t n) {
  if (n < 1 || n > 3)
    throw Error(ErrorKind::InvalidArgument, "pbpo::dependence_counterexample", "n must be 1, 2 or 3");
  constexpr std::size_t G = 16;
  CounterexampleReport r;
  r.n = n;
  r.sensors = (std::size_t{1} << n) - 1;

  DiscreteProblem& p = r.problem;
  for (std::size_t k = 0; k < G; ++k) {
    p.theta.push_back(-1.0 + (2.0 * double(k) + 1.0) / double(G));
    p.prior.push_back(1.0 / double(G));
  }
  Table identity(G, G, 0.0);
  for (std::size_t k = 0; k < G; ++k) identity(k, k) = 1.0;
  p.lambda_given_theta = identity;  // lambda = theta + v with v = 0
  p.observation.assign(r.sensors, identity);  // y_i = lambda
  p.levels.assign(r.sensors, 2);
  p.estimator = EstimatorKind::Mmse;
  p.validate();

  r.bisection_strategy = Strategy::constant(p);
  const double regions = double(std::size_t{1} << n);
  for (std::size_t i = 0; i < r.sensors; ++i) {
    const double boundary = -1.0 + 2.0 * double(i + 1) / regions;
    for (std::size_t y = 0; y < G; ++y) r.bisection_strategy.rules[i][y] = p.theta[y] >= boundary ? 1 : 0;
  }
  r.nonidentical_risk = bayes_risk(p, r.bisection_strategy);

  const auto [k, risk] = argmin_range(std::uint64_t{1} << G, 1, [&](std::uint64_t idx) {
    Strategy s = Strategy::constant(p);
    for (std::size_t y = 0; y < G; ++y) {
      const std::size_t bit = (idx >> (G - 1 - y)) & 1u;
      for (auto& rule : s.rules) rule[y] = bit;
    }
    return bayes_risk(p, s);
  });
  r.identical_strategy = Strategy::constant(p);
  for (std::size_t y = 0; y < G; ++y)
    for (auto& rule : r.identical_strategy.rules) rule[y] = (k >> (G - 1 - y)) & 1u;
  r.identical_best_risk = risk;
  r.margin = r.identical_best_risk - r.nonidentical_risk;
  return r;
}

DiscreteProblem random_problem(const RandomProblemSpec& spec, Rng& rng) {
  if (spec.sensors == 0 || spec.theta_points == 0 || spec.y_points == 0 || spec.levels < 2)
    throw Error(ErrorKind::InvalidArgument, "pbpo::random_problem", "empty or degenerate instance spec");
  auto weights = [&](std::size_t n) {
    std::vector<double> w(n);
    double sum = 0.0;
    for (double& v : w) sum += (v = 0.05 + rng.uniform());
    for (double& v : w) v /= sum;
    return w;
  };
  auto table = [&](std::size_t rows, std::size_t cols) {
    Table t(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      const auto w = weights(cols);
      std::copy(w.begin(), w.end(), t.row(r).begin());
    }
    return t;
  };
  DiscreteProblem p;
  for (std::size_t k = 0; k < spec.theta_points; ++k)
    p.theta.push_back(spec.theta_points == 1 ? 0.0 : -1.0 + 2.0 * double(k) / double(spec.theta_points - 1));
  p.prior = weights(spec.theta_points);
  const std::size_t rows = spec.lambda_points > 0 ? spec.lambda_points : spec.theta_points;
  if (spec.lambda_points > 0) p.lambda_given_theta = table(spec.theta_points, spec.lambda_points);
  const Table shared = table(rows, spec.y_points);
  for (std::size_t i = 0; i < spec.sensors; ++i)
    p.observation.push_back(spec.identical_sensors ? shared : table(rows, spec.y_points));
  p.levels.assign(spec.sensors, spec.levels);
  p.estimator = spec.estimator;
  if (p.estimator == EstimatorKind::Table) {
    p.estimator_table.resize(p.outcome_count());
    for (double& v : p.estimator_table) v = 2.0 * rng.uniform() - 1.0;
  }
  p.validate();
  return p;
}

}  // namespace distq
