#include <fmt/core.h>

#include <cmath>
#include <numbers>

#include "cli.hpp"
#include "distq/csv.hpp"
#include "distq/design.hpp"
#include "distq/error.hpp"
#include "distq/fisher.hpp"
#include "distq/pbpo.hpp"
#include "distq/rate.hpp"
#include "distq/simulate.hpp"

namespace distq::cli {

namespace {

std::string num(double x) { return format_number(x); }

ParamPrior prior_or(const Section& cfg, ParamPrior fallback) {
  auto s = cfg.optional_child("prior");
  return s ? parse_prior(*s) : fallback;
}

NoiseModel noise_or(const Section& cfg, NoiseModel fallback) {
  auto s = cfg.optional_child("noise");
  return s ? parse_noise(*s) : fallback;
}

BinaryQuantizer quantizer_or(const Section& cfg, BinaryQuantizer fallback) {
  auto s = cfg.optional_child("quantizer");
  return s ? parse_quantizer(*s) : fallback;
}

std::size_t grid_nodes(const Section& cfg) {
  const std::size_t n = cfg.count("nodes", kDefaultNodes);
  if (n < 5 || n % 2 == 0) cfg.fail("nodes", "must be odd and at least 5");
  return n;
}

std::string profile_csv(const ResponseCurve& curve) {
  const auto info = information_profile(curve);
  std::string out = "theta,g,dg,I\n";
  for (std::size_t i = 0; i < curve.size(); ++i)
    out += num(curve.theta(i)) + ',' + num(curve.values()[i]) + ',' + num(curve.derivative()[i]) + ',' +
           num(info[i]) + '\n';
  return out;
}

std::string quantizer_csv(const BinaryQuantizer& q) {
  return two_column_csv("y", "gamma", q.table_y(), q.table_response());
}

std::string_view to_string(DataProcessingStatus s) {
  switch (s) {
    case DataProcessingStatus::Holds:
      return "holds";
    case DataProcessingStatus::Violated:
      return "violated";
    case DataProcessingStatus::NotApplicable:
      break;
  }
  return "not applicable";
}

}  // namespace

Outcome design_command(const Section& cfg, const Options& opt) {
  const ParamPrior prior = prior_or(cfg, ParamPrior::uniform(-1.0, 1.0));
  const NoiseModel noise = noise_or(cfg, NoiseModel::raised_cosine(0.0));
  const std::size_t nodes = grid_nodes(cfg);
  const std::string method = cfg.text("method", "auto");
  BvpOptions bvp;
  bvp.boundary_inset = cfg.positive("boundary_inset", bvp.boundary_inset);
  bvp.perturbations = cfg.count("perturbations", bvp.perturbations);
  bvp.require_maximum = cfg.boolean("require_maximum", false);
  bvp.collocation_only = cfg.boolean("collocation_only", false);
  bvp.perturbation_seed = opt.seed.value_or(cfg.u64("seed", bvp.perturbation_seed));
  if (method != "auto" && method != "closed_form" && method != "bvp")
    cfg.fail("method", "expected auto, closed_form or bvp");
  cfg.finish();
  if (!prior.bounded() || prior.is_point_mass())
    throw ConfigError("config.prior: design needs a bounded prior with a density");

  const bool closed = method == "closed_form" || (method == "auto" && prior.kind() == PriorKind::Uniform);
  const Interval s = prior.support();
  DesignSolution sol = [&] {
    if (!closed) return solve_euler_lagrange(prior, nodes, bvp);
    DesignSolution d(least_favorable_gstar(s.lo, s.hi, nodes));
    d.method = DesignMethod::ClosedForm;
    d.solver = "closed_form";
    d.residual = euler_lagrange_residual(d.gstar, prior);
    d.ode_residual = d.residual.max_abs;
    return d;
  }();

  Outcome o;
  o.files.emplace_back("gstar.csv", profile_csv(sol.gstar));
  std::string& sum = o.summary;
  sum += fmt::format("design on [{}, {}] with {} nodes\n", num(s.lo), num(s.hi), nodes);
  sum += fmt::format("response: {} ({})\n", to_string(sol.method), sol.solver);
  sum += fmt::format("objective L = {}\n", num(design_objective(sol.gstar, prior)));
  sum += fmt::format("Euler-Lagrange residual: max {} over {} nodes ({} skipped at prior kinks)\n",
                     num(sol.residual.max_abs), sol.residual.checked, sol.residual.skipped);
  if (sol.stationarity) {
    const auto& st = *sol.stationarity;
    sum += fmt::format("stationary point: {} ({} of {} perturbations raise L, {} lower it)\n", to_string(st.kind),
                       st.increased, st.perturbations, st.decreased);
  }

  const DeconvolutionResult dr = deconvolve_quantizer(sol.gstar, noise);
  if (dr.ok()) {
    o.files.emplace_back("gamma.csv", quantizer_csv(*dr.gamma));
    sum += fmt::format("quantizer recovered: {} nodes, step at {}, round-trip error {}\n", dr.gamma->table_y().size(),
                       num(dr.step_location), num(dr.round_trip_error));
    return o;
  }
  const FailureRecord& f = *dr.failure;
  std::string rec = "reason,detail,gamma_min,gamma_max,round_trip_error\n";
  rec += std::string(to_string(f.reason)) + ",\"" + f.detail + "\"," + num(f.gamma_min) + ',' + num(f.gamma_max) +
         ',' + num(f.round_trip_error) + '\n';
  o.files.emplace_back("failure.csv", rec);
  if (f.best_effort) o.files.emplace_back("gamma_best_effort.csv", quantizer_csv(*f.best_effort));
  sum += fmt::format("no quantizer realises g* under this noise: {} ({})\n", to_string(f.reason), f.detail);
  o.code = kExitNumerical;
  return o;
}

Outcome fisher_command(const Section& cfg, const Options&) {
  const ParamPrior prior = prior_or(cfg, ParamPrior::uniform(-1.0, 1.0));
  const NoiseModel noise = noise_or(cfg, NoiseModel::delta());
  const BinaryQuantizer q = quantizer_or(cfg, BinaryQuantizer::sine());
  const std::size_t N = cfg.count("N", 10);
  const double F0 = cfg.number("F0", 0.0);
  const std::size_t nodes = grid_nodes(cfg);
  if (N == 0) cfg.fail("N", "must be at least 1");
  if (F0 < 0.0) cfg.fail("F0", "must be nonnegative");
  cfg.finish();

  const Interval s = prior.is_point_mass() ? Interval{prior.mean() - 1.0, prior.mean() + 1.0} : prior.support();
  const ResponseCurve curve = response_curve(q, noise, UniformGrid{s.lo, s.hi, nodes});
  const FisherReport r = posterior_fisher(curve, prior, N, F0);
  const DataProcessingReport dp = data_processing_check(curve, prior, noise);

  Outcome o;
  o.files.emplace_back("fisher.csv", r.csv_header() + '\n' + r.csv_row() + '\n');
  o.files.emplace_back("profile.csv", profile_csv(curve));
  std::string& sum = o.summary;
  sum += fmt::format("N = {}: F_D = {}, F_0 = {}, F_P = {}, F = {}, PCRLB = {}\n", N, num(r.F_D), num(r.F_0),
                     num(r.F_P), num(r.F_total), num(r.pcrlb));
  sum += fmt::format("per-sensor information {} against I* = {}: data processing {}\n", num(dp.F_i), num(dp.I_star),
                     to_string(dp.status));
  if (noise.kind() == NoiseKind::Gaussian && q.kind() == QuantizerKind::Threshold &&
      q.threshold_value() == prior.mean() && !prior.is_point_mass()) {
    const double closed = gaussian_binary_threshold_fisher(prior, noise.sigma() * noise.sigma());
    sum += fmt::format("closed-form threshold-at-mean value {} (relative difference {})\n", num(closed),
                       num(std::abs(closed - dp.F_i) / closed));
  }
  return o;
}

Outcome simulate_command(const Section& cfg, const Options& opt) {
  SimConfig sc;
  sc.prior = prior_or(cfg, sc.prior);
  sc.noise = noise_or(cfg, sc.noise);
  sc.quantizer = quantizer_or(cfg, sc.quantizer);
  sc.sensors = cfg.has("N") ? cfg.counts("N") : SimConfig::default_ladder();
  sc.runs = cfg.count("runs", sc.runs);
  sc.seed = opt.seed.value_or(cfg.u64("seed", 0));
  sc.threads = opt.threads;
  const bool mse = cfg.boolean("mse", true);
  if (sc.sensors.empty()) cfg.fail("N", "needs at least one sensor count");
  for (std::size_t n : sc.sensors)
    if (n == 0) cfg.fail("N", "sensor counts must be at least 1");
  if (sc.runs == 0) cfg.fail("runs", "must be at least 1");

  std::optional<std::vector<CurvePoint>> curve;
  std::size_t eq_n = 0;
  if (auto eq = cfg.optional_child("equicorrelated")) {
    eq_n = eq->count("N", 10);
    const double var = eq->positive("variance", 1.0);
    std::vector<double> rhos;
    if (eq->has("rho")) {
      rhos = eq->numbers("rho");
    } else {
      const std::size_t points = eq->count("points", 100);
      const double hi = eq->number("rho_max", 0.999);
      if (points < 2) eq->fail("points", "must be at least 2");
      for (std::size_t i = 0; i < points; ++i) rhos.push_back(hi * double(i) / double(points - 1));
    }
    if (eq_n == 0) eq->fail("N", "must be at least 1");
    eq->finish();
    cfg.finish();
    curve = equicorrelated_curve(eq_n, var, rhos);
  } else {
    cfg.finish();
  }

  if (!mse && !curve) cfg.fail("mse", "nothing to do without an equicorrelated section");

  Outcome o;
  std::string& sum = o.summary;
  if (mse) {
    const SimResult res = run_mse_experiment(sc);
    o.files.emplace_back("mse.csv", res.csv());
    sum += fmt::format("{} runs per sensor count, seed {}\n", sc.runs, sc.seed);
    for (const SimRow& r : res.rows)
      sum += fmt::format("N = {:>6}: mse = {:.6e} +/- {:.2e}, limit {:.6e}, N*mse = {:.5f}\n", r.N, r.mse,
                         r.standard_error, r.pcrlb_limit, double(r.N) * r.mse);
  }
  if (curve) {
    o.files.emplace_back("equicorrelated.csv", equicorrelated_csv(*curve));
    sum += fmt::format("equicorrelated information for N = {}: {} at rho = {}, {} at rho = {}\n", eq_n,
                       num(curve->front().fisher), num(curve->front().rho), num(curve->back().fisher),
                       num(curve->back().rho));
  }
  return o;
}

namespace {

EstimatorKind parse_estimator(const Section& s, const std::string& key) {
  const std::string v = s.text(key, "mmse");
  if (v == "mmse") return EstimatorKind::Mmse;
  if (v == "table") return EstimatorKind::Table;
  s.fail(key, "expected mmse or table");
}

DiscreteProblem parse_problem(const Section& s) {
  DiscreteProblem p;
  p.theta = s.numbers("theta");
  p.prior = s.numbers("prior");
  if (s.has("lambda_given_theta")) p.lambda_given_theta = Table::from_rows(s.matrix("lambda_given_theta"));
  for (const Section& t : s.children("observation")) {
    p.observation.push_back(Table::from_rows(t.matrix("table")));
    t.finish();
  }
  p.levels = s.counts("levels");
  p.estimator = parse_estimator(s, "estimator");
  if (s.has("estimator_table")) p.estimator_table = s.numbers("estimator_table");
  const std::string cost = s.text("cost", "squared_error");
  if (cost == "squared_error") {
    p.cost = CostKind::SquaredError;
  } else if (cost == "absolute_error") {
    p.cost = CostKind::AbsoluteError;
  } else if (cost == "constant") {
    p.cost = CostKind::Constant;
  } else {
    s.fail("cost", "expected squared_error, absolute_error or constant");
  }
  p.constant_cost = s.number("constant_cost", 1.0);
  s.finish();
  p.validate();
  return p;
}

}  // namespace

Outcome pbpo_command(const Section& cfg, const Options& opt) {
  const std::uint64_t seed = opt.seed.value_or(cfg.u64("seed", 0));
  DiscreteProblem p;
  if (cfg.has("problem") == cfg.has("random"))
    throw ConfigError("config: give exactly one of 'problem' and 'random'");
  if (auto s = cfg.optional_child("problem")) {
    p = parse_problem(*s);
  } else {
    const Section r = cfg.child("random");
    RandomProblemSpec spec;
    spec.sensors = r.count("sensors", spec.sensors);
    spec.theta_points = r.count("theta_points", spec.theta_points);
    spec.y_points = r.count("y_points", spec.y_points);
    spec.levels = r.count("levels", spec.levels);
    spec.lambda_points = r.count("lambda_points", spec.lambda_points);
    spec.identical_sensors = r.boolean("identical_sensors", spec.identical_sensors);
    spec.estimator = parse_estimator(r, "estimator");
    r.finish();
    Rng rng(seed);
    p = random_problem(spec, rng);
  }
  const std::string mode_s = cfg.text("mode", p.dependent() ? "dependent" : "independent");
  if (mode_s != "independent" && mode_s != "dependent") cfg.fail("mode", "expected independent or dependent");
  const SweepMode mode = mode_s == "dependent" ? SweepMode::Dependent : SweepMode::Independent;
  if ((mode == SweepMode::Dependent) != p.dependent())
    cfg.fail("mode", "dependent mode needs a lambda table and independent mode forbids one");
  const std::size_t starts = cfg.count("starts", 1);
  const std::size_t max_sweeps = cfg.count("max_sweeps", 100);
  const bool brute = cfg.boolean("brute_force", true);
  const bool grouping = cfg.boolean("grouping", false);
  if (starts == 0) cfg.fail("starts", "must be at least 1");
  cfg.finish();

  const SweepResult sw = pbpo_multistart(p, mode, starts, mix64(seed ^ 0x9bb0), max_sweeps);
  Outcome o;
  o.files.emplace_back("strategy.csv", sw.strategy.csv());
  std::string trace = "step,risk\n";
  for (std::size_t i = 0; i < sw.trace.size(); ++i) trace += std::to_string(i) + ',' + num(sw.trace[i]) + '\n';
  o.files.emplace_back("trace.csv", trace);
  std::string& sum = o.summary;
  sum += fmt::format("{} sweep ({} start{}): risk {} after {} sweep{}{}\n", mode_s, starts, starts == 1 ? "" : "s",
                     num(sw.risk), sw.sweeps, sw.sweeps == 1 ? "" : "s", sw.converged ? "" : " (sweep limit reached)");
  std::string row = "risk,sweeps,converged";
  std::string vals = num(sw.risk) + ',' + std::to_string(sw.sweeps) + ',' + (sw.converged ? "1" : "0");
  if (brute) {
    const BruteForceResult bf = brute_force(p, opt.threads);
    row += ",brute_force_risk,gap";
    vals += ',' + num(bf.risk) + ',' + num(sw.risk - bf.risk);
    o.files.emplace_back("brute_force_strategy.csv", bf.strategy.csv());
    sum += fmt::format("exhaustive optimum over {} strategies: {} (gap {})\n", bf.evaluated, num(bf.risk),
                       num(sw.risk - bf.risk));
  }
  o.files.emplace_back("pbpo.csv", row + '\n' + vals + '\n');
  if (grouping) {
    const GroupingReport g = grouping_check(p);
    sum += fmt::format("grouping: identical-rule best F_D {} vs unrestricted {} ({})\n", num(g.identical_best),
                       num(g.free_best), g.identical_optimal ? "identical rules optimal" : "identical rules lose");
  }
  return o;
}

Outcome rate_command(const Section& cfg, const Options&) {
  const std::size_t R = cfg.count("R", 4);
  const ParamPrior prior = prior_or(cfg, ParamPrior::gaussian(0.0, 0.2));
  const double sigma2 = cfg.positive("noise_variance", 1.0);
  std::vector<RateCandidate> cands;
  if (cfg.has("candidates")) {
    for (const Section& c : cfg.children("candidates")) {
      RateCandidate rc;
      rc.name = c.text("name", "candidate" + std::to_string(cands.size() + 1));
      for (const Section& g : c.children("groups")) {
        const std::size_t levels = g.count("levels", 2), n = g.count("count", 1);
        if (levels < 2) g.fail("levels", "must be at least 2");
        g.finish();
        rc.groups.emplace_back(levels, n);
      }
      c.finish();
      cands.push_back(std::move(rc));
    }
  } else {
    cands.push_back({"binary", {{2, R}}});
    if (R >= 2) cands.push_back({"four_level", {{4, R / 2}}});
  }
  if (cands.empty()) cfg.fail("candidates", "needs at least one candidate");
  cfg.finish();
  for (const RateCandidate& c : cands) {
    RateBudget b{R, {}};
    for (const auto& [levels, n] : c.groups) b.levels.insert(b.levels.end(), n, levels);
    if (b.levels.empty() || !check_feasible(b))
      throw ConfigError("config.candidates: '" + c.name + "' needs " + std::to_string(b.bits_used()) +
                        " bits, budget is " + std::to_string(R));
  }

  const auto ranked = compare_rate_strategies(R, cands, prior, sigma2);
  Outcome o;
  std::string csv = "candidate,bits_used,F_D,pcrlb,rank\n";
  for (const RankedCandidate& r : ranked)
    csv += r.candidate.name + ',' + std::to_string(r.bits_used) + ',' + num(r.report.F_D) + ',' +
           num(r.report.pcrlb) + ',' + std::to_string(r.rank) + '\n';
  o.files.emplace_back("rate.csv", csv);
  std::string& sum = o.summary;
  for (const RankedCandidate& r : ranked)
    sum += fmt::format("{}. {} ({} bits): F_D = {}\n", r.rank, r.candidate.name, r.bits_used, num(r.report.F_D));
  if (ranked.size() > 1)
    sum += fmt::format("margin of the leader: {}\n", num(ranked[0].report.F_D - ranked[1].report.F_D));
  if (prior.kind() == PriorKind::Gaussian && !prior.truncation()) {
    const LowSnrReport low = gaussian_low_snr_test(prior.variance(), sigma2);
    const double Fb = gaussian_binary_threshold_fisher(prior, sigma2);
    const double Istar = 1.0 / sigma2;
    sum += fmt::format("SNR {} vs 2 ln(4/pi) = {}: low-SNR condition {}\n", num(low.ratio), num(low.threshold),
                       low.holds ? "holds" : "does not hold");
    sum += fmt::format("one-bit information {} vs I*/2 = {}: binary condition {}\n", num(Fb), num(0.5 * Istar),
                       binary_optimality_condition(Fb, Istar) ? "holds" : "does not hold");
  }
  return o;
}

Outcome counterexample_command(const Section& cfg, const Options&) {
  const std::vector<std::size_t> ns = cfg.has("n") ? cfg.counts("n") : std::vector<std::size_t>{1, 2, 3};
  for (std::size_t n : ns)
    if (n < 1 || n > 3) cfg.fail("n", "values must lie in 1..3");
  cfg.finish();
  Outcome o;
  std::string csv = "n,sensors,identical_best_risk,nonidentical_risk,margin\n";
  for (std::size_t n : ns) {
    const CounterexampleReport r = dependence_counterexample(n);
    csv += std::to_string(n) + ',' + std::to_string(r.sensors) + ',' + num(r.identical_best_risk) + ',' +
           num(r.nonidentical_risk) + ',' + num(r.margin) + '\n';
    o.summary += fmt::format("n = {} ({} sensors): identical best {}, bisection {}, margin {}\n", n, r.sensors,
                             num(r.identical_best_risk), num(r.nonidentical_risk), num(r.margin));
  }
  o.files.emplace_back("counterexample.csv", csv);
  return o;
}

}  // namespace distq::cli
