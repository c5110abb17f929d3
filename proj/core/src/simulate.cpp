#include "distq/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "distq/csv.hpp"
#include "distq/error.hpp"
#include "distq/fisher.hpp"

namespace distq {

double mle_estimate(std::size_t ones, std::size_t N) {
  if (N == 0 || ones > N)
    throw Error(ErrorKind::InvalidArgument, "simulate::mle_estimate",
                "need 0 <= ones <= N and N >= 1, got ones = " + std::to_string(ones) +
                    ", N = " + std::to_string(N));
  const double arg = std::clamp(2.0 * double(ones) / double(N) - 1.0, -1.0, 1.0);
  return (2.0 / std::numbers::pi) * std::asin(arg);
}

std::vector<std::size_t> SimConfig::default_ladder() {
  std::vector<std::size_t> v;
  for (int k = 4; k <= 14; ++k) v.push_back(std::size_t{1} << k);
  return v;
}

double simulate_run(const SimConfig& cfg, std::size_t ladder_index, std::size_t run) {
  Rng rng = Rng(cfg.seed).split(ladder_index).split(run);
  const std::size_t N = cfg.sensors.at(ladder_index);
  const double theta = cfg.prior.sample(rng);
  std::size_t ones = 0;
  for (std::size_t i = 0; i < N; ++i) {
    const double y = theta + cfg.noise.sample(rng);
    ones += cfg.quantizer.apply(y, rng) ? 1 : 0;
  }
  const double err = mle_estimate(ones, N) - theta;
  return err * err;
}

SimResult run_mse_experiment(const SimConfig& cfg) {
  const char* where = "simulate::run_mse_experiment";
  if (cfg.sensors.empty())
    throw Error(ErrorKind::InvalidArgument, where, "empty sensor-count ladder");
  for (std::size_t N : cfg.sensors)
    if (N == 0) throw Error(ErrorKind::InvalidArgument, where, "sensor count must be at least 1");
  if (cfg.runs == 0) throw Error(ErrorKind::InvalidArgument, where, "need at least one run");
  const Interval s = cfg.prior.support();
  if (!cfg.prior.bounded() || s.lo < -1.0 || s.hi > 1.0)
    throw Error(ErrorKind::ConfigDomainMismatch, where,
                "prior support [" + format_number(s.lo) + ", " + format_number(s.hi) +
                    "] leaves [-1, 1], the range of the arcsine estimator");

  const unsigned threads = std::max(1u, cfg.threads);
  SimResult result;
  std::vector<double> sq(cfg.runs);
  for (std::size_t j = 0; j < cfg.sensors.size(); ++j) {
    auto work = [&](std::size_t begin, std::size_t end) {
      for (std::size_t r = begin; r < end; ++r) sq[r] = simulate_run(cfg, j, r);
    };
    if (threads == 1 || cfg.runs < 2) {
      work(0, cfg.runs);
    } else {
      std::vector<std::jthread> pool;
      const std::size_t chunk = (cfg.runs + threads - 1) / threads;
      for (std::size_t b = 0; b < cfg.runs; b += chunk) pool.emplace_back(work, b, std::min(cfg.runs, b + chunk));
    }
    // reduction in run order
    double sum = 0.0;
    for (double v : sq) sum += v;
    const double mean = sum / double(cfg.runs);
    double ss = 0.0;
    for (double v : sq) ss += (v - mean) * (v - mean);
    const double sd = cfg.runs > 1 ? std::sqrt(ss / double(cfg.runs - 1)) : 0.0;
    const double N = double(cfg.sensors[j]);
    result.rows.push_back({cfg.sensors[j], mean, sd / std::sqrt(double(cfg.runs)),
                           4.0 / (N * std::numbers::pi * std::numbers::pi)});
  }
  return result;
}

std::string SimResult::csv() const {
  std::string out = "N,mse,stderr,pcrlb_limit\n";
  for (const SimRow& r : rows)
    out += std::to_string(r.N) + "," + format_number(r.mse) + "," + format_number(r.standard_error) + "," +
           format_number(r.pcrlb_limit) + "\n";
  return out;
}

std::vector<CurvePoint> equicorrelated_curve(std::size_t N, double sigma2, const std::vector<double>& rhos) {
  std::vector<CurvePoint> out;
  out.reserve(rhos.size());
  for (double rho : rhos) out.push_back({rho, equicorrelated_fisher(N, sigma2, rho)});
  return out;
}

std::string equicorrelated_csv(const std::vector<CurvePoint>& curve) {
  std::string out = "rho,fisher\n";
  for (const CurvePoint& p : curve) out += format_number(p.rho) + "," + format_number(p.fisher) + "\n";
  return out;
}

}  // namespace distq
