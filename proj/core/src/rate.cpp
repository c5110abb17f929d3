#include "distq/rate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "distq/csv.hpp"
#include "distq/error.hpp"

namespace distq {

namespace {

double upper_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }
double lower_tail(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// P(a <= Z < b) without cancellation in either tail.
double cell_mass(double a, double b) {
  if (a >= 0.0) return upper_tail(a) - upper_tail(b);
  if (b <= 0.0) return lower_tail(b) - lower_tail(a);
  return 1.0 - upper_tail(b) - lower_tail(a);
}

}  // namespace

std::size_t bits_for_levels(std::size_t levels) {
  if (levels < 2)
    throw Error(ErrorKind::InvalidLevels, "rate::bits_for_levels",
                "level count " + std::to_string(levels) + " is below 2");
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < levels) ++bits;
  return bits;
}

std::size_t RateBudget::bits_used() const {
  std::size_t bits = 0;
  for (std::size_t d : levels) bits += bits_for_levels(d);
  return bits;
}

bool check_feasible(const RateBudget& budget) { return budget.bits_used() <= budget.R; }

bool binary_optimality_condition(double F_b, double I_star) {
  if (!(F_b >= 0.0) || !(I_star >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "rate::binary_optimality_condition",
                "information values must be nonnegative");
  return F_b >= 0.5 * I_star - 1e-9;
}

LowSnrReport gaussian_low_snr_test(double var_theta, double sigma2) {
  if (!(var_theta > 0.0) || !(sigma2 > 0.0))
    throw Error(ErrorKind::InvalidArgument, "rate::gaussian_low_snr_test", "variances must be positive");
  LowSnrReport r;
  r.ratio = var_theta / sigma2;
  r.threshold = 2.0 * std::log(4.0 / std::numbers::pi);
  r.holds = r.ratio <= r.threshold;
  return r;
}

namespace {

void check_breakpoints(double sigma2, const std::vector<double>& breakpoints) {
  if (!(sigma2 > 0.0))
    throw Error(ErrorKind::InvalidArgument, "rate::multilevel_fisher", "variance must be positive");
  for (std::size_t k = 1; k < breakpoints.size(); ++k)
    if (!(breakpoints[k] > breakpoints[k - 1]))
      throw Error(ErrorKind::InvalidArgument, "rate::multilevel_fisher", "breakpoints must increase");
}

// Expected information over the rule and, when `grad` is non-null, its
// gradient with respect to the breakpoints.
double multilevel_eval(const QuadratureRule& rule, double sigma, const std::vector<double>& b,
                       std::vector<double>* grad) {
  const std::size_t K = b.size();
  std::vector<double> z(K), pdf(K), mass(K + 1), slope(K + 1);
  if (grad) grad->assign(K, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double w = rule.weights[i];
    if (w == 0.0) continue;
    const double theta = rule.nodes[i];
    for (std::size_t k = 0; k < K; ++k) {
      z[k] = (b[k] - theta) / sigma;
      pdf[k] = normal_pdf(z[k]);
    }
    double info = 0.0;
    for (std::size_t c = 0; c <= K; ++c) {
      const double lo = c == 0 ? -INFINITY : z[c - 1];
      const double hi = c == K ? INFINITY : z[c];
      mass[c] = cell_mass(lo, hi);
      slope[c] = ((c == 0 ? 0.0 : pdf[c - 1]) - (c == K ? 0.0 : pdf[c])) / sigma;  // d mass / d theta
      if (mass[c] > 0.0) info += slope[c] * slope[c] / mass[c];
    }
    total += w * info;
    if (!grad) continue;
    for (std::size_t j = 0; j < K; ++j) {
      const double dm = pdf[j] / sigma;                  // cell j grows, cell j + 1 shrinks
      const double ds = z[j] * pdf[j] / (sigma * sigma);  // slope of cell j; cell j + 1 gets -ds
      double d = 0.0;
      if (mass[j] > 0.0) d += 2.0 * slope[j] * ds / mass[j] - slope[j] * slope[j] * dm / (mass[j] * mass[j]);
      if (mass[j + 1] > 0.0)
        d += -2.0 * slope[j + 1] * ds / mass[j + 1] + slope[j + 1] * slope[j + 1] * dm / (mass[j + 1] * mass[j + 1]);
      (*grad)[j] += w * d;
    }
  }
  return total;
}

double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

}  // namespace

double multilevel_fisher(const ParamPrior& prior, double sigma2, const std::vector<double>& breakpoints) {
  check_breakpoints(sigma2, breakpoints);
  return multilevel_eval(prior.quadrature(), std::sqrt(sigma2), breakpoints, nullptr);
}

MultiLevelDesign best_multilevel_quantizer(const ParamPrior& prior, double sigma2, std::size_t levels) {
  bits_for_levels(levels);
  check_breakpoints(sigma2, {});
  const QuadratureRule rule = prior.quadrature();
  const double sigma = std::sqrt(sigma2);
  const double mu = prior.mean();
  const double spread = std::sqrt(prior.variance() + sigma2);
  const std::size_t K = levels - 1;
  std::vector<double> b(K);
  for (std::size_t k = 0; k < K; ++k) {
    // equally spaced in the central +/- 2 spread of the observation law
    b[k] = mu + spread * (-2.0 + 4.0 * double(k + 1) / double(levels));
  }

  // BFGS ascent with a backtracking line search that keeps the breakpoints ordered.
  std::vector<double> g, g_new, H(K * K, 0.0);
  for (std::size_t k = 0; k < K; ++k) H[k * K + k] = spread * spread;
  double f = multilevel_eval(rule, sigma, b, &g);
  for (int iter = 0; iter < 1000; ++iter) {
    if (std::sqrt(dot(g, g)) * spread <= 1e-13 * std::max(1.0, f)) break;
    std::vector<double> dir(K, 0.0);
    for (std::size_t i = 0; i < K; ++i)
      for (std::size_t j = 0; j < K; ++j) dir[i] += H[i * K + j] * g[j];
    if (dot(dir, g) <= 0.0) {  // lost positive definiteness; restart from a scaled identity
      std::fill(H.begin(), H.end(), 0.0);
      for (std::size_t k = 0; k < K; ++k) H[k * K + k] = spread * spread;
      dir = g;
      for (double& d : dir) d *= spread * spread;
    }
    double t = 1.0, f_new = f;
    std::vector<double> trial(K);
    bool moved = false;
    for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
      for (std::size_t k = 0; k < K; ++k) trial[k] = b[k] + t * dir[k];
      bool ordered = true;
      for (std::size_t k = 1; k < K; ++k) ordered &= trial[k] > trial[k - 1];
      if (!ordered) continue;
      f_new = multilevel_eval(rule, sigma, trial, &g_new);
      if (f_new >= f + 1e-4 * t * dot(dir, g)) {
        moved = true;
        break;
      }
    }
    if (!moved) break;
    std::vector<double> step(K), dg(K);
    for (std::size_t k = 0; k < K; ++k) {
      step[k] = trial[k] - b[k];
      dg[k] = g[k] - g_new[k];  // gradient of -f
    }
    const double sy = dot(step, dg);
    if (sy > 0.0) {
      std::vector<double> Hy(K, 0.0);
      for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < K; ++j) Hy[i] += H[i * K + j] * dg[j];
      const double yHy = dot(dg, Hy);
      for (std::size_t i = 0; i < K; ++i)
        for (std::size_t j = 0; j < K; ++j)
          H[i * K + j] += (sy + yHy) * step[i] * step[j] / (sy * sy) - (Hy[i] * step[j] + step[i] * Hy[j]) / sy;
    }
    const bool stalled = f_new - f <= 1e-15 * std::max(1.0, f);
    b = trial;
    f = f_new;
    g = g_new;
    if (stalled) break;
  }
  return {b, f};
}

std::vector<RankedCandidate> compare_rate_strategies(std::size_t R, const std::vector<RateCandidate>& candidates,
                                                     const ParamPrior& prior, double sigma2) {
  const char* where = "rate::compare_rate_strategies";
  std::vector<RankedCandidate> out;
  std::map<std::size_t, double> per_sensor;  // by level count
  const double F_P = prior_fisher(prior);
  for (const RateCandidate& c : candidates) {
    RateBudget budget{R, {}};
    for (const auto& [levels, count] : c.groups) budget.levels.insert(budget.levels.end(), count, levels);
    if (budget.levels.empty())
      throw Error(ErrorKind::InfeasibleCandidate, where, "candidate '" + c.name + "' has no sensors");
    const std::size_t bits = budget.bits_used();
    if (bits > R)
      throw Error(ErrorKind::InfeasibleCandidate, where,
                  "candidate '" + c.name + "' needs " + std::to_string(bits) + " bits, budget is " +
                      std::to_string(R));
    std::vector<double> fi;
    for (std::size_t levels : budget.levels) {
      auto it = per_sensor.find(levels);
      if (it == per_sensor.end()) {
        const double f = levels == 2 ? gaussian_binary_threshold_fisher(prior, sigma2)
                                     : best_multilevel_quantizer(prior, sigma2, levels).fisher;
        it = per_sensor.emplace(levels, f).first;
      }
      fi.push_back(it->second);
    }
    RankedCandidate rc;
    rc.candidate = c;
    rc.bits_used = bits;
    rc.report = FisherReport::assemble(std::move(fi), 0.0, F_P);
    out.push_back(std::move(rc));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const RankedCandidate& a, const RankedCandidate& b) { return a.report.F_D > b.report.F_D; });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
  return out;
}

}  // namespace distq
