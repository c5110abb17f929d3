#include "distq/fisher.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "distq/csv.hpp"
#include "distq/error.hpp"

namespace distq {

namespace {

constexpr double kDegenerate = 1e-12;

bool degenerate(double g) { return g <= kDegenerate || g >= 1.0 - kDegenerate; }

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

}  // namespace

FisherReport FisherReport::assemble(std::vector<double> per_sensor, double F_0, double F_P) {
  FisherReport r;
  r.per_sensor = std::move(per_sensor);
  for (double f : r.per_sensor) r.F_D += f;
  r.F_0 = F_0;
  r.F_P = F_P;
  r.F_total = r.F_D + r.F_0 + r.F_P;
  r.pcrlb = r.F_total > 0.0 ? 1.0 / r.F_total : std::numeric_limits<double>::infinity();
  return r;
}

std::string FisherReport::csv_header() const {
  std::string h = "F_D,F_0,F_P,F_total,pcrlb";
  for (std::size_t i = 0; i < per_sensor.size(); ++i) h += ",F_" + std::to_string(i + 1);
  return h;
}

std::string FisherReport::csv_row() const {
  std::string row = format_number(F_D) + ',' + format_number(F_0) + ',' + format_number(F_P) + ',' +
                    format_number(F_total) + ',' + format_number(pcrlb);
  for (double f : per_sensor) row += ',' + format_number(f);
  return row;
}

double fi_pointwise(double g, double gprime) {
  if (!(g > kDegenerate && g < 1.0 - kDegenerate))
    throw Error(ErrorKind::DegenerateResponse, "fisher::fi_pointwise",
                "g = " + format_number(g) + " is too close to 0 or 1");
  return gprime * gprime / (g * (1.0 - g));
}

std::vector<double> information_profile(const ResponseCurve& curve) {
  const std::size_t n = curve.size();
  const auto g = curve.values();
  const auto dg = curve.derivative();
  std::vector<double> info(n, 0.0);
  std::size_t head = 0, tail = 0;  // degenerate runs touching either end
  while (head < n && degenerate(g[head])) ++head;
  while (tail < n - head && degenerate(g[n - 1 - tail])) ++tail;
  for (std::size_t i = head; i + tail < n; ++i) {
    if (degenerate(g[i]))
      throw Error(ErrorKind::DegenerateResponse, "fisher::information_profile",
                  "g(" + format_number(curve.theta(i)) + ") = " + format_number(g[i]) + " inside the grid");
    info[i] = fi_pointwise(g[i], dg[i]);
  }
  auto saturated = [&](std::size_t i) {
    const double q = g[i] * (1.0 - g[i]);
    info[i] = q > 0.0 ? dg[i] * dg[i] / q : 0.0;
  };
  if (head >= 2)
    for (std::size_t i = 0; i < head; ++i) saturated(i);
  if (tail >= 2)
    for (std::size_t i = n - tail; i < n; ++i) saturated(i);
  for (auto [end, run] : {std::pair{std::size_t{0}, head}, std::pair{n - 1, tail}}) {
    if (run != 1) continue;
    if (curve.endpoint_information()) {
      info[end] = *curve.endpoint_information();
    } else if (n >= 4) {
      const std::size_t a = end == 0 ? 1 : n - 2;
      const std::size_t b = end == 0 ? 2 : n - 3;
      const std::size_t c = end == 0 ? 3 : n - 4;
      info[end] = std::max(0.0, 3.0 * info[a] - 3.0 * info[b] + info[c]);
    } else {
      throw Error(ErrorKind::DegenerateResponse, "fisher::information_profile",
                  "grid too short to extrapolate an endpoint");
    }
  }
  return info;
}

FisherReport posterior_fisher(const ResponseCurve& curve, const ParamPrior& prior, std::size_t N,
                              double F0) {
  if (!(F0 >= 0.0))
    throw Error(ErrorKind::InvalidArgument, "fisher::posterior_fisher", "F0 must be nonnegative");
  const UniformGrid& grid = curve.grid();
  const Interval span{grid.lo, grid.hi};
  const double tol = 1e-9 * span.width();
  if (!span.contains(prior.support(), tol))
    throw Error(ErrorKind::SupportMismatch, "fisher::posterior_fisher",
                "curve grid [" + format_number(span.lo) + ", " + format_number(span.hi) +
                    "] does not cover the prior support");

  const std::vector<double> info = information_profile(curve);
  const double h = grid.step();
  double per_sensor = 0.0;
  const Interval s = prior.support();
  if (prior.is_point_mass()) {
    per_sensor = interpolate(info, grid.lo, h, s.lo);
  } else if (std::abs(s.lo - span.lo) <= tol && std::abs(s.hi - span.hi) <= tol &&
             grid.nodes % 2 == 1) {
    const std::vector<double> w = simpson_weights(grid.nodes, h);
    double mass = 0.0, acc = 0.0;
    for (std::size_t i = 0; i < grid.nodes; ++i) {
      const double wp = w[i] * prior.density(grid.at(i));
      mass += wp;
      acc += wp * info[i];
    }
    per_sensor = acc / mass;
  } else {
    const QuadratureRule rule = prior.quadrature();
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      per_sensor += rule.weights[i] * interpolate(info, grid.lo, h, rule.nodes[i]);
  }
  return FisherReport::assemble(std::vector<double>(N, per_sensor), F0, prior_fisher(prior));
}

double gaussian_single_obs_fisher(double sigma2) {
  if (!(sigma2 > 0.0))
    throw Error(ErrorKind::InvalidArgument, "fisher::gaussian_single_obs_fisher",
                "variance must be positive");
  return 1.0 / sigma2;
}

double gaussian_binary_threshold_fisher(const ParamPrior& prior, double sigma2) {
  if (!(sigma2 > 0.0))
    throw Error(ErrorKind::InvalidArgument, "fisher::gaussian_binary_threshold_fisher",
                "variance must be positive");
  const double mu = prior.mean();
  const double sigma = std::sqrt(sigma2);
  const double e = prior.expect([&](double theta) {
    const double d = theta - mu;
    const double x = -d / sigma;
    const double den = q_function(x) * q_function(-x);
    const double num = std::exp(-d * d / sigma2);
    return den > 0.0 ? num / den : 0.0;
  });
  return e / (2.0 * std::numbers::pi * sigma2);
}

double equicorrelated_fisher(std::size_t N, double sigma2, double rho) {
  const char* where = "fisher::equicorrelated_fisher";
  if (N == 0) throw Error(ErrorKind::InvalidArgument, where, "N must be at least 1");
  if (!(sigma2 > 0.0)) throw Error(ErrorKind::InvalidArgument, where, "variance must be positive");
  const double n = static_cast<double>(N);
  const double scale = 1.0 + (n - 1.0) * rho;
  if (!(rho < 1.0) || (N > 1 && !(scale > 0.0)) || !std::isfinite(rho))
    throw Error(ErrorKind::SingularCovariance, where,
                "rho = " + format_number(rho) + " is outside the positive-definite range");
  return n / (sigma2 * scale);
}

DataProcessingReport data_processing_check(const ResponseCurve& curve, const ParamPrior& prior,
                                           double i_star) {
  DataProcessingReport r;
  r.F_i = posterior_fisher(curve, prior, 1).F_D;
  r.I_star = i_star;
  if (!std::isfinite(i_star))
    r.status = DataProcessingStatus::NotApplicable;
  else
    r.status = r.F_i <= i_star + 1e-6 ? DataProcessingStatus::Holds : DataProcessingStatus::Violated;
  return r;
}

DataProcessingReport data_processing_check(const ResponseCurve& curve, const ParamPrior& prior,
                                           const NoiseModel& noise) {
  return data_processing_check(curve, prior, noise.location_fisher());
}

}  // namespace distq
