#include "distq/design.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>

#include "distq/csv.hpp"
#include "distq/error.hpp"
#include "distq/fisher.hpp"

namespace distq {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

std::string_view to_string(DesignMethod method) noexcept {
  switch (method) {
    case DesignMethod::ClosedForm: return "closed_form";
    case DesignMethod::Bvp: return "bvp";
    case DesignMethod::Deconvolution: return "deconvolution";
  }
  return "unknown";
}

std::string_view to_string(FailureRecord::Reason reason) noexcept {
  return reason == FailureRecord::Reason::OutOfRange ? "out_of_range" : "round_trip";
}

std::string_view to_string(StationarityKind kind) noexcept {
  switch (kind) {
    case StationarityKind::Minimum: return "minimum";
    case StationarityKind::Maximum: return "maximum";
    case StationarityKind::Saddle: return "saddle";
  }
  return "unknown";
}

ResponseCurve least_favorable_gstar(double lo, double hi, std::size_t nodes) {
  if (!(lo < hi) || nodes < 2)
    throw Error(ErrorKind::InvalidArgument, "design::least_favorable_gstar",
                "need lo < hi and at least two nodes");
  const UniformGrid grid{lo, hi, nodes};
  const double L = hi - lo;
  std::vector<double> g(nodes), dg(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double s = (grid.at(i) - lo) / L;
    const double h = std::sin(0.5 * kPi * s);
    g[i] = h * h;
    dg[i] = 0.5 * kPi / L * std::sin(kPi * s);
  }
  ResponseCurve curve(grid, std::move(g), std::move(dg));
  curve.set_endpoint_information(kPi * kPi / (L * L));
  return curve;
}

NoiseModel threshold_optimal_noise(double T) { return NoiseModel::raised_cosine(T); }

namespace {

// Weights w_k with f'(x0) ~ sum w_k f(x_k) (Fornberg's recursion, first
// derivative only).
std::vector<double> derivative_weights(double x0, std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<std::array<double, 2>> c(n, {0.0, 0.0});
  c[0][0] = 1.0;
  double c1 = 1.0;
  double c4 = x[0] - x0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min<std::size_t>(i, 1);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k)
          c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k)
        c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = c[k][1];
  return w;
}

std::vector<double> prior_kinks(const ParamPrior& prior) {
  if (prior.kind() != PriorKind::Tabulated) return {};
  const auto& nodes = prior.table_nodes();
  if (nodes.size() <= 2) return {};
  return {nodes.begin() + 1, nodes.end() - 1};
}

}  // namespace

ResidualReport euler_lagrange_residual(const ResponseCurve& curve, const ParamPrior& prior) {
  const UniformGrid& grid = curve.grid();
  const std::size_t n = grid.nodes;
  const double h = grid.step();
  const auto g = curve.values();
  const auto dg = curve.derivative();

  // Piece boundaries in node index: the stencil for g'' stays within one
  // smooth piece of the prior density.
  std::vector<double> kinks = prior_kinks(prior);
  std::vector<char> on_kink(n, 0);
  std::vector<std::size_t> piece(n, 0);
  {
    std::size_t k = 0, id = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = grid.at(i);
      while (k < kinks.size() && kinks[k] < t - 1e-9 * h) {
        ++k;
        ++id;
      }
      if (k < kinks.size() && std::abs(kinks[k] - t) <= 1e-9 * h) on_kink[i] = 1;
      piece[i] = id;
    }
  }

  ResidualReport report;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (on_kink[i]) {
      ++report.skipped;
      continue;
    }
    // A kink node shares its piece id with the piece on its left but may
    // also close the piece on its right.
    auto allowed = [&](std::size_t j) {
      return piece[j] == piece[i] || (on_kink[j] && piece[j] + 1 == piece[i]);
    };
    std::size_t first = i, last = i;
    while (first > 0 && i - first < 4 && allowed(first - 1)) --first;
    while (last + 1 < n && last - i < 4 && allowed(last + 1)) ++last;
    if (last - first + 1 < 3) {
      ++report.skipped;
      continue;
    }
    const std::size_t width = std::min<std::size_t>(5, last - first + 1);
    std::size_t lo = std::clamp(i >= 2 ? i - 2 : std::size_t{0}, first, last + 1 - width);
    const std::size_t hi = lo + width - 1;
    std::vector<double> xs, vs;
    for (std::size_t j = lo; j <= hi; ++j) {
      xs.push_back(grid.at(j));
      vs.push_back(dg[j]);
    }
    const auto w = derivative_weights(grid.at(i), xs);
    double d2 = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) d2 += w[j] * vs[j];

    const double t = grid.at(i);
    const double p = prior.density(t);
    const double dp = prior.density_derivative(t);
    const double lhs = p * dg[i] * dg[i] * (1.0 - 2.0 * g[i]);
    const double rhs = 2.0 * g[i] * (1.0 - g[i]) * (d2 * p + dg[i] * dp);
    report.max_abs = std::max(report.max_abs, std::abs(lhs - rhs));
    report.max_rhs = std::max(report.max_rhs, std::abs(rhs));
    ++report.checked;
  }
  return report;
}

double design_objective(const ResponseCurve& curve, const ParamPrior& prior) {
  const UniformGrid& grid = curve.grid();
  std::vector<double> values(curve.values().begin(), curve.values().end());
  std::vector<double> dg = differentiate(values, grid.step());
  ResponseCurve fd(grid, std::move(values), std::move(dg));
  if (curve.endpoint_information()) fd.set_endpoint_information(*curve.endpoint_information());
  const std::vector<double> info = information_profile(fd);
  std::vector<double> f(grid.nodes);
  for (std::size_t i = 0; i < grid.nodes; ++i) f[i] = prior.density(grid.at(i)) * info[i];
  return simpson(f, grid.step());
}

namespace {

using State = std::array<double, 2>;  // g and phi = 2 p g' / (g (1 - g))

struct Overshoot {};

enum class Side { Under, Over };

struct Shot {
  Side side = Side::Under;
  double g_end = 0.0;
  std::vector<double> g;
  std::vector<double> dg;
};

Shot shoot(const ParamPrior& prior, const UniformGrid& grid, double eps, double slope, double tol) {
  namespace odeint = boost::numeric::odeint;
  const double target = 1.0 - eps;
  auto system = [&prior](const State& x, State& dx, double t) {
    const double p = prior.density(t);
    dx[0] = x[1] * x[0] * (1.0 - x[0]) / (2.0 * p);
    dx[1] = -(1.0 - 2.0 * x[0]) * x[1] * x[1] / (4.0 * p);
  };
  const std::vector<double> times = grid.points();
  const double p0 = prior.density(grid.lo);
  State x{eps, 2.0 * p0 * slope / (eps * (1.0 - eps))};

  Shot shot;
  shot.g.reserve(times.size());
  std::vector<double> phi;
  phi.reserve(times.size());
  std::size_t seen = 0;
  auto observer = [&](const State& s, double) {
    ++seen;
    if (!std::isfinite(s[0]) || !std::isfinite(s[1])) throw Overshoot{};
    if (seen < times.size() && s[0] >= target) throw Overshoot{};
    shot.g.push_back(s[0]);
    phi.push_back(s[1]);
  };
  try {
    odeint::integrate_times(odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<State>()),
                            system, x, times.begin(), times.end(), grid.step(), observer,
                            odeint::max_step_checker(100000));
  } catch (const Overshoot&) {
    shot.side = Side::Over;
    return shot;
  } catch (const odeint::odeint_error&) {
    shot.side = Side::Over;
    return shot;
  }
  shot.g_end = shot.g.back();
  shot.side = shot.g_end >= target ? Side::Over : Side::Under;
  shot.dg.resize(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double p = prior.density(times[i]);
    shot.dg[i] = phi[i] * shot.g[i] * (1.0 - shot.g[i]) / (2.0 * p);
  }
  return shot;
}

std::optional<Shot> solve_by_shooting(const ParamPrior& prior, const UniformGrid& grid, double eps,
                                      double tol) {
  const double target = 1.0 - eps;
  double s_lo = 0.0;
  double s_hi = 1e-4;
  int doublings = 0;
  while (shoot(prior, grid, eps, s_hi, tol).side == Side::Under) {
    s_lo = s_hi;
    s_hi *= 2.0;
    if (++doublings > 200) return std::nullopt;
  }
  for (int it = 0; it < 300 && s_hi - s_lo > 4.0 * std::numeric_limits<double>::epsilon() * s_hi;
       ++it) {
    const double mid = 0.5 * (s_lo + s_hi);
    if (shoot(prior, grid, eps, mid, tol).side == Side::Under)
      s_lo = mid;
    else
      s_hi = mid;
  }
  Shot best = shoot(prior, grid, eps, s_lo, tol);
  if (best.side != Side::Under || std::abs(best.g_end - target) > 1e-8) return std::nullopt;
  return best;
}

// Damped Newton on the three-point discretisation of the ODE.
std::optional<std::vector<double>> solve_by_collocation(const ParamPrior& prior,
                                                        const UniformGrid& grid, double eps) {
  const std::size_t n = grid.nodes;
  const double h = grid.step();
  const double psi0 = 2.0 * std::asin(std::sqrt(eps));
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) / static_cast<double>(n - 1);
    const double v = std::sin(0.5 * (psi0 + (kPi - 2.0 * psi0) * s));
    g[i] = v * v;
  }
  g.front() = eps;
  g.back() = 1.0 - eps;
  std::vector<double> p(n), dp(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = prior.density(grid.at(i));
    dp[i] = prior.density_derivative(grid.at(i));
  }

  auto residual = [&](const std::vector<double>& v, std::vector<double>& F) {
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double a = (v[i + 1] - v[i - 1]) / (2.0 * h);
      const double b = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
      F[i] = p[i] * a * a * (1.0 - 2.0 * v[i]) - 2.0 * v[i] * (1.0 - v[i]) * (b * p[i] + a * dp[i]);
      worst = std::max(worst, std::abs(F[i]));
    }
    return worst;
  };

  std::vector<double> F(n, 0.0), lower(n), diag(n), upper(n), delta(n), trial(n);
  double norm = residual(g, F);
  for (int iter = 0; iter < 200; ++iter) {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double a = (g[i + 1] - g[i - 1]) / (2.0 * h);
      const double b = (g[i + 1] - 2.0 * g[i] + g[i - 1]) / (h * h);
      const double q = g[i] * (1.0 - g[i]);
      const double dFda = 2.0 * p[i] * a * (1.0 - 2.0 * g[i]) - 2.0 * q * dp[i];
      const double dFdb = -2.0 * q * p[i];
      const double dFdg = -2.0 * p[i] * a * a - 2.0 * (1.0 - 2.0 * g[i]) * (b * p[i] + a * dp[i]);
      lower[i] = -dFda / (2.0 * h) + dFdb / (h * h);
      upper[i] = dFda / (2.0 * h) + dFdb / (h * h);
      diag[i] = dFdg - 2.0 * dFdb / (h * h);
    }
    // Thomas algorithm on rows 1..n-2 for J delta = -F
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double l = i > 1 ? lower[i] : 0.0;
      const double den = diag[i] - l * (i > 1 ? c[i - 1] : 0.0);
      if (den == 0.0 || !std::isfinite(den)) return std::nullopt;
      c[i] = i + 2 < n ? upper[i] / den : 0.0;
      d[i] = (-F[i] - l * (i > 1 ? d[i - 1] : 0.0)) / den;
    }
    std::fill(delta.begin(), delta.end(), 0.0);
    for (std::size_t i = n - 2; i >= 1; --i) {
      delta[i] = d[i] - c[i] * (i + 2 < n ? delta[i + 1] : 0.0);
      if (i == 1) break;
    }
    double step = 1.0, trial_norm = 0.0;
    for (int k = 0; k < 40; ++k, step *= 0.5) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = std::clamp(g[i] + step * delta[i], 0.0, 1.0);
      trial_norm = residual(trial, F);
      if (trial_norm < norm || trial_norm == 0.0) break;
    }
    double moved = 0.0;
    for (std::size_t i = 0; i < n; ++i) moved = std::max(moved, std::abs(trial[i] - g[i]));
    g = trial;
    norm = residual(g, F);
    if (moved < 1e-14) return g;
  }
  return std::nullopt;
}

StationarityReport classify_stationary_point(const ResponseCurve& gstar, const ParamPrior& prior,
                                             const BvpOptions& options) {
  const UniformGrid& grid = gstar.grid();
  const std::size_t n = grid.nodes;
  const auto g = gstar.values();
  std::vector<double> psi(n);
  for (std::size_t i = 0; i < n; ++i) psi[i] = 2.0 * std::asin(std::sqrt(std::clamp(g[i], 0.0, 1.0)));

  StationarityReport report;
  report.objective = design_objective(gstar, prior);
  report.perturbations = options.perturbations;
  const double tol = 1e-12 * std::abs(report.objective);
  const Rng master(options.perturbation_seed);
  std::vector<double> trial(n);
  for (std::size_t k = 0; k < options.perturbations; ++k) {
    Rng rng = master.split(k);
    std::array<double, 4> a{};
    for (double& v : a) v = 2.0 * rng.uniform() - 1.0;
    double run = psi.front();
    for (std::size_t i = 0; i < n; ++i) {
      const double s = static_cast<double>(i) / static_cast<double>(n - 1);
      double bump = 0.0;
      for (std::size_t m = 0; m < a.size(); ++m) bump += a[m] * std::sin(kPi * double(m + 1) * s);
      double v = psi[i] + 0.5 * options.perturbation_size * bump;
      if (i == 0 || i + 1 == n) v = psi[i];
      run = std::clamp(std::max(run, v), psi.front(), psi.back());
      const double h = std::sin(0.5 * run);
      trial[i] = h * h;
    }
    ResponseCurve perturbed(grid, trial);
    if (gstar.endpoint_information()) perturbed.set_endpoint_information(*gstar.endpoint_information());
    const double diff = design_objective(perturbed, prior) - report.objective;
    if (diff > tol) {
      ++report.increased;
      report.max_increase = std::max(report.max_increase, diff);
    } else if (diff < -tol) {
      ++report.decreased;
      report.max_decrease = std::max(report.max_decrease, -diff);
    }
  }
  if (report.decreased == 0 && report.increased > 0)
    report.kind = StationarityKind::Minimum;
  else if (report.increased == 0 && report.decreased > 0)
    report.kind = StationarityKind::Maximum;
  else
    report.kind = StationarityKind::Saddle;
  return report;
}

}  // namespace

DesignSolution solve_euler_lagrange(const ParamPrior& prior, std::size_t nodes,
                                    const BvpOptions& options) {
  const char* where = "design::solve_euler_lagrange";
  if (!prior.bounded() || prior.is_point_mass())
    throw Error(ErrorKind::InvalidArgument, where, "the prior needs a bounded support of positive width");
  if (nodes < 5 || nodes % 2 == 0)
    throw Error(ErrorKind::InvalidArgument, where, "grid needs an odd node count >= 5");
  const double eps = options.boundary_inset;
  if (!(eps > 0.0 && eps < 0.5))
    throw Error(ErrorKind::InvalidArgument, where, "boundary inset must lie in (0, 1/2)");
  const UniformGrid grid{prior.support().lo, prior.support().hi, nodes};
  for (std::size_t i = 0; i < nodes; ++i)
    if (!(prior.density(grid.at(i)) > 0.0))
      throw Error(ErrorKind::InvalidArgument, where,
                  "prior density must be positive on the closed support, zero at " +
                      format_number(grid.at(i)));

  std::optional<DesignSolution> found;
  if (!options.collocation_only) {
    for (double tol : {1e-12, 1e-10}) {
      if (auto shot = solve_by_shooting(prior, grid, eps, tol)) {
        found.emplace(ResponseCurve(grid, std::move(shot->g), std::move(shot->dg)));
        found->solver = "shooting";
        break;
      }
    }
  }
  if (!found) {
    if (auto g = solve_by_collocation(prior, grid, eps)) {
      found.emplace(ResponseCurve(grid, std::move(*g)));
      found->solver = "collocation";
    }
  }
  if (!found)
    throw Error(ErrorKind::NoConvergence, where,
                "shooting (two tolerances) and collocation all failed");

  DesignSolution& sol = *found;
  sol.method = DesignMethod::Bvp;
  sol.residual = euler_lagrange_residual(sol.gstar, prior);
  sol.ode_residual = sol.residual.max_abs;
  if (options.perturbations > 0) {
    sol.stationarity = classify_stationary_point(sol.gstar, prior, options);
    if (options.require_maximum && sol.stationarity->kind != StationarityKind::Maximum)
      throw Error(ErrorKind::NotAMaximum, where,
                  std::to_string(sol.stationarity->increased) + " of " +
                      std::to_string(sol.stationarity->perturbations) +
                      " perturbations increase L(g)");
  }
  return std::move(sol);
}

}  // namespace distq
