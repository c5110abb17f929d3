#include <doctest.h>

#include <cmath>
#include <numbers>

#include "checks.hpp"
#include "distq/design.hpp"
#include "distq/fisher.hpp"
#include "oracles.hpp"

using namespace distq;
constexpr double kPi = std::numbers::pi;

namespace {

double sup_diff(const ResponseCurve& c, const std::vector<double>& ref) {
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) s = std::max(s, std::abs(c.values()[i] - ref[i]));
  return s;
}

}  // namespace

TEST_CASE("least-favourable response") {
  const auto g = least_favorable_gstar(-1.0, 1.0);
  CHECK(g.value_at(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(g.values().back() == 1.0);
  CHECK(g.values().front() == 0.0);
  const auto shifted = least_favorable_gstar(0.0, 2.0);
  CHECK(shifted.values()[1024] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(least_favorable_gstar(0.0, 2.0).endpoint_information().value() == doctest::Approx(kPi * kPi / 4.0));
  CHECK(least_favorable_gstar(-3.0, 1.0).endpoint_information().value() == doctest::Approx(kPi * kPi / 16.0));
  CHECK_ERROR_KIND(least_favorable_gstar(1.0, -1.0), ErrorKind::InvalidArgument);
}

TEST_CASE("the sine is an exact Euler-Lagrange solution for the uniform prior") {
  const auto res = euler_lagrange_residual(least_favorable_gstar(-1.0, 1.0), ParamPrior::uniform(-1.0, 1.0));
  CHECK(res.max_abs <= 1e-10);
  CHECK(res.checked == 2047);
  CHECK(design_objective(least_favorable_gstar(-1.0, 1.0), ParamPrior::uniform(-1.0, 1.0)) ==
        doctest::Approx(kPi * kPi / 4.0).epsilon(1e-6));
}

TEST_CASE("BVP, uniform prior") {
  const auto prior = ParamPrior::uniform(-1.0, 1.0);
  const auto sol = solve_euler_lagrange(prior);
  CHECK(sol.method == DesignMethod::Bvp);
  CHECK(sol.solver == "shooting");
  std::vector<double> sine;
  for (std::size_t i = 0; i < sol.gstar.size(); ++i) sine.push_back(oracle::sine_g(sol.gstar.theta(i)));
  CHECK(sup_diff(sol.gstar, sine) <= 1e-3);
  CHECK(sol.residual.max_abs <= 1e-6 * (1.0 + sol.residual.max_rhs));
  CHECK(std::isfinite(sol.ode_residual));
  const auto psi = oracle::psi_gstar([](double) { return 0.5; }, -1.0, 1.0, sol.gstar.size(), 1e-6);
  CHECK(sup_diff(sol.gstar, psi) <= 1e-6);

  // The stationary point minimises L: every perturbation raises it.
  REQUIRE(sol.stationarity.has_value());
  CHECK(sol.stationarity->kind == StationarityKind::Minimum);
  CHECK(sol.stationarity->increased == sol.stationarity->perturbations);
  BvpOptions strict;
  strict.require_maximum = true;
  CHECK_ERROR_KIND(solve_euler_lagrange(prior, kDefaultNodes, strict), ErrorKind::NotAMaximum);

  BvpOptions colloc;
  colloc.collocation_only = true;
  const auto c = solve_euler_lagrange(prior, kDefaultNodes, colloc);
  CHECK(c.solver == "collocation");
  CHECK(sup_diff(c.gstar, sine) <= 1e-3);
  CHECK(c.residual.max_abs <= 1e-6 * (1.0 + c.residual.max_rhs));
}

TEST_CASE("BVP, non-uniform priors against the conservation-law oracle") {
  const auto tri = ParamPrior::tabulated({-1.0, 0.0, 1.0}, {1.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0});
  const auto lin = ParamPrior::tabulated({-1.0, 1.0}, {0.25, 0.75});
  const auto tg = ParamPrior::gaussian(0.0, 0.5, Interval{-1.0, 1.0});
  for (const ParamPrior* p : {&tri, &lin, &tg}) {
    const auto sol = solve_euler_lagrange(*p);
    const auto ref = oracle::psi_gstar([&](double t) { return p->density(t); }, -1.0, 1.0, sol.gstar.size(), 1e-6);
    CHECK(sup_diff(sol.gstar, ref) <= 1e-5);
    CHECK(sol.residual.max_abs <= 1e-6 * (1.0 + sol.residual.max_rhs));
  }
  // even prior: g(-theta) = 1 - g(theta)
  for (const ParamPrior* p : {&tri, &tg}) {
    const auto sol = solve_euler_lagrange(*p);
    const std::size_t n = sol.gstar.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      worst = std::max(worst, std::abs(sol.gstar.values()[i] - (1.0 - sol.gstar.values()[n - 1 - i])));
    CHECK(worst <= 1e-6);
  }
  CHECK(solve_euler_lagrange(tri).residual.skipped >= 1);
}

TEST_CASE("BVP preconditions") {
  CHECK_ERROR_KIND(solve_euler_lagrange(ParamPrior::gaussian(0.0, 1.0)), ErrorKind::InvalidArgument);
  CHECK_ERROR_KIND(solve_euler_lagrange(ParamPrior::point_mass(0.0)), ErrorKind::InvalidArgument);
  CHECK_ERROR_KIND(solve_euler_lagrange(ParamPrior::uniform(-1.0, 1.0), 2048), ErrorKind::InvalidArgument);
  CHECK_ERROR_KIND(solve_euler_lagrange(ParamPrior::tabulated({-1.0, 0.0, 1.0}, {0.0, 1.0, 1.0})),
                   ErrorKind::InvalidArgument);
}

TEST_CASE("deconvolution round trips") {
  const auto gstar = least_favorable_gstar(-1.0, 1.0);
  const double h = gstar.grid().step();

  const auto delta = deconvolve_quantizer(gstar, NoiseModel::delta());
  REQUIRE(delta.ok());
  double sup = 0.0;
  for (std::size_t i = 0; i < gstar.size(); ++i) {
    const double y = gstar.theta(i);
    sup = std::max(sup, std::abs(delta.gamma->response(y) - BinaryQuantizer::sine().response(y)));
  }
  CHECK(sup <= 1e-6);
  CHECK(delta.round_trip_error <= 1e-6);

  const auto rc = deconvolve_quantizer(gstar, NoiseModel::raised_cosine(0.0));
  REQUIRE(rc.ok());
  CHECK(rc.round_trip_error <= 1e-3);
  // L1 distance to the indicator of y >= 0 over a wide window
  double l1 = 0.0;
  const double a = -3.0, b = 3.0;
  const std::size_t n = 600001;
  const double dy = (b - a) / double(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = a + dy * double(i);
    l1 += std::abs(rc.gamma->response(y) - (y >= 0.0 ? 1.0 : 0.0)) * dy;
  }
  CHECK(l1 <= 2.0 * h);

  // re-convolving what came back reproduces g*
  const auto again = response_curve(*rc.gamma, NoiseModel::raised_cosine(0.0), gstar.grid());
  for (std::size_t i = 0; i < gstar.size(); ++i) CHECK(std::abs(again.values()[i] - gstar.values()[i]) <= 1e-3);
}

TEST_CASE("wide Gaussian noise admits no quantizer") {
  const auto gstar = least_favorable_gstar(-1.0, 1.0);
  const auto r = deconvolve_quantizer(gstar, NoiseModel::gaussian(5.0));
  CHECK_FALSE(r.ok());
  REQUIRE(r.failure.has_value());
  CHECK(r.failure->reason == FailureRecord::Reason::OutOfRange);
  CHECK((r.failure->gamma_max > 1.0 + 1e-3 || r.failure->gamma_min < -1e-3));
  // clipping the inverse back into [0, 1] destroys the fit
  REQUIRE(r.failure->best_effort.has_value());
  // every 8th node of the design grid; the clipped inverse has ~1e4 breakpoints
  const auto clipped = response_curve(*r.failure->best_effort, NoiseModel::gaussian(5.0), UniformGrid{-1.0, 1.0, 257});
  double sup = 0.0;
  for (std::size_t i = 0; i < clipped.size(); ++i)
    sup = std::max(sup, std::abs(clipped.values()[i] - gstar.values()[8 * i]));
  CHECK(sup > 1e-3);
}

TEST_CASE("threshold-optimal noise") {
  const auto w = threshold_optimal_noise(0.0);
  CHECK(w.density(0.0) == doctest::Approx(kPi / 4.0).epsilon(1e-15));
  for (double T : {-0.3, 0.0, 1.7}) {
    const auto n = threshold_optimal_noise(T);
    double acc = 0.0;
    const std::size_t m = 100001;
    for (std::size_t i = 0; i < m; ++i) {
      const double x = T - 1.0 + 2.0 * double(i) / double(m - 1);
      acc += (i == 0 || i + 1 == m ? 0.5 : 1.0) * n.density(x);
    }
    CHECK(acc * 2.0 / double(m - 1) == doctest::Approx(1.0).epsilon(1e-8));
    const auto c = response_curve(BinaryQuantizer::threshold(T), n, UniformGrid{-1.0, 1.0, 1025});
    for (std::size_t i = 0; i < c.size(); ++i)
      CHECK(std::abs(c.values()[i] - oracle::sine_g(c.theta(i))) <= 1e-12);
  }
}
