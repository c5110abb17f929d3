#include <doctest.h>

#include <cmath>
#include <numbers>

#include "checks.hpp"
#include "distq/fisher.hpp"
#include "distq/rate.hpp"

using namespace distq;

TEST_CASE("bit budget") {
  CHECK(check_feasible({4, {2, 2, 2, 2}}));
  CHECK_FALSE(check_feasible({4, {4, 4, 2}}));
  CHECK(RateBudget{4, {4, 4, 2}}.bits_used() == 5);
  CHECK(check_feasible({3, {3}}));
  CHECK(bits_for_levels(2) == 1);
  CHECK(bits_for_levels(3) == 2);
  CHECK(bits_for_levels(4) == 2);
  CHECK(bits_for_levels(5) == 3);
  CHECK(bits_for_levels(1024) == 10);
  CHECK(bits_for_levels(1025) == 11);
  CHECK_ERROR_KIND(check_feasible({4, {1, 2}}), ErrorKind::InvalidLevels);
}

TEST_CASE("binary optimality condition") {
  CHECK(binary_optimality_condition(2.0 / std::numbers::pi, 1.0));
  CHECK_FALSE(binary_optimality_condition(0.4, 1.0));
  CHECK(binary_optimality_condition(0.5, 1.0));
  CHECK(binary_optimality_condition(0.5 * 0.37, 0.37));
  CHECK_ERROR_KIND(binary_optimality_condition(-1.0, 1.0), ErrorKind::InvalidArgument);
}

TEST_CASE("low-SNR test") {
  const auto r = gaussian_low_snr_test(0.4, 1.0);
  CHECK(r.threshold == doctest::Approx(2.0 * std::log(4.0 / std::numbers::pi)).epsilon(1e-15));
  CHECK(r.threshold == doctest::Approx(0.483129).epsilon(1e-6));
  CHECK(r.holds);
  CHECK_FALSE(gaussian_low_snr_test(1.0, 1.0).holds);
}

TEST_CASE("one bit per sensor suffices at low SNR") {
  const double edge = 2.0 * std::log(4.0 / std::numbers::pi);
  for (int k = 1; k <= 100; ++k) {
    const double ratio = edge * k / 100.0;
    for (double s2 : {1.0, 0.25}) {
      const double Fb = gaussian_binary_threshold_fisher(ParamPrior::gaussian(0.0, ratio * s2), s2);
      CHECK(binary_optimality_condition(Fb, gaussian_single_obs_fisher(s2)));
    }
  }
}

TEST_CASE("multi-level information") {
  const auto prior = ParamPrior::gaussian(0.3, 0.2);
  // D = 2 at the mean reproduces the closed form
  CHECK(multilevel_fisher(prior, 1.0, {0.3}) ==
        doctest::Approx(gaussian_binary_threshold_fisher(prior, 1.0)).epsilon(1e-9));
  const auto d2 = best_multilevel_quantizer(prior, 1.0, 2);
  CHECK(d2.breakpoints[0] == doctest::Approx(0.3).epsilon(1e-6));
  double last = 0.0;
  for (std::size_t D : {2, 3, 4, 8}) {
    for (double vt : {0.01, 0.2, 2.0, 10.0}) {
      const auto m = best_multilevel_quantizer(ParamPrior::gaussian(0.0, vt), 1.0, D);
      CHECK(m.fisher <= 1.0 + 1e-12);
      CHECK(m.breakpoints.size() == D - 1);
    }
    const auto m = best_multilevel_quantizer(ParamPrior::point_mass(0.0), 1.0, D);
    CHECK(m.fisher >= last);
    last = m.fisher;
  }
  // known optimum for four cells at a single point
  CHECK(best_multilevel_quantizer(ParamPrior::point_mass(0.0), 1.0, 4).fisher == doctest::Approx(0.8825).epsilon(1e-4));
}

TEST_CASE("ranking allocations") {
  const auto low = ParamPrior::gaussian(0.0, 0.2);
  const std::vector<RateCandidate> cands = {{"four_level", {{4, 2}}}, {"binary", {{2, 4}}}};
  const auto r = compare_rate_strategies(4, cands, low, 1.0);
  REQUIRE(r.size() == 2);
  CHECK(r[0].candidate.name == "binary");
  CHECK(r[0].rank == 1);
  CHECK(r[0].report.F_D > r[1].report.F_D);
  CHECK(r[0].report.F_D ==
        doctest::Approx(4.0 * gaussian_binary_threshold_fisher(low, 1.0)).epsilon(1e-14));
  CHECK(r[0].report.F_P == doctest::Approx(5.0));
  CHECK(r[0].bits_used == 4);

  const auto single = compare_rate_strategies(4, {{"mix", {{2, 2}, {3, 1}}}}, low, 1.0);
  REQUIRE(single.size() == 1);
  CHECK(single[0].candidate.name == "mix");
  CHECK(single[0].report.per_sensor.size() == 3);

  const auto high = compare_rate_strategies(4, cands, ParamPrior::gaussian(0.0, 10.0), 1.0);
  CHECK(high[0].report.F_D >= high[1].report.F_D);

  CHECK_ERROR_KIND(compare_rate_strategies(4, {{"greedy", {{4, 3}}}}, low, 1.0), ErrorKind::InfeasibleCandidate);
  CHECK_ERROR_KIND(compare_rate_strategies(4, {{"bad", {{1, 2}}}}, low, 1.0), ErrorKind::InvalidLevels);
}

TEST_CASE("information adds over identical sensors") {
  const auto p = ParamPrior::gaussian(0.0, 0.7);
  const auto one = compare_rate_strategies(8, {{"1", {{4, 1}}}}, p, 2.0)[0].report.F_D;
  const auto three = compare_rate_strategies(8, {{"3", {{4, 3}}}}, p, 2.0)[0].report.F_D;
  CHECK(three == doctest::Approx(3.0 * one).epsilon(1e-14));
}

TEST_CASE("optimised breakpoints are a local maximum") {
  for (const auto& prior : {ParamPrior::gaussian(0.4, 0.5), ParamPrior::uniform(-1.0, 2.0), ParamPrior::point_mass(0.0)}) {
    for (std::size_t D : {3, 4, 6}) {
      const auto m = best_multilevel_quantizer(prior, 0.7, D);
      CHECK(multilevel_fisher(prior, 0.7, m.breakpoints) == doctest::Approx(m.fisher).epsilon(1e-14));
      for (std::size_t k = 0; k < m.breakpoints.size(); ++k)
        for (double d : {-1e-3, 1e-3}) {
          auto b = m.breakpoints;
          b[k] += d;
          CHECK(multilevel_fisher(prior, 0.7, b) <= m.fisher + 1e-12);
        }
    }
  }
}
