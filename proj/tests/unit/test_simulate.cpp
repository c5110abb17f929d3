#include <doctest.h>

#include <cmath>
#include <numbers>

#include "checks.hpp"
#include "distq/simulate.hpp"

using namespace distq;

TEST_CASE("arcsine estimator") {
  CHECK(mle_estimate(8, 16) == 0.0);
  CHECK(mle_estimate(16, 16) == 1.0);
  CHECK(mle_estimate(0, 16) == -1.0);
  for (std::size_t N : {1, 2, 7, 1000})
    for (std::size_t k = 0; k <= N; ++k) {
      const double t = mle_estimate(k, N);
      CHECK((t >= -1.0 && t <= 1.0));
    }
  CHECK_ERROR_KIND(mle_estimate(3, 2), ErrorKind::InvalidArgument);
  CHECK_ERROR_KIND(mle_estimate(0, 0), ErrorKind::InvalidArgument);
}

TEST_CASE("one run is its own mean") {
  SimConfig c;
  c.sensors = {64};
  c.runs = 1;
  c.seed = 9;
  const auto r = run_mse_experiment(c);
  CHECK(r.rows[0].mse == simulate_run(c, 0, 0));
  CHECK(r.rows[0].standard_error == 0.0);
  CHECK(r.rows[0].pcrlb_limit == doctest::Approx(4.0 / (64.0 * std::numbers::pi * std::numbers::pi)));
}

TEST_CASE("results do not depend on the thread count") {
  SimConfig c;
  c.sensors = {16, 100, 256};
  c.runs = 700;
  c.seed = 123;
  c.threads = 1;
  const auto a = run_mse_experiment(c);
  c.threads = 5;
  const auto b = run_mse_experiment(c);
  CHECK(a.csv() == b.csv());
  c.seed = 124;
  CHECK(run_mse_experiment(c).csv() != a.csv());
}

TEST_CASE("noiseless sine quantizer reaches 4/(N pi^2)") {
  SimConfig c;
  c.noise = NoiseModel::delta();
  c.quantizer = BinaryQuantizer::sine();
  c.sensors = {16384};
  c.runs = 5000;
  c.seed = 2024;
  c.threads = 2;
  const auto row = run_mse_experiment(c).rows[0];
  CHECK(std::abs(row.mse - row.pcrlb_limit) <= 3.0 * row.standard_error);
}

TEST_CASE("mse falls with N") {
  SimConfig c;
  c.sensors = {16, 32, 64, 128, 256, 512, 1024};
  c.runs = 2000;
  c.seed = 5;
  const auto r = run_mse_experiment(c);
  for (std::size_t i = 1; i < r.rows.size(); ++i)
    CHECK(r.rows[i].mse <= r.rows[i - 1].mse + 3.0 * (r.rows[i].standard_error + r.rows[i - 1].standard_error));
  CHECK(r.csv().rfind("N,mse,stderr,pcrlb_limit\n16,", 0) == 0);
}

TEST_CASE("configuration checks") {
  SimConfig c;
  c.sensors = {16};
  c.prior = ParamPrior::uniform(-2.0, 2.0);
  CHECK_ERROR_KIND(run_mse_experiment(c), ErrorKind::ConfigDomainMismatch);
  c.prior = ParamPrior::gaussian(0.0, 1.0);
  CHECK_ERROR_KIND(run_mse_experiment(c), ErrorKind::ConfigDomainMismatch);
  c.prior = ParamPrior::uniform(-1.0, 1.0);
  c.runs = 0;
  CHECK_ERROR_KIND(run_mse_experiment(c), ErrorKind::InvalidArgument);
  c.runs = 1;
  c.sensors = {0};
  CHECK_ERROR_KIND(run_mse_experiment(c), ErrorKind::InvalidArgument);
  CHECK(SimConfig::default_ladder().size() == 11);
}

TEST_CASE("equicorrelated curve") {
  std::vector<double> rhos;
  for (int i = 0; i < 50; ++i) rhos.push_back(0.999 * i / 49.0);
  const auto c = equicorrelated_curve(10, 1.0, rhos);
  CHECK(c.front().fisher == 10.0);
  CHECK(std::abs(c.back().fisher - 1.0) <= 0.01);
  for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i].fisher < c[i - 1].fisher);
  CHECK(equicorrelated_csv(c).rfind("rho,fisher\n0,10\n", 0) == 0);
  CHECK_ERROR_KIND(equicorrelated_curve(10, 1.0, {0.5, 1.0}), ErrorKind::SingularCovariance);
}
