#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include "checks.hpp"
#include "distq/csv.hpp"
#include "distq/hci.hpp"
#include "distq/noise.hpp"
#include "distq/prior.hpp"
#include "distq/random.hpp"

using namespace distq;

namespace {

double trapezoid(const std::function<double(double)>& f, double a, double b, std::size_t n = 200001) {
  const double h = (b - a) / double(n - 1);
  double acc = 0.5 * (f(a) + f(b));
  for (std::size_t i = 1; i + 1 < n; ++i) acc += f(a + h * double(i));
  return acc * h;
}

std::vector<NoiseModel> noise_laws() {
  return {NoiseModel::gaussian(0.7), NoiseModel::raised_cosine(0.0), NoiseModel::raised_cosine(0.4),
          NoiseModel::tabulated({-1.0, -0.2, 0.5, 1.5}, {0.0, 1.0, 0.6, 0.0})};
}

double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = double(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = cdf(xs[i]);
    d = std::max({d, std::abs(double(i + 1) / n - F), std::abs(double(i) / n - F)});
  }
  return d;
}

}  // namespace

TEST_CASE("rng streams are pure functions of key and position") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  const Rng root(7);
  Rng c1 = root.split(3);
  Rng c0 = root.split(0);
  Rng c1_again = root.split(3);
  (void)c0.next_u64();
  CHECK(c1.next_u64() == c1_again.next_u64());
  CHECK(root.split(1).key() != root.split(2).key());
  Rng u(1);
  for (int i = 0; i < 10000; ++i) {
    const double x = u.uniform();
    CHECK((x > 0.0 && x < 1.0));
  }
}

TEST_CASE("priors integrate to one and report moments") {
  const std::vector<ParamPrior> priors = {ParamPrior::uniform(-1.0, 1.0), ParamPrior::uniform(0.5, 3.0),
                                          ParamPrior::gaussian(0.3, 2.0),
                                          ParamPrior::gaussian(0.0, 1.0, Interval{-1.0, 2.0}),
                                          ParamPrior::tabulated({-1.0, 0.0, 1.0}, {1.0, 2.0, 1.0})};
  for (const auto& p : priors) {
    const Interval s = p.support();
    CHECK(trapezoid([&](double t) { return p.density(t); }, s.lo, s.hi) == doctest::Approx(1.0).epsilon(1e-8));
    const double mean = trapezoid([&](double t) { return t * p.density(t); }, s.lo, s.hi);
    CHECK(p.mean() == doctest::Approx(mean).epsilon(1e-7));
  }
  CHECK(ParamPrior::gaussian(0.3, 2.0).variance() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK_ERROR_KIND(ParamPrior::tabulated({-1.0, 0.0, 1.0}, {1.0, -0.1, 1.0}), ErrorKind::InvalidArgument);
  CHECK_ERROR_KIND(ParamPrior::uniform(1.0, 1.0), ErrorKind::InvalidArgument);
  CHECK_ERROR_KIND(ParamPrior::gaussian(0.0, -1.0), ErrorKind::InvalidArgument);
}

TEST_CASE("sampling theta") {
  Rng rng(11);
  const auto u = ParamPrior::uniform(-1.0, 1.0);
  double sum = 0.0;
  const std::size_t n = 1000000;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = u.sample(rng);
    REQUIRE((t >= -1.0 && t <= 1.0));
    sum += t;
  }
  CHECK(std::abs(sum / double(n)) <= 3.0 / std::sqrt(3.0 * double(n)));

  const auto point = ParamPrior::tabulated({0.3}, {1.0});
  CHECK(point.is_point_mass());
  CHECK(point.sample(rng) == 0.3);

  Rng r1(5), r2(5);
  const auto g = ParamPrior::gaussian(1.0, 3.0);
  for (int i = 0; i < 50; ++i) CHECK(g.sample(r1) == g.sample(r2));
}

TEST_CASE("inverse-cdf samples follow the model law") {
  for (const auto& p : {ParamPrior::gaussian(0.0, 1.0), ParamPrior::tabulated({-1.0, 0.0, 1.0}, {1.0, 2.0, 1.0}),
                        ParamPrior::uniform(-2.0, 1.0)}) {
    Rng rng(3);
    std::vector<double> xs(100000);
    for (double& x : xs) x = p.sample(rng);
    CHECK(ks_distance(xs, [&](double t) { return p.cdf(t); }) <= 0.01);
  }
  for (const auto& w : noise_laws()) {
    Rng rng(4);
    std::vector<double> xs(100000);
    for (double& x : xs) x = w.sample(rng);
    CHECK(ks_distance(xs, [&](double t) { return w.cdf(t); }) <= 0.01);
  }
}

TEST_CASE("sampling noise") {
  Rng rng(9);
  const auto delta = NoiseModel::delta();
  const auto before = rng.counter();
  CHECK(delta.sample(rng) == 0.0);
  CHECK(rng.counter() == before);
  const auto rc = NoiseModel::raised_cosine(0.0);
  CHECK(rc.quantile(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  for (int i = 0; i < 100000; ++i) {
    const double w = rc.sample(rng);
    REQUIRE((w >= -1.0 && w <= 1.0));
  }
}

TEST_CASE("noise laws: normalisation, cdf limits and cdf' = density") {
  for (const auto& w : noise_laws()) {
    const Interval s = w.support();
    CHECK(trapezoid([&](double x) { return w.density(x); }, s.lo, s.hi) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(w.cdf(s.lo)) <= 1e-10);
    CHECK(std::abs(w.cdf(s.hi) - 1.0) <= 1e-10);
    double last = -1.0;
    for (int i = 0; i <= 2000; ++i) {
      const double c = w.cdf(s.lo + (s.hi - s.lo) * i / 2000.0);
      CHECK(c >= last);
      last = c;
    }
  }
  // central differences (fourth order) on a 1001-point grid
  for (const auto& w : {NoiseModel::gaussian(0.7), NoiseModel::raised_cosine(0.0), NoiseModel::raised_cosine(0.4)}) {
    const Interval s = w.support();
    const double h = (s.hi - s.lo) / 1000.0;
    double worst = 0.0;
    for (int i = 2; i <= 998; ++i) {
      const double x = s.lo + h * i;
      const double d =
          (w.cdf(x - 2 * h) - 8 * w.cdf(x - h) + 8 * w.cdf(x + h) - w.cdf(x + 2 * h)) / (12.0 * h);
      worst = std::max(worst, std::abs(d - w.density(x)));
    }
    CHECK(worst <= 1e-6);
  }
  CHECK(NoiseModel::raised_cosine(0.0).density(0.0) == doctest::Approx(std::numbers::pi / 4.0));
  CHECK(NoiseModel::gaussian(2.0).location_fisher() == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(std::isinf(NoiseModel::delta().location_fisher()));
  CHECK_ERROR_KIND(NoiseModel::gaussian(0.0), ErrorKind::InvalidArgument);
}

TEST_CASE("prior Fisher information") {
  CHECK(prior_fisher(ParamPrior::gaussian(0.0, 1.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(prior_fisher(ParamPrior::gaussian(0.0, 4.0)) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(prior_fisher(ParamPrior::uniform(-1.0, 1.0)) == 0.0);
  // a finely tabulated unit Gaussian approaches 1
  std::vector<double> x, d;
  for (int i = 0; i <= 1600; ++i) {
    x.push_back(-8.0 + i * 0.01);
    d.push_back(std::exp(-0.5 * x.back() * x.back()));
  }
  CHECK(prior_fisher(ParamPrior::tabulated(x, d)) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_ERROR_KIND(prior_fisher(ParamPrior::tabulated({-1.0, 0.0, 1.0}, {1.0, 0.0, 1.0})),
                   ErrorKind::UnboundedCurvature);
}

TEST_CASE("HCI pair marginals are row-stochastic") {
  Rng rng(21);
  auto stochastic = [&](std::size_t r, std::size_t c) {
    Table t(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < c; ++j) s += (t(i, j) = rng.uniform());
      for (std::size_t j = 0; j < c; ++j) t(i, j) /= s;
    }
    return t;
  };
  for (int trial = 0; trial < 20; ++trial) {
    HciModel m({-1.0, 0.0, 1.0}, {0.2, 0.5, 0.3}, stochastic(3, 4), {stochastic(4, 3), stochastic(4, 5)});
    const Table pair = m.pair_given_theta(0, 1);
    CHECK(pair.cols() == 15);
    CHECK(pair.row_stochastic(1e-12));
    CHECK(m.marginal_given_theta(1).row_stochastic(1e-12));
  }
  Table bad(3, 2, 0.4);
  CHECK_ERROR_KIND(HciModel({-1.0, 0.0, 1.0}, {0.2, 0.5, 0.3}, bad, {stochastic(2, 2)}), ErrorKind::InvalidArgument);
}

TEST_CASE("csv helpers") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, 0.0}) CHECK(std::stod(format_number(x)) == x);
  CHECK(format_number(1.0) == "1");
  const auto dir = std::filesystem::temp_directory_path() / "distq_csv_test";
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "t.csv", two_column_csv("y", "density", {0.0, 0.5, 1.0}, {0.0, 2.0, 0.0}));
  CHECK_FALSE(std::filesystem::exists(dir / "t.csv.tmp"));
  const TwoColumn t = read_two_column_csv(dir / "t.csv");
  CHECK(t.first == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(t.second == std::vector<double>{0.0, 2.0, 0.0});
  const auto noise = NoiseModel::tabulated(t.first, t.second);
  CHECK(noise.density(0.25) == doctest::Approx(1.0));
  std::filesystem::remove_all(dir);
}
