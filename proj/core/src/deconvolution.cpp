#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

#include "distq/csv.hpp"
#include "distq/design.hpp"
#include "distq/error.hpp"

namespace distq {

namespace {

constexpr double kClipTol = 1e-3;
constexpr double kRoundTripTol = 1e-3;
constexpr double kTikhonov = 1e-10;
constexpr double kFlatTol = 1e-10;

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

using cvec = std::vector<std::complex<double>>;

cvec forward(std::vector<double> in) {
  const int m = static_cast<int>(in.size());
  cvec out(in.size() / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(m, in.data(), reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

std::vector<double> inverse(cvec in, std::size_t m) {
  std::vector<double> out(m);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(m), reinterpret_cast<fftw_complex*>(in.data()),
                                out.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  for (double& v : out) v /= static_cast<double>(m);
  return out;
}

// Drops interior nodes of runs where the response is flat.
void compress_flat_runs(std::vector<double>& y, std::vector<double>& r) {
  std::vector<double> ky, kr;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const bool flat_left = i > 0 && std::abs(r[i] - r[i - 1]) <= kFlatTol;
    const bool flat_right = i + 1 < y.size() && std::abs(r[i + 1] - r[i]) <= kFlatTol;
    if (flat_left && flat_right) continue;
    ky.push_back(y[i]);
    kr.push_back(r[i]);
  }
  y = std::move(ky);
  r = std::move(kr);
}

}  // namespace

DeconvolutionResult deconvolve_quantizer(const ResponseCurve& gstar, const NoiseModel& noise) {
  const char* where = "design::deconvolve_quantizer";
  const UniformGrid& grid = gstar.grid();
  const std::size_t n = grid.nodes;
  const double h = grid.step();
  const auto g = gstar.values();

  // Threshold whose exact response is subtracted before deconvolving.
  std::optional<double> step;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (g[i] < 0.5 && g[i + 1] >= 0.5) {
      step = grid.at(i) + h * (0.5 - g[i]) / (g[i + 1] - g[i]);
      break;
    }
  }
  if (!step && g[0] >= 0.5) step = grid.lo;

  std::size_t m = 1;
  while (m < 4 * n) m <<= 1;
  const std::size_t off = (m - n) / 2;
  auto y_at = [&](std::size_t j) { return grid.lo + (static_cast<double>(j) - double(off)) * h; };

  std::vector<double> d(m, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    d[off + i] = g[i] - (step ? noise.survival(*step - grid.at(i)) : 0.0);

  // r[k] = p_W(-k h) h, indices taken modulo m, so that d = r * delta_gamma.
  std::vector<double> r(m, 0.0);
  if (noise.is_delta()) {
    r[0] = 1.0;
  } else {
    const long half = static_cast<long>(m / 2);
    for (long k = -half; k < half; ++k)
      r[static_cast<std::size_t>((k + static_cast<long>(m)) % static_cast<long>(m))] =
          noise.density(-static_cast<double>(k) * h) * h;
  }

  const cvec D = forward(d);
  const cvec R = forward(r);
  double r_max = 0.0, d_max = 0.0;
  for (std::size_t k = 0; k < R.size(); ++k) {
    r_max = std::max(r_max, std::abs(R[k]));
    d_max = std::max(d_max, std::abs(D[k]));
  }
  const double alpha = kTikhonov * r_max * r_max;
  cvec Gamma(R.size());
  for (std::size_t k = 0; k < R.size(); ++k)
    Gamma[k] = D[k] * std::conj(R[k]) / (std::norm(R[k]) + alpha);
  const std::vector<double> dgamma = inverse(std::move(Gamma), m);

  DeconvolutionResult result;
  result.step_location = step.value_or(std::nan(""));

  std::vector<double> ys, rs;
  ys.reserve(m + 2);
  rs.reserve(m + 2);
  double raw_min = 1.0, raw_max = 0.0;
  const bool split_step = step && !noise.is_delta();
  bool step_inserted = !split_step;
  for (std::size_t j = 0; j < m; ++j) {
    const double y = y_at(j);
    if (!step_inserted && y >= *step) {
      // Exact jump: a node just below the threshold carrying the left limit.
      const double left = j > 0 ? dgamma[j - 1] : 0.0;
      const double frac = j > 0 ? (*step - y_at(j - 1)) / h : 1.0;
      const double at_step = left + frac * (dgamma[j] - left);
      const double below = std::nextafter(*step, -INFINITY);
      if (ys.empty() || below > ys.back()) {
        ys.push_back(below);
        rs.push_back(at_step);
      }
      if (y > *step) {
        ys.push_back(*step);
        rs.push_back(at_step + 1.0);
      }
      step_inserted = true;
    }
    const double v = dgamma[j] + (step && y >= *step ? 1.0 : 0.0);
    raw_min = std::min(raw_min, v);
    raw_max = std::max(raw_max, v);
    ys.push_back(y);
    rs.push_back(v);
  }
  for (double& v : rs) {
    raw_min = std::min(raw_min, v);
    raw_max = std::max(raw_max, v);
    v = std::clamp(v, 0.0, 1.0);
  }
  compress_flat_runs(ys, rs);
  BinaryQuantizer gamma = BinaryQuantizer::tabulated(std::move(ys), std::move(rs));

  if (raw_min < -kClipTol || raw_max > 1.0 + kClipTol) {
    FailureRecord f;
    f.reason = FailureRecord::Reason::OutOfRange;
    f.gamma_min = raw_min;
    f.gamma_max = raw_max;
    f.detail = "raw inverse spans [" + format_number(raw_min) + ", " + format_number(raw_max) +
               "], outside [0, 1] by more than 1e-3";
    f.best_effort = std::move(gamma);
    result.failure = std::move(f);
    return result;
  }

  const ResponseCurve again = response_curve(gamma, noise, grid);
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(again.values()[i] - g[i]));
  result.round_trip_error = err;
  if (err <= kRoundTripTol) {
    result.gamma = std::move(gamma);
    return result;
  }

  const double floor = std::sqrt(alpha);
  for (std::size_t k = 0; k < R.size(); ++k) {
    if (std::abs(D[k]) >= 1e-3 * d_max && std::abs(R[k]) < floor) {
      const double f = static_cast<double>(k) / (static_cast<double>(m) * h);
      throw Error(ErrorKind::SpectrumUnderflow, where,
                  "|P_W| = " + format_number(std::abs(R[k]) / h) + " at f = " + format_number(f) +
                      " where g* still carries " + format_number(std::abs(D[k]) / d_max) +
                      " of its peak spectrum");
    }
  }
  FailureRecord f;
  f.reason = FailureRecord::Reason::RoundTrip;
  f.gamma_min = raw_min;
  f.gamma_max = raw_max;
  f.round_trip_error = err;
  f.detail = "re-convolved gamma misses g* by " + format_number(err);
  f.best_effort = std::move(gamma);
  result.failure = std::move(f);
  return result;
}

}  // namespace distq
