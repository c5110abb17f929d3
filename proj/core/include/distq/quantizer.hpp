#pragma once

#include <optional>
#include <span>
#include <vector>

#include "distq/noise.hpp"
#include "distq/quadrature.hpp"
#include "distq/random.hpp"

namespace distq {

enum class QuantizerKind { Threshold, Sine, Tabulated };

/// Stochastic binary quantizer described by its response gamma(y) = P(U=1 | Y=y).
class BinaryQuantizer {
 public:
  /// gamma(y) = 1 for y >= threshold, else 0.
  static BinaryQuantizer threshold(double threshold);
  /// gamma(y) = (1/2)[1 + sin(pi ((y - lo)/(hi - lo) - 1/2))] on [lo, hi],
  /// 0 below and 1 above.
  static BinaryQuantizer sine(double lo = -1.0, double hi = 1.0);
  /// Piecewise-linear response through (y_i, r_i), held constant outside.
  static BinaryQuantizer tabulated(std::vector<double> y, std::vector<double> response);

  QuantizerKind kind() const noexcept { return kind_; }
  double threshold_value() const noexcept { return threshold_; }
  Interval domain() const noexcept { return domain_; }
  const std::vector<double>& table_y() const noexcept { return ys_; }
  const std::vector<double>& table_response() const noexcept { return rs_; }

  double response(double y) const;
  /// d gamma / dy where it exists (0 at the threshold jump).
  double response_derivative(double y) const;
  /// Points where gamma is not smooth.
  std::vector<double> breakpoints() const;

  /// One quantised bit. Threshold quantizers consume no randomness.
  int apply(double y, Rng& rng) const;

 private:
  BinaryQuantizer() = default;

  QuantizerKind kind_ = QuantizerKind::Threshold;
  double threshold_ = 0.0;
  Interval domain_{};
  std::vector<double> ys_;
  std::vector<double> rs_;
};

/// Deterministic D-level partition of the real line.
class MultiLevelQuantizer {
 public:
  explicit MultiLevelQuantizer(std::vector<double> breakpoints);

  std::size_t levels() const noexcept { return breakpoints_.size() + 1; }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }

  /// Symbol in 1..D: one plus the number of breakpoints <= y, so a value
  /// exactly on a breakpoint lands in the upper cell.
  std::size_t apply(double y) const noexcept;

 private:
  std::vector<double> breakpoints_;
};

/// g(theta) = P(U = 1 | theta) tabulated on a uniform theta grid together
/// with g'(theta).
class ResponseCurve {
 public:
  /// Derivative by finite differences of the values.
  ResponseCurve(UniformGrid grid, std::vector<double> values);
  /// Derivative supplied (e.g. analytic).
  ResponseCurve(UniformGrid grid, std::vector<double> values, std::vector<double> derivative);

  const UniformGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  double theta(std::size_t i) const noexcept { return grid_.at(i); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> derivative() const noexcept { return derivative_; }

  double value_at(double theta) const;
  double derivative_at(double theta) const;

  /// Known limit of I(theta) at the grid ends where g reaches 0 or 1.
  const std::optional<double>& endpoint_information() const noexcept { return endpoint_info_; }
  void set_endpoint_information(double limit) { endpoint_info_ = limit; }

 private:
  UniformGrid grid_;
  std::vector<double> values_;
  std::vector<double> derivative_;
  std::optional<double> endpoint_info_;
};

/// g(theta) = integral gamma(y) p_W(y - theta) dy on `grid`.
///
/// Delta noise short-circuits to g = gamma; threshold quantizers use the
/// closed form P(W >= T - theta) with derivative p_W(T - theta); everything
/// else is integrated piecewise with Gauss-Legendre between breakpoints and
/// checked against a doubled rule (QuadratureDivergence when the relative
/// change exceeds 1e-6).
ResponseCurve response_curve(const BinaryQuantizer& q, const NoiseModel& noise,
                             const UniformGrid& grid);

}  // namespace distq
