#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace distq {

/// Default node count for every continuous quadrature in the library.
inline constexpr std::size_t kDefaultNodes = 2049;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  bool contains(const Interval& other, double tol = 0.0) const noexcept {
    return other.lo >= lo - tol && other.hi <= hi + tol;
  }
};

/// Uniformly spaced nodes lo, lo+h, ..., hi.
struct UniformGrid {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t nodes = kDefaultNodes;

  double step() const noexcept { return (hi - lo) / static_cast<double>(nodes - 1); }
  double at(std::size_t i) const noexcept {
    return i + 1 == nodes ? hi : lo + static_cast<double>(i) * step();
  }
  std::vector<double> points() const;
};

/// Composite Simpson weights for `nodes` (odd, >= 3) equally spaced points.
std::vector<double> simpson_weights(std::size_t nodes, double step);

/// Composite Simpson rule over equally spaced samples.
double simpson(std::span<const double> values, double step);

/// Composite Simpson rule of `f` on [lo, hi] with `nodes` points.
double simpson(const std::function<double(double)>& f, double lo, double hi,
               std::size_t nodes = kDefaultNodes);

/// Gauss-Legendre rule with `order` points (8 or 16) on [lo, hi].
double gauss_legendre(const std::function<double(double)>& f, double lo, double hi,
                      int order = 8);

/// Fourth-order finite-difference derivative of equally spaced samples:
/// 5-point central stencil in the interior, 3-point central one node in
/// from each end, 3-point one-sided at the ends.
std::vector<double> differentiate(std::span<const double> values, double step);

/// Four-point Lagrange interpolation on equally spaced samples.
double interpolate(std::span<const double> values, double lo, double step, double x);

}  // namespace distq
