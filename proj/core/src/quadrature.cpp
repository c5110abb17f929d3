#include "distq/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "distq/error.hpp"

namespace distq {

std::vector<double> UniformGrid::points() const {
  std::vector<double> out(nodes);
  for (std::size_t i = 0; i < nodes; ++i) out[i] = at(i);
  return out;
}

std::vector<double> simpson_weights(std::size_t nodes, double step) {
  if (nodes < 3 || nodes % 2 == 0)
    throw Error(ErrorKind::InvalidArgument, "quadrature::simpson",
                "Simpson's rule needs an odd node count >= 3");
  std::vector<double> w(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    if (i == 0 || i + 1 == nodes)
      w[i] = 1.0;
    else
      w[i] = (i % 2 == 1) ? 4.0 : 2.0;
    w[i] *= step / 3.0;
  }
  return w;
}

double simpson(std::span<const double> values, double step) {
  const std::size_t n = values.size();
  if (n < 3 || n % 2 == 0)
    throw Error(ErrorKind::InvalidArgument, "quadrature::simpson",
                "Simpson's rule needs an odd node count >= 3");
  double odd = 0.0, even = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) (i % 2 == 1 ? odd : even) += values[i];
  return step / 3.0 * (values.front() + values.back() + 4.0 * odd + 2.0 * even);
}

double simpson(const std::function<double(double)>& f, double lo, double hi,
               std::size_t nodes) {
  const UniformGrid grid{lo, hi, nodes};
  std::vector<double> v(nodes);
  for (std::size_t i = 0; i < nodes; ++i) v[i] = f(grid.at(i));
  return simpson(v, grid.step());
}

double gauss_legendre(const std::function<double(double)>& f, double lo, double hi,
                      int order) {
  if (order == 16) return boost::math::quadrature::gauss<double, 16>::integrate(f, lo, hi);
  return boost::math::quadrature::gauss<double, 8>::integrate(f, lo, hi);
}

std::vector<double> differentiate(std::span<const double> v, double h) {
  const std::size_t n = v.size();
  std::vector<double> d(n, 0.0);
  if (n < 3) {
    if (n == 2) d[0] = d[1] = (v[1] - v[0]) / h;
    return d;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 2 && i + 2 < n) {
      d[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h);
    } else if (i >= 1 && i + 1 < n) {
      d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    } else if (i == 0) {
      d[i] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    } else {
      d[i] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    }
  }
  return d;
}

double interpolate(std::span<const double> v, double lo, double h, double x) {
  const std::size_t n = v.size();
  if (n == 1) return v[0];
  const double s = (x - lo) / h;
  if (n < 4) {
    const auto i = static_cast<std::size_t>(std::clamp(std::floor(s), 0.0, double(n - 2)));
    const double t = s - static_cast<double>(i);
    return v[i] * (1.0 - t) + v[i + 1] * t;
  }
  // Stencil i0..i0+3 with x inside the middle cell where possible.
  const double cell = std::floor(s);
  const auto i0 = static_cast<std::size_t>(std::clamp(cell - 1.0, 0.0, double(n - 4)));
  double acc = 0.0;
  for (std::size_t j = 0; j < 4; ++j) {
    double basis = 1.0;
    for (std::size_t k = 0; k < 4; ++k) {
      if (k == j) continue;
      basis *= (s - double(i0 + k)) / double(static_cast<long>(j) - static_cast<long>(k));
    }
    acc += basis * v[i0 + j];
  }
  return acc;
}

}  // namespace distq
