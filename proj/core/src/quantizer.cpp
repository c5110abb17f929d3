#include "distq/quantizer.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <optional>

#include "distq/error.hpp"

namespace distq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDivergenceTol = 1e-6;
constexpr std::size_t kMaxPanels = 256;

void require(bool ok, const char* where, const char* what) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, where, what);
}

}  // namespace

BinaryQuantizer BinaryQuantizer::threshold(double threshold) {
  require(std::isfinite(threshold), "quantizer::BinaryQuantizer", "threshold must be finite");
  BinaryQuantizer q;
  q.kind_ = QuantizerKind::Threshold;
  q.threshold_ = threshold;
  q.domain_ = {threshold, threshold};
  return q;
}

BinaryQuantizer BinaryQuantizer::sine(double lo, double hi) {
  require(lo < hi, "quantizer::BinaryQuantizer", "sine quantizer needs lo < hi");
  BinaryQuantizer q;
  q.kind_ = QuantizerKind::Sine;
  q.domain_ = {lo, hi};
  return q;
}

BinaryQuantizer BinaryQuantizer::tabulated(std::vector<double> y, std::vector<double> response) {
  const char* where = "quantizer::BinaryQuantizer";
  require(!y.empty() && y.size() == response.size(), where,
          "tabulated quantizer needs matching, non-empty columns");
  for (std::size_t i = 1; i < y.size(); ++i)
    require(y[i] > y[i - 1], where, "tabulated quantizer abscissae must be strictly increasing");
  for (double r : response)
    require(r >= 0.0 && r <= 1.0, where, "tabulated response must lie in [0, 1]");
  BinaryQuantizer q;
  q.kind_ = QuantizerKind::Tabulated;
  q.domain_ = {y.front(), y.back()};
  q.ys_ = std::move(y);
  q.rs_ = std::move(response);
  return q;
}

double BinaryQuantizer::response(double y) const {
  switch (kind_) {
    case QuantizerKind::Threshold:
      return y >= threshold_ ? 1.0 : 0.0;
    case QuantizerKind::Sine: {
      if (y <= domain_.lo) return 0.0;
      if (y >= domain_.hi) return 1.0;
      // sin^2 form of (1/2)[1 + sin(pi (s - 1/2))]: no cancellation near 0.
      const double s = (y - domain_.lo) / domain_.width();
      const double h = std::sin(0.5 * kPi * s);
      return h * h;
    }
    case QuantizerKind::Tabulated: {
      if (ys_.size() == 1 || y <= ys_.front()) return rs_.front();
      if (y >= ys_.back()) return rs_.back();
      auto it = std::upper_bound(ys_.begin(), ys_.end(), y);
      const std::size_t i = it - ys_.begin();
      const double t = (y - ys_[i - 1]) / (ys_[i] - ys_[i - 1]);
      return rs_[i - 1] + t * (rs_[i] - rs_[i - 1]);
    }
  }
  return 0.0;
}

double BinaryQuantizer::response_derivative(double y) const {
  switch (kind_) {
    case QuantizerKind::Threshold:
      return 0.0;
    case QuantizerKind::Sine: {
      if (y <= domain_.lo || y >= domain_.hi) return 0.0;
      const double s = (y - domain_.lo) / domain_.width();
      return 0.5 * kPi / domain_.width() * std::sin(kPi * s) ;
    }
    case QuantizerKind::Tabulated: {
      if (ys_.size() == 1 || y < ys_.front() || y > ys_.back()) return 0.0;
      auto it = std::upper_bound(ys_.begin(), ys_.end(), y);
      std::size_t i = std::clamp<std::size_t>(it - ys_.begin(), 1, ys_.size() - 1);
      return (rs_[i] - rs_[i - 1]) / (ys_[i] - ys_[i - 1]);
    }
  }
  return 0.0;
}

std::vector<double> BinaryQuantizer::breakpoints() const {
  switch (kind_) {
    case QuantizerKind::Threshold:
      return {threshold_};
    case QuantizerKind::Sine:
      return {domain_.lo, domain_.hi};
    case QuantizerKind::Tabulated:
      return ys_;
  }
  return {};
}

int BinaryQuantizer::apply(double y, Rng& rng) const {
  if (kind_ == QuantizerKind::Threshold) return y >= threshold_ ? 1 : 0;
  return rng.bernoulli(response(y)) ? 1 : 0;
}

MultiLevelQuantizer::MultiLevelQuantizer(std::vector<double> breakpoints)
    : breakpoints_(std::move(breakpoints)) {
  if (breakpoints_.empty())
    throw Error(ErrorKind::InvalidLevels, "quantizer::MultiLevelQuantizer",
                "a quantizer needs at least two levels");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i)
    if (!(breakpoints_[i] > breakpoints_[i - 1]))
      throw Error(ErrorKind::InvalidArgument, "quantizer::MultiLevelQuantizer",
                  "breakpoints must be strictly increasing");
}

std::size_t MultiLevelQuantizer::apply(double y) const noexcept {
  return 1 + static_cast<std::size_t>(
                 std::upper_bound(breakpoints_.begin(), breakpoints_.end(), y) - breakpoints_.begin());
}

namespace {

std::vector<double> checked_values(std::vector<double> values) {
  for (double& v : values) {
    if (!(v >= -1e-12 && v <= 1.0 + 1e-12))
      throw Error(ErrorKind::InvalidArgument, "quantizer::ResponseCurve",
                  "response values must lie in [0, 1]");
    v = std::clamp(v, 0.0, 1.0);
  }
  return values;
}

}  // namespace

ResponseCurve::ResponseCurve(UniformGrid grid, std::vector<double> values)
    : grid_(grid), values_(checked_values(std::move(values))) {
  if (values_.size() != grid_.nodes || grid_.nodes < 2)
    throw Error(ErrorKind::InvalidArgument, "quantizer::ResponseCurve", "value count must match grid");
  derivative_ = differentiate(values_, grid_.step());
}

ResponseCurve::ResponseCurve(UniformGrid grid, std::vector<double> values, std::vector<double> derivative)
    : grid_(grid), values_(checked_values(std::move(values))), derivative_(std::move(derivative)) {
  if (values_.size() != grid_.nodes || derivative_.size() != grid_.nodes || grid_.nodes < 2)
    throw Error(ErrorKind::InvalidArgument, "quantizer::ResponseCurve", "value count must match grid");
}

double ResponseCurve::value_at(double t) const {
  return std::clamp(interpolate(values_, grid_.lo, grid_.step(), t), 0.0, 1.0);
}

double ResponseCurve::derivative_at(double t) const {
  return interpolate(derivative_, grid_.lo, grid_.step(), t);
}

namespace {

template <int Order>
double gl(const auto& f, double a, double b) {
  using rule = boost::math::quadrature::gauss<double, Order>;
  const auto& x = rule::abscissa();
  const auto& w = rule::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double acc = 0.0;
  // boost stores the non-negative half of a symmetric rule
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) {
      acc += w[i] * f(c);
    } else {
      acc += w[i] * (f(c + h * x[i]) + f(c - h * x[i]));
    }
  }
  return acc * h;
}

// integral over w in [lo, hi] of gamma(theta + w) p(w), split at `cuts`.
// Each segment between breakpoints starts with one and two Gauss-Legendre
// panels; a segment whose two estimates differ by more than its share of
// kDivergenceTol |total| keeps doubling. nullopt when one never settles.
std::optional<double> integrate_response(const BinaryQuantizer& q, const NoiseModel& noise, double theta,
                                         std::span<const double> noise_cuts) {
  const Interval s = noise.support();
  std::vector<double> cuts(noise_cuts.begin(), noise_cuts.end());
  for (double b : q.breakpoints()) {
    const double w = b - theta;
    if (w > s.lo && w < s.hi) cuts.push_back(w);
  }
  cuts.push_back(s.lo);
  cuts.push_back(s.hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto integrand = [&](double w) { return q.response(theta + w) * noise.density(w); };
  auto composite = [&](double a, double b, std::size_t panels) {
    const double h = (b - a) / static_cast<double>(panels);
    double total = 0.0;
    for (std::size_t k = 0; k < panels; ++k) total += gl<8>(integrand, a + h * double(k), a + h * double(k + 1));
    return total;
  };
  struct Segment {
    double a, b, coarse, fine;
  };
  std::vector<Segment> segs;
  double total = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const double a = cuts[i - 1], b = cuts[i];
    if (a < s.lo || b > s.hi || b <= a) continue;
    segs.push_back({a, b, composite(a, b, 1), composite(a, b, 2)});
    total += segs.back().fine;
  }
  if (segs.empty()) return 0.0;
  const double share = (kDivergenceTol * std::abs(total) + 1e-15) / static_cast<double>(segs.size());
  double refined = 0.0;
  for (Segment& g : segs) {
    for (std::size_t panels = 2; std::abs(g.fine - g.coarse) > share; panels *= 2) {
      if (panels >= kMaxPanels) return std::nullopt;
      g.coarse = g.fine;
      g.fine = composite(g.a, g.b, 2 * panels);
    }
    refined += g.fine;
  }
  return refined;
}

}  // namespace

ResponseCurve response_curve(const BinaryQuantizer& q, const NoiseModel& noise, const UniformGrid& grid) {
  const std::size_t n = grid.nodes;
  std::vector<double> g(n), dg(n);

  if (noise.is_delta()) {
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = q.response(grid.at(i));
      dg[i] = q.response_derivative(grid.at(i));
    }
    if (q.kind() == QuantizerKind::Tabulated || q.kind() == QuantizerKind::Threshold) {
      ResponseCurve curve(grid, std::move(g));
      return curve;
    }
    ResponseCurve curve(grid, std::move(g), std::move(dg));
    const Interval d = q.domain();
    if (std::abs(grid.lo - d.lo) < 1e-12 && std::abs(grid.hi - d.hi) < 1e-12)
      curve.set_endpoint_information(kPi * kPi / (d.width() * d.width()));
    return curve;
  }

  if (q.kind() == QuantizerKind::Threshold) {
    const double T = q.threshold_value();
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = noise.survival(T - grid.at(i));
      dg[i] = noise.density(T - grid.at(i));
    }
    return ResponseCurve(grid, std::move(g), std::move(dg));
  }

  std::vector<double> noise_cuts;
  for (double b : noise.breakpoints())
    if (b > noise.support().lo && b < noise.support().hi) noise_cuts.push_back(b);

  for (std::size_t i = 0; i < n; ++i) {
    const auto v = integrate_response(q, noise, grid.at(i), noise_cuts);
    if (!v)
      throw Error(ErrorKind::QuadratureDivergence, "quantizer::response_curve",
                  "g(" + std::to_string(grid.at(i)) + ") still moves by more than 1e-6 after " +
                      std::to_string(kMaxPanels) + " panels per segment");
    g[i] = std::clamp(*v, 0.0, 1.0);
  }
  return ResponseCurve(grid, std::move(g));
}

}  // namespace distq
