#include "distq/prior.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "distq/error.hpp"

namespace distq {

namespace {

constexpr double kTailSigmas = 8.0;
constexpr double kMaxDiscardedMass = 1e-10;

double phi(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double Phi(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double inverse_Phi(double u) {
  static const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, u);
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, "prob_model::ParamPrior", what);
}

}  // namespace

double QuadratureRule::expect(const std::function<double(double)>& f) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (weights[i] != 0.0) acc += weights[i] * f(nodes[i]);
  return acc;
}

ParamPrior ParamPrior::uniform(double lo, double hi) {
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "uniform prior needs lo < hi");
  ParamPrior p;
  p.kind_ = PriorKind::Uniform;
  p.support_ = {lo, hi};
  p.mean_ = 0.5 * (lo + hi);
  p.variance_ = (hi - lo) * (hi - lo) / 12.0;
  return p;
}

ParamPrior ParamPrior::gaussian(double mean, double variance) {
  require(std::isfinite(mean), "gaussian prior mean must be finite");
  require(variance > 0.0 && std::isfinite(variance), "gaussian prior variance must be positive");
  ParamPrior p;
  p.kind_ = PriorKind::Gaussian;
  p.g_mean_ = mean;
  p.g_sigma_ = std::sqrt(variance);
  p.support_ = {mean - kTailSigmas * p.g_sigma_, mean + kTailSigmas * p.g_sigma_};
  p.mean_ = mean;
  p.variance_ = variance;
  return p;
}

ParamPrior ParamPrior::gaussian(double mean, double variance, Interval truncation) {
  ParamPrior p = gaussian(mean, variance);
  require(truncation.lo < truncation.hi, "truncation interval must satisfy lo < hi");
  const double a = (truncation.lo - mean) / p.g_sigma_;
  const double b = (truncation.hi - mean) / p.g_sigma_;
  p.trunc_cdf_lo_ = Phi(a);
  p.trunc_mass_ = Phi(b) - p.trunc_cdf_lo_;
  require(p.trunc_mass_ > 1e-300, "truncation interval carries no prior mass");
  p.truncation_ = truncation;
  p.support_ = truncation;
  p.finish_moments();
  return p;
}

ParamPrior ParamPrior::tabulated(std::vector<double> nodes, std::vector<double> density) {
  require(!nodes.empty() && nodes.size() == density.size(),
          "tabulated prior needs matching, non-empty node and density lists");
  for (double d : density) require(d >= 0.0 && std::isfinite(d), "tabulated density must be nonnegative");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    require(nodes[i] > nodes[i - 1], "tabulated prior nodes must be strictly increasing");
  ParamPrior p;
  p.kind_ = PriorKind::Tabulated;
  if (nodes.size() == 1) {
    p.nodes_ = std::move(nodes);
    p.dens_ = {1.0};
    p.cum_ = {1.0};
    p.support_ = {p.nodes_[0], p.nodes_[0]};
    p.mean_ = p.nodes_[0];
    p.variance_ = 0.0;
    return p;
  }
  double area = 0.0;
  for (std::size_t i = 1; i < nodes.size(); ++i)
    area += 0.5 * (density[i] + density[i - 1]) * (nodes[i] - nodes[i - 1]);
  require(area > 0.0, "tabulated density has zero mass");
  for (double& d : density) d /= area;
  p.cum_.assign(nodes.size(), 0.0);
  for (std::size_t i = 1; i < nodes.size(); ++i)
    p.cum_[i] = p.cum_[i - 1] + 0.5 * (density[i] + density[i - 1]) * (nodes[i] - nodes[i - 1]);
  p.support_ = {nodes.front(), nodes.back()};
  p.nodes_ = std::move(nodes);
  p.dens_ = std::move(density);
  p.finish_moments();
  return p;
}

ParamPrior ParamPrior::point_mass(double at) { return tabulated({at}, {1.0}); }

void ParamPrior::finish_moments() {
  const QuadratureRule rule = quadrature();
  mean_ = rule.expect([](double t) { return t; });
  const double m = mean_;
  variance_ = rule.expect([m](double t) { return (t - m) * (t - m); });
}

double ParamPrior::density(double t) const {
  switch (kind_) {
    case PriorKind::Uniform:
      return support_.contains(t) ? 1.0 / support_.width() : 0.0;
    case PriorKind::Gaussian: {
      if (truncation_ && !truncation_->contains(t)) return 0.0;
      return phi((t - g_mean_) / g_sigma_) / (g_sigma_ * trunc_mass_);
    }
    case PriorKind::Tabulated: {
      if (nodes_.size() == 1) return 0.0;
      if (t < nodes_.front() || t > nodes_.back()) return 0.0;
      auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
      std::size_t i = std::min<std::size_t>(it - nodes_.begin(), nodes_.size() - 1);
      if (i == 0) i = 1;
      const double s = (t - nodes_[i - 1]) / (nodes_[i] - nodes_[i - 1]);
      return dens_[i - 1] + s * (dens_[i] - dens_[i - 1]);
    }
  }
  return 0.0;
}

double ParamPrior::density_derivative(double t) const {
  switch (kind_) {
    case PriorKind::Uniform:
      return 0.0;
    case PriorKind::Gaussian:
      return -(t - g_mean_) / (g_sigma_ * g_sigma_) * density(t);
    case PriorKind::Tabulated: {
      if (nodes_.size() == 1 || t < nodes_.front() || t > nodes_.back()) return 0.0;
      auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t);
      const std::size_t i = it - nodes_.begin();
      auto slope = [&](std::size_t j) {
        return (dens_[j] - dens_[j - 1]) / (nodes_[j] - nodes_[j - 1]);
      };
      if (i < nodes_.size() && nodes_[i] == t) {
        // At a node: average of the adjacent cell slopes.
        if (i == 0) return slope(1);
        if (i + 1 == nodes_.size()) return slope(i);
        return 0.5 * (slope(i) + slope(i + 1));
      }
      return slope(i);
    }
  }
  return 0.0;
}

double ParamPrior::log_curvature(double t) const {
  switch (kind_) {
    case PriorKind::Uniform:
      return 0.0;
    case PriorKind::Gaussian:
      return -1.0 / (g_sigma_ * g_sigma_);
    case PriorKind::Tabulated: {
      if (nodes_.size() < 3) return nodes_.size() == 1 ? -std::numeric_limits<double>::infinity() : 0.0;
      // Three-point second difference of ln p on the (possibly non-uniform)
      // table, linearly interpolated between interior nodes.
      auto curv = [&](std::size_t i) {
        const double l0 = std::log(dens_[i - 1]), l1 = std::log(dens_[i]), l2 = std::log(dens_[i + 1]);
        if (!std::isfinite(l0) || !std::isfinite(l1) || !std::isfinite(l2))
          return -std::numeric_limits<double>::infinity();
        const double h0 = nodes_[i] - nodes_[i - 1], h1 = nodes_[i + 1] - nodes_[i];
        return 2.0 * (h0 * l2 - (h0 + h1) * l1 + h1 * l0) / (h0 * h1 * (h0 + h1));
      };
      const std::size_t n = nodes_.size();
      if (t <= nodes_[1]) return curv(1);
      if (t >= nodes_[n - 2]) return curv(n - 2);
      auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
      const std::size_t i = it - nodes_.begin();
      const double s = (t - nodes_[i - 1]) / (nodes_[i] - nodes_[i - 1]);
      return (1.0 - s) * curv(i - 1) + s * curv(i);
    }
  }
  return 0.0;
}

double ParamPrior::cdf(double t) const {
  switch (kind_) {
    case PriorKind::Uniform:
      return std::clamp((t - support_.lo) / support_.width(), 0.0, 1.0);
    case PriorKind::Gaussian: {
      const double c = Phi((t - g_mean_) / g_sigma_);
      if (!truncation_) return c;
      return std::clamp((c - trunc_cdf_lo_) / trunc_mass_, 0.0, 1.0);
    }
    case PriorKind::Tabulated: {
      if (t < nodes_.front()) return 0.0;
      if (t >= nodes_.back()) return 1.0;
      auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
      const std::size_t i = it - nodes_.begin();
      const double dx = t - nodes_[i - 1];
      const double slope = (dens_[i] - dens_[i - 1]) / (nodes_[i] - nodes_[i - 1]);
      return cum_[i - 1] + dens_[i - 1] * dx + 0.5 * slope * dx * dx;
    }
  }
  return 0.0;
}

double ParamPrior::quantile(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  switch (kind_) {
    case PriorKind::Uniform:
      return support_.lo + u * support_.width();
    case PriorKind::Gaussian: {
      const double target = truncation_ ? trunc_cdf_lo_ + u * trunc_mass_ : u;
      const double z = inverse_Phi(std::clamp(target, 1e-300, 1.0 - 1e-16));
      const double t = g_mean_ + g_sigma_ * z;
      return truncation_ ? std::clamp(t, truncation_->lo, truncation_->hi) : t;
    }
    case PriorKind::Tabulated: {
      if (nodes_.size() == 1) return nodes_[0];
      auto it = std::lower_bound(cum_.begin(), cum_.end(), u);
      std::size_t i = std::clamp<std::size_t>(it - cum_.begin(), 1, nodes_.size() - 1);
      // Solve cum[i-1] + d0*x + 0.5*s*x^2 = u inside cell i.
      const double d0 = dens_[i - 1];
      const double w = nodes_[i] - nodes_[i - 1];
      const double s = (dens_[i] - d0) / w;
      const double r = u - cum_[i - 1];
      double x;
      if (std::abs(s) * w < 1e-12 * std::max(d0, 1e-300)) {
        x = d0 > 0.0 ? r / d0 : 0.0;
      } else {
        const double disc = std::max(d0 * d0 + 2.0 * s * r, 0.0);
        x = 2.0 * r / (d0 + std::sqrt(disc));  // stable root
      }
      return nodes_[i - 1] + std::clamp(x, 0.0, w);
    }
  }
  return 0.0;
}

double ParamPrior::sample(Rng& rng) const {
  if (is_point_mass()) return nodes_[0];
  return quantile(rng.uniform());
}

QuadratureRule ParamPrior::quadrature(std::size_t nodes) const {
  QuadratureRule rule;
  if (is_point_mass()) {
    rule.nodes = {nodes_[0]};
    rule.weights = {1.0};
    return rule;
  }
  if (kind_ == PriorKind::Gaussian && !truncation_) {
    const double discarded = std::erfc(kTailSigmas / std::numbers::sqrt2);
    if (discarded >= kMaxDiscardedMass)
      throw Error(ErrorKind::QuadratureDivergence, "prob_model::ParamPrior::quadrature",
                  "tail truncation discards too much prior mass");
  }
  const UniformGrid grid{support_.lo, support_.hi, nodes};
  rule.nodes = grid.points();
  rule.weights = simpson_weights(nodes, grid.step());
  double total = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    rule.weights[i] *= density(rule.nodes[i]);
    total += rule.weights[i];
  }
  for (double& w : rule.weights) w /= total;
  return rule;
}

double ParamPrior::expect(const std::function<double(double)>& f, std::size_t nodes) const {
  return quadrature(nodes).expect(f);
}

double prior_fisher(const ParamPrior& prior) {
  switch (prior.kind()) {
    case PriorKind::Uniform:
      return 0.0;  // interior curvature vanishes; boundary excluded
    case PriorKind::Gaussian:
      return 1.0 / (prior.gaussian_sigma() * prior.gaussian_sigma());
    case PriorKind::Tabulated:
      break;
  }
  const auto& x = prior.table_nodes();
  const auto& p = prior.table_density();
  if (x.size() == 1)
    throw Error(ErrorKind::UnboundedCurvature, "prob_model::prior_fisher",
                "a point-mass prior has unbounded log-curvature");
  if (x.size() < 3) return 0.0;  // a single linear cell has no interior node
  double acc = 0.0;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const double c = prior.log_curvature(x[i]);
    if (!std::isfinite(c) || std::abs(c) > 1e12)
      throw Error(ErrorKind::UnboundedCurvature, "prob_model::prior_fisher",
                  "second difference of ln p diverges near theta = " + std::to_string(x[i]));
    acc += -c * p[i] * 0.5 * (x[i + 1] - x[i - 1]);
  }
  return acc;
}

}  // namespace distq
