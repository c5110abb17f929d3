#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "distq/noise.hpp"
#include "distq/prior.hpp"
#include "distq/quantizer.hpp"

namespace distq {

enum class DesignMethod { ClosedForm, Bvp, Deconvolution };
std::string_view to_string(DesignMethod method) noexcept;

/// Why a deconvolution did not yield a usable quantizer.
struct FailureRecord {
  enum class Reason { OutOfRange, RoundTrip };
  Reason reason = Reason::OutOfRange;
  std::string detail;
  double gamma_min = 0.0;  // raw inverse, before clipping
  double gamma_max = 0.0;
  double round_trip_error = -1.0;  // negative when not computed
  /// The clipped best-effort inverse, kept for inspection.
  std::optional<BinaryQuantizer> best_effort;
};
std::string_view to_string(FailureRecord::Reason reason) noexcept;

enum class StationarityKind { Minimum, Maximum, Saddle };
std::string_view to_string(StationarityKind kind) noexcept;

/// Outcome of comparing L(g) against random boundary-preserving perturbations.
struct StationarityReport {
  StationarityKind kind = StationarityKind::Saddle;
  double objective = 0.0;
  std::size_t perturbations = 0;
  std::size_t increased = 0;  // perturbations with L above the solution
  std::size_t decreased = 0;
  double max_increase = 0.0;
  double max_decrease = 0.0;
};

struct ResidualReport {
  double max_abs = 0.0;  // max |LHS - RHS| over checked nodes
  double max_rhs = 0.0;  // max |RHS| over checked nodes
  std::size_t checked = 0;
  std::size_t skipped = 0;  // nodes sitting on a kink of the prior density
  double scaled() const noexcept { return max_abs / (1.0 + max_rhs); }
};

struct DesignSolution {
  explicit DesignSolution(ResponseCurve curve) : gstar(std::move(curve)) {}

  ResponseCurve gstar;
  DesignMethod method = DesignMethod::ClosedForm;
  std::string solver;  // "closed_form", "shooting" or "collocation"
  std::optional<BinaryQuantizer> gamma;
  std::optional<FailureRecord> failure;
  ResidualReport residual;
  double ode_residual = 0.0;  // residual.max_abs
  std::optional<StationarityReport> stationarity;
};

/// g*(theta) = (1/2)[1 + sin(pi ((theta - lo)/(hi - lo) - 1/2))] on a grid of
/// `nodes` points, with analytic derivative and the constant information
/// (pi / (hi - lo))^2 as endpoint limit.
ResponseCurve least_favorable_gstar(double lo, double hi, std::size_t nodes = kDefaultNodes);

/// Residual of p g'^2 (1 - 2g) = 2 g (1 - g)(g'' p + g' p') on the interior
/// nodes. g' comes from the curve, g'' from a five-point difference of g'
/// that does not straddle a kink of the prior density.
ResidualReport euler_lagrange_residual(const ResponseCurve& curve, const ParamPrior& prior);

/// L(g) = integral p(theta) g'^2 / (g (1 - g)) over the curve grid, with g'
/// from finite differences of the values (Simpson; odd node count).
double design_objective(const ResponseCurve& curve, const ParamPrior& prior);

struct BvpOptions {
  double boundary_inset = 1e-6;
  std::size_t perturbations = 200;
  double perturbation_size = 0.01;
  std::uint64_t perturbation_seed = 0x5eed;
  /// Throw NotAMaximum unless every perturbation lowers L.
  bool require_maximum = false;
  /// Skip shooting and go straight to collocation.
  bool collocation_only = false;
};

/// Solves the Euler-Lagrange boundary value problem on the prior support
/// with g(lo) = eps, g(hi) = 1 - eps. Shooting on g'(lo) with bisection,
/// falling back to damped-Newton collocation; NoConvergence when both fail.
/// The solution is classified against random perturbations; see
/// StationarityReport.
DesignSolution solve_euler_lagrange(const ParamPrior& prior, std::size_t nodes = kDefaultNodes,
                                    const BvpOptions& options = {});

struct DeconvolutionResult {
  std::optional<BinaryQuantizer> gamma;
  std::optional<FailureRecord> failure;
  double round_trip_error = -1.0;
  double step_location = 0.0;
  bool ok() const noexcept { return gamma.has_value(); }
};

/// Recovers gamma with integral gamma(y) p_W(y - theta) dy = g*(theta).
///
/// The exact response of a threshold at the g* = 1/2 crossing is
/// subtracted first; the compactly supported remainder is deconvolved by FFT
/// on a zero-padded grid with Tikhonov weight 1e-10 max|P_W|^2. A raw
/// inverse outside [-1e-3, 1 + 1e-3] is reported as a failure, as is a
/// re-convolution that misses g* by more than 1e-3; the latter throws
/// SpectrumUnderflow instead when the noise spectrum vanishes where g*
/// still has content.
DeconvolutionResult deconvolve_quantizer(const ResponseCurve& gstar, const NoiseModel& noise);

/// Raised-cosine noise centred at T: under it a threshold at T has the
/// least-favourable response 1 - F_W(T - theta) = g*(theta) on [-1, 1].
NoiseModel threshold_optimal_noise(double T);

}  // namespace distq
