#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "potlib/geometry.hpp"
#include "potlib/quadrature.hpp"

namespace potlib {

enum class LimitKind { Converged, DivergedToZero, DivergedToInfinity, Inconclusive };

std::string to_string(LimitKind k);

struct ExhaustionLimit {
  LimitKind kind = LimitKind::Inconclusive;
  double value = 0.0;  // meaningful for Converged (and 0 for DivergedToZero)
};

/// Samples of a monotone exhaustion sequence along increasing truncation radii.
struct ExhaustionRun {
  enum class Quantity { Harmonic, Green, ExitTime };

  Quantity quantity = Quantity::Harmonic;
  double r = 0.0;  // sampling radius
  std::vector<double> radii;
  std::vector<double> samples;
  ExhaustionLimit limit;
  /// Continuation of the defining integral past the last radius.
  IntegralVerdict continuation;

  /// v_k nonincreasing; G_k and E_k nondecreasing.
  bool monotone() const;
};

std::string to_string(ExhaustionRun::Quantity q);

/// Harmonic v on the annulus a < r < R_k with v(a) = 0, v(R_k) = 1.
double harmonic_annulus(const ModelManifold& manifold, double a, double R_k, double r, const QuadratureConfig& cfg = {});

/// v_k(r_test) over the schedule; the limit is zero exactly when the model is parabolic.
ExhaustionRun dirichlet_parabolicity_limit(const ModelManifold& manifold, double a, double r_test,
                                           std::span<const double> R_schedule, const QuadratureConfig& cfg = {});

/// G_k(r) = (1/omega_{m-1}) integral_r^{R_k} sigma^{1-m}. A finite `outer`
/// exhausts the ball of that radius instead of the whole model.
ExhaustionRun green_by_exhaustion(const ModelManifold& manifold, double r, std::span<const double> R_schedule,
                                  const QuadratureConfig& cfg = {},
                                  double outer = std::numeric_limits<double>::infinity());

/// E_k(r) = integral_r^{R_k} vol(B_t) / vol(dB_t) dt, the mean exit time of B_{R_k}.
ExhaustionRun exit_time_by_exhaustion(const ModelManifold& manifold, double r, std::span<const double> R_schedule,
                                      const QuadratureConfig& cfg = {},
                                      double outer = std::numeric_limits<double>::infinity());

/// R_0, 2 R_0, ..., 2^{n-1} R_0.
std::vector<double> doubling_schedule(double R0, int n);

}  // namespace potlib
