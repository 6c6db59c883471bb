#pragma once

#include <optional>
#include <span>

#include "potlib/exittime.hpp"
#include "potlib/geometry.hpp"

namespace potlib {

/// Type of the Euclidean cone over a fiber domain with first Dirichlet eigenvalue lambda1.
struct ConeVerdict {
  double lambda1 = 0.0;
  double threshold = 0.0;  // 2m
  bool l1_liouville = false;
  std::optional<double> alpha;  // present when lambda1 < 2m
  /// h_R at the base point along the radius schedule (lambda1 <= 2m).
  std::optional<ComparisonWitness> witness;
  /// Coefficient c of the supersolution bound c r^2 (lambda1 > 2m).
  std::optional<double> bound_coefficient;
};

/// First Dirichlet eigenvalue of the geodesic cap of half-angle theta0 in
/// S^{m-1}, by shooting on u'' + (m-2) cot(theta) u' + lambda u = 0, u'(0) = 0.
double lambda1_cap(int m, double theta0);

/// (-(m-2) + sqrt((m-2)^2 + 4 lambda)) / 2.
double cone_alpha(int m, double lambda);

/// Exit-time profile of the truncated cone radial problem for lambda < 2m:
/// h'' + (m-1)/r h' - lambda/r^2 h = -1 on (0, R), h(0) = h(R) = 0.
double h_R_profile(int m, double lambda, double R, double r);
/// The lambda = 2m analogue on [1, R].
double h_R_critical(int m, double R, double r);

/// Grid samples with ODE residuals from the symbolic derivatives.
ExitTimeProfile h_R_table(int m, double lambda, double R, int points = 1000);
ExitTimeProfile h_R_critical_table(int m, double R, int points = 1000);

/// Supersolution bound r^2 u_max / ((lambda' - 2m) u_min) on the exit time of
/// a cone whose fiber eigenvalue exceeds 2m.
double supercritical_exit_bound(int m, double lambda_prime, double u_min, double r, double u_max = 1.0);

ConeVerdict cone_verdict(int m, double lambda1, std::span<const double> R_schedule, double u_min = 1.0,
                         const DivergenceProtocol& protocol = {});

}  // namespace potlib
