#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "potlib/geometry.hpp"
#include "potlib/quadrature.hpp"

namespace potlib {

/// Exit-time samples on a 1-D coordinate with the residual |L E + 1| of the
/// governing operator at each grid point (zero at Dirichlet endpoints).
struct ExitTimeProfile {
  enum class Coordinate { Radial, Height, Busemann };

  Coordinate coordinate = Coordinate::Radial;
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> residuals;

  double max_residual() const;
};

std::string to_string(ExitTimeProfile::Coordinate c);

/// Values of a comparison exit time at a fixed base point along an increasing
/// parameter sequence (ball radius, outer horoannulus radius, slab width, ...).
struct ComparisonWitness {
  std::vector<double> parameters;
  std::vector<double> values;
  bool diverges = false;
};

/// Parameter-sequence divergence protocol: the given schedule is evaluated and
/// then continued by doubling. The sequence diverges when it is strictly
/// increasing and either passes `bound` or its increments stop shrinking over
/// `window` consecutive doublings.
struct DivergenceProtocol {
  double bound = 1e6;
  int max_doublings = 60;
  int window = 5;
};

ComparisonWitness assess_divergence(const std::function<double(double)>& value_at, std::span<const double> schedule,
                                    const DivergenceProtocol& protocol = {});

/// (R^2 - r^2) / (2m).
double euclidean_ball_exit(int m, double R, double r);
ExitTimeProfile euclidean_ball_profile(int m, double R, int points = 1000);

/// (h - 1/k)(k - h) / 2 on the slab 1/k <= h <= k.
double slab_exit(double k, double height);
ExitTimeProfile slab_profile(double k, int points = 1000);

/// Dirichlet Green's kernel of the half space {x_n > 0} in R^n (n >= 3):
/// C (|p - o|^{2-n} - |p - o'|^{2-n}) with o' the reflected pole and
/// C = 1 / ((n - 2) omega_{n-1}).
double halfspace_green(int ambient_dim, std::span<const double> p, std::span<const double> o);

/// Integral of the half-space kernel with pole x over the cylinder of lateral
/// radius R and height R above the boundary, centered laterally at x.
double halfspace_exit_partial(int ambient_dim, std::span<const double> x, double R,
                              const QuadratureConfig& cfg = {.rel_tol = 1e-8});

ComparisonWitness halfspace_exit_divergence(int ambient_dim, std::span<const double> x, std::span<const double> radii,
                                            const DivergenceProtocol& protocol = {});

/// sqrt(4B^2 + 1) / 2.
double sigma_k_bbar(double B);
/// Closed form quoted for the sigma_k problem; it solves the ODE with potential
/// B^2 / (t_k - s)^2, which dominates B^2 / (1 + (t_k - s)^2).
double sigma_k_closed_form(double B, double t_k, double s);

struct SigmaKSolution {
  RadialProfile profile;
  /// min sigma(s)/s over the grid (s > 0).
  double d_bar;
  /// max |closed_form - sigma| / sigma over grid points with s < t_k.
  double closed_form_discrepancy;
};

/// Solves sigma'' = B^2 / (1 + (t_k - s)^2) sigma, sigma(0) = 0, sigma'(0) = 1 by
/// adaptive Runge-Kutta and tabulates (sigma, sigma') on the grid.
SigmaKSolution sigma_k_solve(double B, double t_k, std::span<const double> grid);
/// Uniform grid on [0, t_k] with the given number of intervals.
std::vector<double> uniform_grid(double lo, double hi, int intervals);

/// F_k(r) = integral_r^{t_k - 1} (integral_0^t sigma^{m-1}) / sigma^{m-1}(t) dt.
double f_k_comparison(int m, const RadialProfile& sigma, double t_k, double r,
                      const QuadratureConfig& cfg = {.rel_tol = 1e-11});

/// Comparison exit time of the horoannulus R <= b <= R_k in a manifold with
/// Sect <= -A^2 and Ric >= -(m-1)B^2; exact when A == B.
double horoannulus_exit(int m, double A, double B, double R, double R_k, double b);
/// Profile with residuals of the Busemann-coordinate operator f'' + (m-1)A f'.
ExitTimeProfile horoannulus_profile(int m, double A, double B, double R, double R_k, int points = 1000);

/// One-dimensional operator L f = f'' + drift(x) f' + source.
struct LineOperator {
  std::function<double(double)> drift;
  double source = 0.0;

  static LineOperator euclidean_radial(int m);
  static LineOperator model_radial(const ModelManifold& manifold);
  /// Laplacian of a function of the distance in a space form of curvature -B^2.
  static LineOperator hyperbolic_radial(int m, double B);
};

struct KhasminskiiProblem {
  RadialFunction phi;
  LineOperator op;
  double lo = 0.0;
  double hi = 0.0;  // may be +inf
  bool superharmonic = true;
  /// Properness from coordinates other than the sampled one (e.g. a transverse eps|x|^2 term).
  bool proper_transversally = false;
  int points = 10000;
  double tolerance = 1e-10;
};

struct KhasminskiiReport {
  bool holds = false;
  bool sign_condition = false;
  bool proper = false;
  std::vector<double> violations;
};

KhasminskiiReport khasminskii_check(const KhasminskiiProblem& problem);

}  // namespace potlib
