#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "potlib/quadrature.hpp"

namespace potlib {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class ProfileKind { Power, Exponential, Sinh, Tabulated, Custom };

std::string to_string(ProfileKind kind);

/// Large-r behavior of log sigma: Algebraic means log sigma ~ power * log r,
/// Stretched means log sigma ~ rate * r^power.
struct TailModel {
  enum class Kind { Algebraic, Stretched, Unknown };
  Kind kind = Kind::Unknown;
  double rate = 0.0;
  double power = 0.0;
};

/// Warping function sigma of a model manifold. Immutable after construction.
///
/// Power and Exponential tails are joined at `join` to a cubic Hermite core
/// with sigma(0) = 0 and sigma'(0) = 1 (Power(1) needs no core and is exact).
class RadialProfile {
 public:
  static RadialProfile power(double exponent, double join = 1.0);
  static RadialProfile exponential(double rate, double power, double join = 1.0);
  static RadialProfile sinh(double curvature);
  /// Strictly increasing radii starting at 0 with sigma(0) = 0. Without
  /// derivatives, Fritsch-Carlson slopes are used and the slope at 0 is pinned to 1.
  static RadialProfile tabulated(std::vector<double> radii, std::vector<double> sigma,
                                 std::vector<double> derivative = {});
  static RadialProfile custom(std::function<double(double)> value, std::function<double(double)> derivative,
                              double domain_max = kInfinity, TailModel tail = {});

  ProfileKind kind() const;
  double domain_max() const;
  TailModel tail() const;
  /// Parameters as constructed: Power {p, join}, Exponential {a, q, join}, Sinh {A}.
  std::vector<double> parameters() const;
  /// Table knots (Tabulated only).
  const std::vector<double>& knots() const;
  const std::vector<double>& knot_values() const;

  double value(double r) const;
  double derivative(double r) const;
  double second_derivative(double r) const;
  double log_value(double r) const;
  /// log sigma(x + h) - log sigma(x), evaluated without cancellation where the tail allows it.
  double log_increment(double x, double h) const;
  /// sigma'/sigma.
  double log_derivative(double r) const;

 private:
  struct Impl;
  explicit RadialProfile(std::shared_ptr<const Impl> impl);
  void validate() const;

  std::shared_ptr<const Impl> impl_;
};

/// m-dimensional model [0, inf) x_sigma S^{m-1}.
class ModelManifold {
 public:
  ModelManifold(int dimension, RadialProfile profile);

  int dimension() const { return dimension_; }
  const RadialProfile& profile() const { return profile_; }

 private:
  int dimension_;
  RadialProfile profile_;
};

/// Euclidean cone over a fiber domain of S^{m-1} with first Dirichlet eigenvalue lambda1.
class WarpedCone {
 public:
  WarpedCone(int dimension, double lambda1);

  int dimension() const { return dimension_; }
  double lambda1() const { return lambda1_; }

 private:
  int dimension_;
  double lambda1_;
};

/// Area of the unit n-sphere in R^{n+1}: 2 pi^{(n+1)/2} / Gamma((n+1)/2).
double sphere_area(int n);

double area(const ModelManifold& manifold, double r);
double log_area(const ModelManifold& manifold, double r);
/// Plain quadrature of the area; overflows to inf for fast-growing profiles.
double volume(const ModelManifold& manifold, double r, const QuadratureConfig& cfg = {.rel_tol = 1e-10});
double log_volume(const ModelManifold& manifold, double r, const QuadratureConfig& cfg = {.rel_tol = 1e-10});
/// vol(B_r) / vol(dB_r), computed in log space.
double volume_ratio(const ModelManifold& manifold, double r, const QuadratureConfig& cfg = {.rel_tol = 1e-10});

/// Radial function with optional analytic derivatives; missing ones are taken
/// by central differences with step max(1e-5, 1e-5 r).
struct RadialFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::function<double(double)> second_derivative;
};

/// f'' + (m - 1)(sigma'/sigma) f'.
double radial_laplacian(const ModelManifold& manifold, const RadialFunction& f, double r);

}  // namespace potlib
