#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace potlib {

using Integrand = std::function<double(double)>;

struct QuadratureConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double r_start = 1.0;
  double r_max = 1e12;
  double divergence_threshold = 1e9;
  int doubling_steps = 40;
  int max_subdivisions = 4000;

  /// Throws ConfigError when a field is out of range.
  void validate() const;

  bool operator==(const QuadratureConfig&) const = default;
};

/// Asymptotic shape of an integrand, f(t) ~ C t^power exp(exp_rate t^exp_power) as t -> inf.
/// exp_rate == 0 means a pure power tail.
struct TailEnvelope {
  double power = 0.0;
  double exp_rate = 0.0;
  double exp_power = 1.0;

  static TailEnvelope algebraic(double p) { return {p, 0.0, 1.0}; }
  static TailEnvelope stretched(double p, double rate, double q) { return {p, rate, q}; }

  bool divergent() const;

  /// Leading-order estimate of the integral of f over [R, inf) given f(R).
  /// Only meaningful when !divergent().
  double tail_integral(double R, double f_at_R) const;
};

enum class Convergence { Converges, Diverges, Inconclusive };

std::string to_string(Convergence c);

struct IntegralVerdict {
  Convergence status = Convergence::Inconclusive;
  double value = 0.0;  // meaningful iff status == Converges
  std::vector<std::pair<double, double>> partials;
  double tail_estimate = 0.0;

  bool converges() const { return status == Convergence::Converges; }
  bool diverges() const { return status == Convergence::Diverges; }
};

/// Adaptive Gauss-Kronrod (7/15) integral over [a, b]. Integrable endpoint
/// singularities are resolved by subdivision.
double integral(const Integrand& f, double a, double b, const QuadratureConfig& cfg = {});

/// Integral of a nonnegative f over [a, inf) decided from partial integrals at
/// doubling truncation radii. The optional envelope sharpens the tail decision.
IntegralVerdict improper_integral(const Integrand& f, double a, const QuadratureConfig& cfg = {},
                                  std::optional<TailEnvelope> envelope = std::nullopt);

/// Integral over [0, length] of a nonnegative f that is maximal at 0 and decays
/// on the scale `width`. Panels grow geometrically from width, so a spike far
/// narrower than `length` is still resolved.
double peaked_integral(const Integrand& f, double length, double width, const QuadratureConfig& cfg = {});

}  // namespace potlib
