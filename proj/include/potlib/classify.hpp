#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "potlib/geometry.hpp"
#include "potlib/quadrature.hpp"

namespace potlib {

enum class Verdict { Yes, No, Inconclusive };

std::string to_string(Verdict v);

struct PropertyVerdict {
  Verdict verdict = Verdict::Inconclusive;
  IntegralVerdict witness;
};

struct ClassificationReport {
  PropertyVerdict parabolic;
  PropertyVerdict stochastically_complete;
  PropertyVerdict l1_liouville;
  std::vector<std::pair<double, double>> green_at;

  bool inconclusive() const;
};

/// Tail envelope of sigma^{1-m}, when the profile kind fixes it.
std::optional<TailEnvelope> inverse_area_envelope(const ModelManifold& manifold);
/// Tail envelope of vol(B_t)/vol(dB_t).
std::optional<TailEnvelope> exit_density_envelope(const ModelManifold& manifold);

/// Yes iff the integral of sigma^{1-m} to infinity diverges.
PropertyVerdict test_parabolic(const ModelManifold& manifold, const QuadratureConfig& cfg = {});

/// Minimal positive Green's kernel with pole at the origin,
/// G(r) = (1/omega_{m-1}) * integral_r^inf sigma^{1-m}. Throws ParabolicError on divergence.
double green_kernel(const ModelManifold& manifold, double r, const QuadratureConfig& cfg = {});

/// Mean exit time from the origin, E(o) = integral_0^inf (integral_0^t sigma^{m-1}) / sigma^{m-1}(t) dt.
/// Yes (L1-Liouville) iff it diverges; the witness carries the finite value otherwise.
PropertyVerdict test_l1_liouville(const ModelManifold& manifold, const QuadratureConfig& cfg = {});

/// Volume-ratio test, integral^inf vol(B_r)/vol(dB_r) dr = inf. For models the
/// integrand coincides with the mean exit time density.
PropertyVerdict test_stochastically_complete(const ModelManifold& manifold, const QuadratureConfig& cfg = {});

/// integral_M G dV = integral_0^inf G(r) area(r) dr, evaluated without going through
/// the exit-time density. Equals E(o) when the latter is finite.
IntegralVerdict green_volume_integral(const ModelManifold& manifold, const QuadratureConfig& cfg = {});

/// Runs the three tests and enforces parabolic => L1, stoch. complete => L1,
/// and stoch. complete <=> L1. Throws ConsistencyError on violation.
ClassificationReport classify(const ModelManifold& manifold, const QuadratureConfig& cfg = {},
                              std::span<const double> green_radii = {});

}  // namespace potlib
