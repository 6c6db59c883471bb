#include "potlib/classify.hpp"

#include <cmath>

#include "potlib/errors.hpp"

namespace potlib {

namespace {

void require_complete(const ModelManifold& manifold) {
  if (std::isfinite(manifold.profile().domain_max())) {
    throw DomainError("global classification needs a profile defined on [0, inf)");
  }
}

Verdict from_divergence(const IntegralVerdict& v) {
  switch (v.status) {
    case Convergence::Diverges:
      return Verdict::Yes;
    case Convergence::Converges:
      return Verdict::No;
    case Convergence::Inconclusive:
      return Verdict::Inconclusive;
  }
  return Verdict::Inconclusive;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes:
      return "yes";
    case Verdict::No:
      return "no";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

bool ClassificationReport::inconclusive() const {
  return parabolic.verdict == Verdict::Inconclusive || stochastically_complete.verdict == Verdict::Inconclusive ||
         l1_liouville.verdict == Verdict::Inconclusive;
}

std::optional<TailEnvelope> inverse_area_envelope(const ModelManifold& manifold) {
  const TailModel tail = manifold.profile().tail();
  const int k = manifold.dimension() - 1;
  switch (tail.kind) {
    case TailModel::Kind::Algebraic:
      return TailEnvelope::algebraic(-k * tail.power);
    case TailModel::Kind::Stretched:
      return TailEnvelope::stretched(0.0, -k * tail.rate, tail.power);
    case TailModel::Kind::Unknown:
      break;
  }
  return std::nullopt;
}

std::optional<TailEnvelope> exit_density_envelope(const ModelManifold& manifold) {
  const TailModel tail = manifold.profile().tail();
  switch (tail.kind) {
    case TailModel::Kind::Algebraic:
      return TailEnvelope::algebraic(1.0);
    case TailModel::Kind::Stretched:
      return TailEnvelope::algebraic(1.0 - tail.power);
    case TailModel::Kind::Unknown:
      break;
  }
  return std::nullopt;
}

PropertyVerdict test_parabolic(const ModelManifold& manifold, const QuadratureConfig& cfg) {
  require_complete(manifold);
  const int k = manifold.dimension() - 1;
  const auto& profile = manifold.profile();
  PropertyVerdict out;
  out.witness = improper_integral([&](double t) { return std::exp(-k * profile.log_value(t)); }, cfg.r_start, cfg,
                                  inverse_area_envelope(manifold));
  out.verdict = from_divergence(out.witness);
  return out;
}

double green_kernel(const ModelManifold& manifold, double r, const QuadratureConfig& cfg) {
  require_complete(manifold);
  if (!(r > 0.0)) throw DomainError("Green's kernel is singular at its pole r = 0");
  const int k = manifold.dimension() - 1;
  const auto& profile = manifold.profile();
  const IntegralVerdict v = improper_integral([&](double t) { return std::exp(-k * profile.log_value(t)); }, r, cfg,
                                              inverse_area_envelope(manifold));
  if (v.diverges()) throw ParabolicError("Green's kernel integral diverges: the model is parabolic");
  if (!v.converges()) throw QuadratureError("Green's kernel integral is inconclusive at r = " + std::to_string(r));
  return v.value / sphere_area(k);
}

PropertyVerdict test_l1_liouville(const ModelManifold& manifold, const QuadratureConfig& cfg) {
  require_complete(manifold);
  const int k = manifold.dimension() - 1;
  const auto& profile = manifold.profile();
  // Inner integral in the offset u = t - s so the spike at s = t stays resolvable
  // when sigma grows super-exponentially.
  const auto density = [&](double t) {
    if (t <= 0.0) return 0.0;
    const auto ratio = [&](double u) { return u >= t ? 0.0 : std::exp(-k * profile.log_increment(t - u, u)); };
    return peaked_integral(ratio, t, 1.0 / (k * profile.log_derivative(t)), cfg);
  };
  PropertyVerdict out;
  out.witness = improper_integral(density, 0.0, cfg, exit_density_envelope(manifold));
  out.verdict = from_divergence(out.witness);
  return out;
}

PropertyVerdict test_stochastically_complete(const ModelManifold& manifold, const QuadratureConfig& cfg) {
  require_complete(manifold);
  const auto ratio = [&](double r) { return r <= 0.0 ? 0.0 : volume_ratio(manifold, r, cfg); };
  PropertyVerdict out;
  out.witness = improper_integral(ratio, 0.0, cfg, exit_density_envelope(manifold));
  out.verdict = from_divergence(out.witness);
  return out;
}

IntegralVerdict green_volume_integral(const ModelManifold& manifold, const QuadratureConfig& cfg) {
  require_complete(manifold);
  const int k = manifold.dimension() - 1;
  const auto& profile = manifold.profile();
  const std::optional<TailEnvelope> inner_envelope = inverse_area_envelope(manifold);
  // G(r) area(r) = integral_0^inf (sigma(r) / sigma(r + u))^k du; the omega factors cancel.
  const auto kernel_times_area = [&](double r) {
    if (r <= 0.0) return 0.0;
    QuadratureConfig inner = cfg;
    inner.r_start = std::min(1.0 / (k * profile.log_derivative(r)), 0.5 * cfg.r_max);
    const IntegralVerdict v =
        improper_integral([&](double u) { return std::exp(-k * profile.log_increment(r, u)); }, 0.0, inner,
                          inner_envelope);
    if (v.diverges()) throw ParabolicError("Green's kernel integral diverges: the model is parabolic");
    if (!v.converges()) throw QuadratureError("Green's kernel integral is inconclusive at r = " + std::to_string(r));
    return v.value;
  };
  return improper_integral(kernel_times_area, 0.0, cfg, exit_density_envelope(manifold));
}

ClassificationReport classify(const ModelManifold& manifold, const QuadratureConfig& cfg,
                              std::span<const double> green_radii) {
  ClassificationReport report;
  report.parabolic = test_parabolic(manifold, cfg);
  report.stochastically_complete = test_stochastically_complete(manifold, cfg);
  report.l1_liouville = test_l1_liouville(manifold, cfg);

  const Verdict par = report.parabolic.verdict;
  const Verdict sc = report.stochastically_complete.verdict;
  const Verdict l1 = report.l1_liouville.verdict;
  if (par == Verdict::Yes && l1 == Verdict::No) throw ConsistencyError("parabolic model reported as not L1-Liouville");
  if (sc == Verdict::Yes && l1 == Verdict::No) {
    throw ConsistencyError("stochastically complete model reported as not L1-Liouville");
  }
  if (sc != Verdict::Inconclusive && l1 != Verdict::Inconclusive && sc != l1) {
    throw ConsistencyError("stochastic completeness and L1-Liouville disagree on a model");
  }
  if (par == Verdict::No) {
    for (double r : green_radii) report.green_at.emplace_back(r, green_kernel(manifold, r, cfg));
  }
  return report;
}

}  // namespace potlib
