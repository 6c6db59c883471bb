#include "potlib/exhaustion.hpp"

#include <cmath>
#include <optional>

#include "potlib/classify.hpp"
#include "potlib/errors.hpp"

namespace potlib {

namespace {

void check_schedule(std::span<const double> schedule, double lower, double outer) {
  if (schedule.empty()) throw DomainError("radius schedule is empty");
  double prev = lower;
  for (double R : schedule) {
    if (!(R > prev)) throw DomainError("radius schedule must be strictly increasing and exceed the sampling radius");
    prev = R;
  }
  if (schedule.back() > outer) throw DomainError("radius schedule exceeds the exhausted domain");
}

void check_outer(const ModelManifold& manifold, double outer) {
  const double domain = manifold.profile().domain_max();
  if (!(outer > 0.0)) throw DomainError("exhausted domain radius must be positive");
  if (outer > domain) throw DomainError("exhausted domain extends past the profile's domain");
}

/// Cumulative integrals of f from `start` to each radius, then the remainder to `outer`.
struct Accumulation {
  std::vector<double> partials;
  double remainder = 0.0;
  IntegralVerdict continuation;
};

Accumulation accumulate(const Integrand& f, double start, std::span<const double> schedule, double outer,
                        const QuadratureConfig& cfg, std::optional<TailEnvelope> envelope) {
  Accumulation acc;
  double total = 0.0;
  double lo = start;
  for (double R : schedule) {
    total += integral(f, lo, R, cfg);
    acc.partials.push_back(total);
    lo = R;
  }
  if (std::isfinite(outer)) {
    acc.remainder = lo < outer ? integral(f, lo, outer, cfg) : 0.0;
    acc.continuation.status = Convergence::Converges;
    acc.continuation.value = acc.remainder;
  } else {
    acc.continuation = improper_integral(f, lo, cfg, envelope);
    acc.remainder = acc.continuation.value;
  }
  return acc;
}

void finish(ExhaustionRun& run) {
  if (!run.monotone()) throw ConsistencyError("exhaustion sequence lost monotonicity");
}

auto inverse_area(const ModelManifold& manifold) {
  const int k = manifold.dimension() - 1;
  const RadialProfile profile = manifold.profile();
  return [k, profile](double t) { return std::exp(-k * profile.log_value(t)); };
}

}  // namespace

std::string to_string(LimitKind k) {
  switch (k) {
    case LimitKind::Converged:
      return "converged";
    case LimitKind::DivergedToZero:
      return "diverged_to_zero";
    case LimitKind::DivergedToInfinity:
      return "diverged_to_infinity";
    case LimitKind::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(ExhaustionRun::Quantity q) {
  switch (q) {
    case ExhaustionRun::Quantity::Harmonic:
      return "harmonic";
    case ExhaustionRun::Quantity::Green:
      return "green";
    case ExhaustionRun::Quantity::ExitTime:
      return "exit_time";
  }
  return "harmonic";
}

bool ExhaustionRun::monotone() const {
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (quantity == Quantity::Harmonic ? samples[i] > samples[i - 1] : samples[i] < samples[i - 1]) return false;
  }
  return true;
}

std::vector<double> doubling_schedule(double R0, int n) {
  if (!(R0 > 0.0) || n < 1) throw DomainError("doubling schedule needs R0 > 0 and n >= 1");
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(std::ldexp(R0, i));
  return out;
}

double harmonic_annulus(const ModelManifold& manifold, double a, double R_k, double r, const QuadratureConfig& cfg) {
  if (!(a > 0.0) || !(a < R_k)) throw DomainError("annulus needs 0 < a < R_k");
  if (r < a || r > R_k) throw DomainError("annulus sample radius must lie in [a, R_k]");
  check_outer(manifold, R_k);
  if (r == a) return 0.0;
  if (r == R_k) return 1.0;
  const auto f = inverse_area(manifold);
  const double inner = integral(f, a, r, cfg);
  return inner / (inner + integral(f, r, R_k, cfg));
}

ExhaustionRun dirichlet_parabolicity_limit(const ModelManifold& manifold, double a, double r_test,
                                           std::span<const double> R_schedule, const QuadratureConfig& cfg) {
  if (!(a > 0.0) || !(r_test > a)) throw DomainError("parabolicity exhaustion needs 0 < a < r_test");
  check_outer(manifold, std::numeric_limits<double>::infinity());
  check_schedule(R_schedule, r_test, std::numeric_limits<double>::infinity());
  const auto f = inverse_area(manifold);
  const double inner = integral(f, a, r_test, cfg);
  const Accumulation acc =
      accumulate(f, r_test, R_schedule, std::numeric_limits<double>::infinity(), cfg, inverse_area_envelope(manifold));

  ExhaustionRun run;
  run.quantity = ExhaustionRun::Quantity::Harmonic;
  run.r = r_test;
  run.radii.assign(R_schedule.begin(), R_schedule.end());
  for (double p : acc.partials) run.samples.push_back(inner / (inner + p));
  run.continuation = acc.continuation;
  switch (acc.continuation.status) {
    case Convergence::Converges:
      run.limit = {LimitKind::Converged, inner / (inner + acc.partials.back() + acc.remainder)};
      break;
    case Convergence::Diverges:
      run.limit = {LimitKind::DivergedToZero, 0.0};
      break;
    case Convergence::Inconclusive:
      run.limit = {LimitKind::Inconclusive, 0.0};
      break;
  }
  finish(run);
  return run;
}

ExhaustionRun green_by_exhaustion(const ModelManifold& manifold, double r, std::span<const double> R_schedule,
                                  const QuadratureConfig& cfg, double outer) {
  if (!(r > 0.0)) throw DomainError("Green's kernel exhaustion needs r > 0");
  check_outer(manifold, outer);
  check_schedule(R_schedule, r, outer);
  const double omega = sphere_area(manifold.dimension() - 1);
  const Accumulation acc = accumulate(inverse_area(manifold), r, R_schedule, outer, cfg, inverse_area_envelope(manifold));

  ExhaustionRun run;
  run.quantity = ExhaustionRun::Quantity::Green;
  run.r = r;
  run.radii.assign(R_schedule.begin(), R_schedule.end());
  for (double p : acc.partials) run.samples.push_back(p / omega);
  run.continuation = acc.continuation;
  switch (acc.continuation.status) {
    case Convergence::Converges:
      run.limit = {LimitKind::Converged, (acc.partials.back() + acc.remainder) / omega};
      break;
    case Convergence::Diverges:
      run.limit = {LimitKind::DivergedToInfinity, 0.0};
      break;
    case Convergence::Inconclusive:
      run.limit = {LimitKind::Inconclusive, 0.0};
      break;
  }
  finish(run);
  return run;
}

ExhaustionRun exit_time_by_exhaustion(const ModelManifold& manifold, double r, std::span<const double> R_schedule,
                                      const QuadratureConfig& cfg, double outer) {
  if (!(r >= 0.0)) throw DomainError("exit-time exhaustion needs r >= 0");
  check_outer(manifold, outer);
  check_schedule(R_schedule, r, outer);
  const auto density = [&](double t) { return t <= 0.0 ? 0.0 : volume_ratio(manifold, t, cfg); };
  const Accumulation acc = accumulate(density, r, R_schedule, outer, cfg, exit_density_envelope(manifold));

  ExhaustionRun run;
  run.quantity = ExhaustionRun::Quantity::ExitTime;
  run.r = r;
  run.radii.assign(R_schedule.begin(), R_schedule.end());
  run.samples = acc.partials;
  run.continuation = acc.continuation;
  switch (acc.continuation.status) {
    case Convergence::Converges:
      run.limit = {LimitKind::Converged, acc.partials.back() + acc.remainder};
      break;
    case Convergence::Diverges:
      run.limit = {LimitKind::DivergedToInfinity, 0.0};
      break;
    case Convergence::Inconclusive:
      run.limit = {LimitKind::Inconclusive, 0.0};
      break;
  }
  finish(run);
  return run;
}

}  // namespace potlib
