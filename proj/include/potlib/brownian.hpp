#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "potlib/geometry.hpp"

namespace potlib {

/// Monte Carlo settings. Time is in length^2 units of the generator Delta.
struct McConfig {
  long long n_paths = 100000;
  double dt = 1e-4;
  std::uint64_t seed = 0;
  double max_time = 1e4;
  /// 0 selects the hardware concurrency. POTLIB_THREADS overrides either.
  int workers = 0;
  /// Keep per-path exit times in the estimate (for histograms).
  bool keep_samples = false;

  void validate() const;
  int resolved_workers() const;

  bool operator==(const McConfig&) const = default;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  double censored_fraction = 0.0;
  long long n_paths = 0;
  long long n_censored = 0;
  /// Exit times of uncensored paths, in path order (only with keep_samples).
  std::vector<double> samples;

  /// False when more than 0.1% of the paths hit the time horizon.
  bool reliable() const { return censored_fraction <= 1e-3; }
};

struct McProbability {
  double probability = 0.0;
  double std_error = 0.0;
  long long hits = 0;
  long long n_paths = 0;
};

/// Mean exit time of the geodesic ball B_R from a point at distance r0 from the pole.
McEstimate exit_time_ball(const ModelManifold& manifold, double r0, double R, const McConfig& cfg);

/// Mean exit time of the interval 1/k < h < k for dh = sqrt(2) dW.
McEstimate exit_time_slab(double k, double h0, const McConfig& cfg);

/// Escape radius used by explosion_probe.
inline constexpr double kEscapeRadius = 1e6;

/// Fraction of paths from radius r0 reaching kEscapeRadius before time T.
McProbability explosion_probe(const ModelManifold& manifold, double r0, double T, const McConfig& cfg);

/// Mean of tau(dt/2) - tau(dt) over paths driven by the same Brownian increments.
struct RefinementGap {
  McEstimate coarse;
  McEstimate fine;
  double gap = 0.0;
  double gap_std_error = 0.0;
};

RefinementGap ball_refinement_gap(const ModelManifold& manifold, double r0, double R, const McConfig& cfg);

/// Equal-width histogram of the estimate's samples: (bin left edge, count).
std::vector<std::pair<double, long long>> histogram(const std::vector<double>& samples, int bins);

}  // namespace potlib
