#include "potlib/brownian.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <thread>

#include "potlib/errors.hpp"
#include "potlib/philox.hpp"

namespace potlib {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Bridge crossing probabilities below e^-40 are not sampled.
constexpr double kBridgeCutoff = 40.0;

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 16) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

void parallel_for(long long n, int workers, const std::function<void(long long)>& body) {
  workers = static_cast<int>(std::clamp<long long>(workers, 1, std::max<long long>(n, 1)));
  if (workers == 1) {
    for (long long i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  const long long chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long long lo = w * chunk;
    const long long hi = std::min(n, lo + chunk);
    pool.emplace_back([lo, hi, &body] {
      for (long long i = lo; i < hi; ++i) body(i);
    });
  }
}

/// NaN entries are censored paths.
McEstimate summarize(const std::vector<double>& times, bool keep) {
  McEstimate est;
  est.n_paths = static_cast<long long>(times.size());
  std::vector<double> done;
  done.reserve(times.size());
  for (double t : times) {
    if (std::isnan(t)) {
      ++est.n_censored;
    } else {
      done.push_back(t);
    }
  }
  est.censored_fraction = static_cast<double>(est.n_censored) / static_cast<double>(est.n_paths);
  const auto n = static_cast<double>(done.size());
  if (done.empty()) {
    est.mean = std::numeric_limits<double>::infinity();
    est.std_error = std::numeric_limits<double>::infinity();
    return est;
  }
  est.mean = pairwise_sum(done) / n;
  if (done.size() > 1) {
    std::vector<double> sq(done.size());
    std::transform(done.begin(), done.end(), sq.begin(), [&](double t) { return (t - est.mean) * (t - est.mean); });
    est.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
  }
  if (keep) est.samples = std::move(done);
  return est;
}

/// Radial drift in excess of the Euclidean (m-1)/r, bounded near the pole.
/// Empty for the flat profile.
std::function<double(double)> excess_drift(const ModelManifold& manifold) {
  const int k = manifold.dimension() - 1;
  const RadialProfile profile = manifold.profile();
  if (profile.kind() == ProfileKind::Power && profile.parameters().front() == 1.0) return {};
  return [k, profile](double r) { return k * (profile.log_derivative(r) - 1.0 / r); };
}

/// Euler-Maruyama step of dX = sqrt(2) dW + excess(|X|) X/|X| dt in R^m from
/// |X| = r; returns the new |X|. The Euclidean part is exact, so only the
/// bounded excess drift is discretized.
double euler_step(std::vector<double>& x, double r, double h, PathStream& rng,
                  const std::function<double(double)>& excess) {
  const double scale = excess && r > 0.0 ? 1.0 + excess(r) * h / r : 1.0;
  const double noise = std::sqrt(2.0 * h);
  double s = 0.0;
  for (double& v : x) {
    v = v * scale + noise * rng.normal();
    s += v * v;
  }
  return std::sqrt(s);
}

/// Same step driven by given standard normals.
double euler_step(std::vector<double>& x, double r, double h, std::span<const double> z,
                  const std::function<double(double)>& excess) {
  const double scale = excess && r > 0.0 ? 1.0 + excess(r) * h / r : 1.0;
  const double noise = std::sqrt(2.0 * h);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = x[i] * scale + noise * z[i];
    s += x[i] * x[i];
  }
  return std::sqrt(s);
}

/// Ball exit test after a step from radius r_prev; returns true on exit.
bool exits_ball(double r_prev, double r_next, double R, double h, PathStream& rng) {
  if (!(r_next < R)) return true;
  const double e = (R - r_prev) * (R - r_next) / h;
  return e < kBridgeCutoff && rng.uniform() < std::exp(-e);
}

struct BallWalker {
  std::vector<double> x;
  double r = 0.0;
  double exit = kNaN;
  bool done = false;

  BallWalker(int m, double r0) : x(m, 0.0), r(r0) { x[0] = r0; }

  void advance(double t, double h, std::span<const double> z, double R, const std::function<double(double)>& excess,
               PathStream& rng) {
    settle(t, h, euler_step(x, r, h, z, excess), R, rng);
  }

  void advance(double t, double h, double R, const std::function<double(double)>& excess, PathStream& rng) {
    settle(t, h, euler_step(x, r, h, rng, excess), R, rng);
  }

  void settle(double t, double h, double next, double R, PathStream& rng) {
    if (exits_ball(r, next, R, h, rng)) {
      exit = t + 0.5 * h;
      done = true;
    }
    r = next;
  }
};

void check_ball(const ModelManifold& manifold, double r0, double R, const McConfig& cfg) {
  cfg.validate();
  if (!(R > 0.0) || !(r0 >= 0.0) || r0 > R) throw DomainError("ball exit needs 0 <= r0 <= R");
  if (R > manifold.profile().domain_max()) throw DomainError("ball extends past the profile's domain");
}

}  // namespace

void McConfig::validate() const {
  if (n_paths < 1) throw ConfigError("n_paths must be at least 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (!(max_time > 0.0)) throw ConfigError("max_time must be positive");
  if (workers < 0) throw ConfigError("workers must be nonnegative");
}

int McConfig::resolved_workers() const {
  if (const char* env = std::getenv("POTLIB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  if (workers > 0) return workers;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

McEstimate exit_time_ball(const ModelManifold& manifold, double r0, double R, const McConfig& cfg) {
  check_ball(manifold, r0, R, cfg);
  const int m = manifold.dimension();
  const auto excess = excess_drift(manifold);
  std::vector<double> times(static_cast<std::size_t>(cfg.n_paths), 0.0);
  if (r0 < R) {
    parallel_for(cfg.n_paths, cfg.resolved_workers(), [&](long long i) {
      PathStream rng(cfg.seed, static_cast<std::uint64_t>(i));
      BallWalker walker(m, r0);
      for (long long n = 0; !walker.done; ++n) {
        const double t = n * cfg.dt;
        if (t >= cfg.max_time) break;
        walker.advance(t, cfg.dt, R, excess, rng);
      }
      times[i] = walker.exit;
    });
  }
  return summarize(times, cfg.keep_samples);
}

RefinementGap ball_refinement_gap(const ModelManifold& manifold, double r0, double R, const McConfig& cfg) {
  check_ball(manifold, r0, R, cfg);
  const int m = manifold.dimension();
  const auto excess = excess_drift(manifold);
  const auto n = static_cast<std::size_t>(cfg.n_paths);
  std::vector<double> coarse(n, 0.0);
  std::vector<double> fine(n, 0.0);
  const double h = 0.5 * cfg.dt;
  if (r0 < R) {
    parallel_for(cfg.n_paths, cfg.resolved_workers(), [&](long long i) {
      PathStream rng(cfg.seed, static_cast<std::uint64_t>(i));
      BallWalker c(m, r0);
      BallWalker f(m, r0);
      std::vector<double> z1(m);
      std::vector<double> z2(m);
      std::vector<double> zc(m);
      for (long long k = 0; !(c.done && f.done); ++k) {
        const double t = k * cfg.dt;
        if (t >= cfg.max_time) break;
        for (double& v : z1) v = rng.normal();
        for (double& v : z2) v = rng.normal();
        if (!f.done) f.advance(t, h, z1, R, excess, rng);
        if (!f.done) f.advance(t + h, h, z2, R, excess, rng);
        if (!c.done) {
          for (int j = 0; j < m; ++j) zc[j] = (z1[j] + z2[j]) / std::sqrt(2.0);
          c.advance(t, cfg.dt, zc, R, excess, rng);
        }
      }
      coarse[i] = c.exit;
      fine[i] = f.exit;
    });
  }
  RefinementGap out;
  out.coarse = summarize(coarse, false);
  out.fine = summarize(fine, false);
  std::vector<double> diff;
  diff.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isnan(coarse[i]) && !std::isnan(fine[i])) diff.push_back(fine[i] - coarse[i]);
  }
  const McEstimate d = summarize(diff, false);
  out.gap = d.mean;
  out.gap_std_error = d.std_error;
  return out;
}

McEstimate exit_time_slab(double k, double h0, const McConfig& cfg) {
  cfg.validate();
  if (!(k > 1.0)) throw DomainError("slab parameter must exceed 1");
  const double lo = 1.0 / k;
  const double hi = k;
  if (!(h0 > lo) || !(h0 < hi)) throw DomainError("slab start height must lie strictly between 1/k and k");
  const double noise = std::sqrt(2.0 * cfg.dt);
  std::vector<double> times(static_cast<std::size_t>(cfg.n_paths), kNaN);
  parallel_for(cfg.n_paths, cfg.resolved_workers(), [&](long long i) {
    PathStream rng(cfg.seed, static_cast<std::uint64_t>(i));
    double x = h0;
    for (long long n = 0;; ++n) {
      const double t = n * cfg.dt;
      if (t >= cfg.max_time) return;
      const double next = x + noise * rng.normal();
      bool exited = !(next > lo && next < hi);
      if (!exited) {
        const double e_lo = (x - lo) * (next - lo) / cfg.dt;
        const double e_hi = (hi - x) * (hi - next) / cfg.dt;
        if (std::min(e_lo, e_hi) < kBridgeCutoff) exited = rng.uniform() < std::exp(-e_lo) + std::exp(-e_hi);
      }
      if (exited) {
        times[i] = t + 0.5 * cfg.dt;
        return;
      }
      x = next;
    }
  });
  return summarize(times, cfg.keep_samples);
}

McProbability explosion_probe(const ModelManifold& manifold, double r0, double T, const McConfig& cfg) {
  cfg.validate();
  if (!(r0 > 0.0)) throw DomainError("explosion probe needs r0 > 0");
  if (!(T > 0.0)) throw DomainError("explosion probe needs T > 0");
  if (std::isfinite(manifold.profile().domain_max())) throw DomainError("explosion probe needs a complete profile");
  const int m = manifold.dimension();
  const auto excess = excess_drift(manifold);
  const auto steps = static_cast<long long>(std::ceil(T / cfg.dt - 1e-9));
  std::vector<double> hit(static_cast<std::size_t>(cfg.n_paths), 0.0);
  parallel_for(cfg.n_paths, cfg.resolved_workers(), [&](long long i) {
    PathStream rng(cfg.seed, static_cast<std::uint64_t>(i));
    std::vector<double> x(m, 0.0);
    x[0] = r0;
    double r = r0;
    for (long long n = 0; n < steps; ++n) {
      r = euler_step(x, r, cfg.dt, rng, excess);
      if (!(r < kEscapeRadius)) {
        hit[i] = 1.0;
        return;
      }
    }
  });
  McProbability out;
  out.n_paths = cfg.n_paths;
  out.hits = static_cast<long long>(pairwise_sum(hit));
  out.probability = static_cast<double>(out.hits) / static_cast<double>(out.n_paths);
  out.std_error = std::sqrt(out.probability * (1.0 - out.probability) / static_cast<double>(out.n_paths));
  return out;
}

std::vector<std::pair<double, long long>> histogram(const std::vector<double>& samples, int bins) {
  if (bins < 1) throw DomainError("histogram needs at least one bin");
  std::vector<std::pair<double, long long>> out;
  if (samples.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it;
  const double width = (*hi_it - lo) / bins;
  for (int b = 0; b < bins; ++b) out.emplace_back(lo + b * width, 0);
  for (double s : samples) {
    const int b = width > 0.0 ? std::min(bins - 1, static_cast<int>((s - lo) / width)) : 0;
    ++out[b].second;
  }
  return out;
}

}  // namespace potlib
