#include "potlib/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

#include "potlib/errors.hpp"

namespace potlib {

namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Weights of the embedded 7-point Gauss rule at kKronrodNodes[1], [3], [5], [7].
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;

  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod_15(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = f(center);

  double kronrod = f_center * kKronrodWeights[7];
  double gauss = f_center * kGaussWeights[3];
  double abs_sum = std::abs(kronrod);

  std::array<double, 7> f_lo{};
  std::array<double, 7> f_hi{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    f_lo[j] = f(center - dx);
    f_hi[j] = f(center + dx);
    const double pair = f_lo[j] + f_hi[j];
    kronrod += kKronrodWeights[j] * pair;
    abs_sum += kKronrodWeights[j] * (std::abs(f_lo[j]) + std::abs(f_hi[j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }

  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(f_center - mean);
  for (int j = 0; j < 7; ++j) {
    asc += kKronrodWeights[j] * (std::abs(f_lo[j] - mean) + std::abs(f_hi[j] - mean));
  }

  const double value = kronrod * half;
  abs_sum *= std::abs(half);
  asc *= std::abs(half);
  double error = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && error != 0.0) error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps)) error = std::max(50.0 * eps * abs_sum, error);

  if (!std::isfinite(value) || !std::isfinite(error)) {
    throw QuadratureError("non-finite integrand value on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  return {a, b, value, error};
}

double adaptive(const Integrand& f, double a, double b, double rel_tol, double abs_tol, int max_subdivisions) {
  if (a == b) return 0.0;
  std::priority_queue<Panel> heap;
  Panel first = gauss_kronrod_15(f, a, b);
  double total = first.value;
  double total_error = first.error;
  heap.push(first);

  int subdivisions = 0;
  while (total_error > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (++subdivisions > max_subdivisions) {
      throw QuadratureError("adaptive quadrature on [" + std::to_string(a) + ", " + std::to_string(b) +
                            "] exceeded the subdivision limit (error estimate " + std::to_string(total_error) + ")");
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= std::min(worst.a, worst.b) || mid >= std::max(worst.a, worst.b)) {
      throw QuadratureError("panel at " + std::to_string(worst.a) + " cannot be subdivided further");
    }
    Panel left = gauss_kronrod_15(f, worst.a, mid);
    Panel right = gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);

    // Running sums drift; rebuild them occasionally.
    if (subdivisions % 64 == 0) {
      auto copy = heap;
      total = 0.0;
      total_error = 0.0;
      while (!copy.empty()) {
        total += copy.top().value;
        total_error += copy.top().error;
        copy.pop();
      }
    }
  }
  return total;
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw ConfigError("quadrature tolerances must be positive");
  if (!(r_start > 0.0) || !(r_start < r_max)) throw ConfigError("quadrature requires 0 < r_start < r_max");
  if (!(divergence_threshold > 0.0)) throw ConfigError("divergence_threshold must be positive");
  if (doubling_steps < 1) throw ConfigError("doubling_steps must be at least 1");
  if (max_subdivisions < 1) throw ConfigError("max_subdivisions must be at least 1");
}

std::string to_string(Convergence c) {
  switch (c) {
    case Convergence::Converges:
      return "converges";
    case Convergence::Diverges:
      return "diverges";
    case Convergence::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

bool TailEnvelope::divergent() const {
  if (exp_rate > 0.0) return true;
  if (exp_rate < 0.0) return false;
  return power >= -1.0;
}

double TailEnvelope::tail_integral(double R, double f_at_R) const {
  if (f_at_R == 0.0) return 0.0;
  if (exp_rate == 0.0) return f_at_R * R / (-power - 1.0);
  // f / (-(log f)') to leading order.
  const double decay = -(power / R + exp_rate * exp_power * std::pow(R, exp_power - 1.0));
  if (!(decay > 0.0)) return std::numeric_limits<double>::infinity();
  return f_at_R / decay;
}

double integral(const Integrand& f, double a, double b, const QuadratureConfig& cfg) {
  if (!(a <= b)) throw DomainError("integral requires a <= b");
  return adaptive(f, a, b, cfg.rel_tol, cfg.abs_tol, cfg.max_subdivisions);
}

IntegralVerdict improper_integral(const Integrand& f, double a, const QuadratureConfig& cfg,
                                  std::optional<TailEnvelope> envelope) {
  cfg.validate();
  IntegralVerdict out;
  double radius = a < cfg.r_start ? cfg.r_start : 2.0 * a;
  if (!(radius > a)) throw DomainError("improper integral needs a positive lower limit or r_start above it");

  std::vector<double> increments;
  double partial = integral(f, a, radius, cfg);
  out.partials.emplace_back(radius, partial);
  increments.push_back(partial);

  auto tol = [&](double p) { return cfg.rel_tol * std::abs(p) + cfg.abs_tol; };
  constexpr int kGrowthWindow = 5;

  for (int step = 1; step <= cfg.doubling_steps; ++step) {
    const double next = 2.0 * radius;
    if (next > cfg.r_max) break;
    const double increment = integral(f, radius, next, cfg);
    radius = next;
    partial += increment;
    out.partials.emplace_back(radius, partial);
    increments.push_back(increment);

    if (partial > cfg.divergence_threshold) {
      out.status = Convergence::Diverges;
      out.tail_estimate = std::numeric_limits<double>::infinity();
      return out;
    }

    const auto n = static_cast<int>(out.partials.size());
    bool growing = n > kGrowthWindow && partial >= (1.0 + cfg.rel_tol) * out.partials[n - 1 - kGrowthWindow].second;
    for (int j = n - kGrowthWindow; growing && j < n; ++j) growing = increments[j] > 0.0;

    if (envelope) {
      if (envelope->divergent()) {
        if (growing) {
          out.status = Convergence::Diverges;
          out.tail_estimate = std::numeric_limits<double>::infinity();
          return out;
        }
        continue;
      }
      const double tail = envelope->tail_integral(radius, f(radius));
      out.tail_estimate = tail;
      if (std::abs(increment) <= tol(partial) && tail <= tol(partial)) {
        out.status = Convergence::Converges;
        out.value = partial + tail;
        return out;
      }
      continue;
    }

    const double previous = increments[increments.size() - 2];
    double tail = std::numeric_limits<double>::infinity();
    if (increment == 0.0) {
      tail = 0.0;
    } else if (previous > 0.0) {
      const double ratio = increment / previous;
      if (ratio >= 0.0 && ratio < 1.0) tail = increment * ratio / (1.0 - ratio);
    }
    out.tail_estimate = tail;
    if (std::abs(increment) <= tol(partial) && tail <= tol(partial)) {
      out.status = Convergence::Converges;
      out.value = partial + tail;
      return out;
    }
    // Increments that do not shrink across doublings: at least logarithmic growth.
    bool flat = growing;
    for (int j = n - kGrowthWindow + 1; flat && j < n; ++j) flat = increments[j] >= increments[j - 1] * (1.0 - 1e-6);
    if (flat) {
      out.status = Convergence::Diverges;
      out.tail_estimate = std::numeric_limits<double>::infinity();
      return out;
    }
  }
  out.status = Convergence::Inconclusive;
  return out;
}

double peaked_integral(const Integrand& f, double length, double width, const QuadratureConfig& cfg) {
  if (!(length >= 0.0)) throw DomainError("peaked_integral requires a nonnegative length");
  if (length == 0.0) return 0.0;
  if (!(width > 0.0) || !std::isfinite(width) || width > length) width = length;
  // Purely relative tolerance: the result may sit far below abs_tol.
  const double rel = std::max(cfg.rel_tol, 1e-13);
  const double tiny = std::numeric_limits<double>::min();
  double total = 0.0;
  double lo = 0.0;
  double hi = width;
  while (true) {
    total += adaptive(f, lo, hi, rel, tiny, cfg.max_subdivisions);
    if (hi >= length) break;
    // f is nonincreasing, so f(hi) * (length - hi) bounds the remainder.
    if (f(hi) * (length - hi) <= 0.1 * rel * total) break;
    lo = hi;
    hi = std::min(2.0 * hi, length);
  }
  return total;
}

}  // namespace potlib
