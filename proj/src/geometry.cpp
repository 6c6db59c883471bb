#include "potlib/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "potlib/errors.hpp"

namespace potlib {

namespace {

constexpr double kSmoothnessTol = 1e-8;

// Core on [0, join]: sigma(r) = r exp(g(r)) with g the cubic Hermite
// interpolant of g(0) = g'(0) = 0 and the tail's log sigma(join) - log join and
// its slope. Keeps sigma positive with sigma(0) = 0, sigma'(0) = 1, sigma''(0) = 0.
struct HermiteCore {
  double join = 0.0;
  double end_g = 0.0;
  double end_slope = 0.0;

  static HermiteCore from_tail(double join, double log_value, double log_slope) {
    return {join, log_value - std::log(join), log_slope - 1.0 / join};
  }

  double g(double r) const {
    const double t = r / join;
    return end_g * (-2 * t * t * t + 3 * t * t) + join * end_slope * (t * t * t - t * t);
  }
  double g1(double r) const {
    const double t = r / join;
    return end_g * (-6 * t * t + 6 * t) / join + end_slope * (3 * t * t - 2 * t);
  }
  double g2(double r) const {
    const double t = r / join;
    return end_g * (-12 * t + 6) / (join * join) + end_slope * (6 * t - 2) / join;
  }

  double value(double r) const { return r * std::exp(g(r)); }
  double derivative(double r) const { return std::exp(g(r)) * (1.0 + r * g1(r)); }
  double second_derivative(double r) const {
    const double d = g1(r);
    return std::exp(g(r)) * (2.0 * d + r * d * d + r * g2(r));
  }
  double log_value(double r) const { return std::log(r) + g(r); }
  double log_derivative(double r) const { return 1.0 / r + g1(r); }
};

}  // namespace

struct RadialProfile::Impl {
  ProfileKind kind;
  std::vector<double> params;
  double domain_max = kInfinity;
  TailModel tail;
  bool has_core = false;
  HermiteCore core;

  std::vector<double> xs, ys, ds;

  std::function<double(double)> custom_value;
  std::function<double(double)> custom_derivative;

  // Tail branch for Power / Exponential kinds (r >= join).
  double tail_log(double r) const {
    if (kind == ProfileKind::Power) return params[0] * std::log(r);
    return params[0] * std::pow(r, params[1]);
  }
  double tail_log_derivative(double r) const {
    if (kind == ProfileKind::Power) return params[0] / r;
    return params[0] * params[1] * std::pow(r, params[1] - 1.0);
  }
  double tail_log_second(double r) const {
    if (kind == ProfileKind::Power) return -params[0] / (r * r);
    return params[0] * params[1] * (params[1] - 1.0) * std::pow(r, params[1] - 2.0);
  }

  std::size_t segment(double r) const {
    auto it = std::upper_bound(xs.begin(), xs.end(), r);
    std::size_t i = it == xs.begin() ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
    return std::min(i, xs.size() - 2);
  }
};

RadialProfile::RadialProfile(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) { validate(); }

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::Power:
      return "power";
    case ProfileKind::Exponential:
      return "exponential";
    case ProfileKind::Sinh:
      return "sinh";
    case ProfileKind::Tabulated:
      return "tabulated";
    case ProfileKind::Custom:
      return "custom";
  }
  return "custom";
}

RadialProfile RadialProfile::power(double exponent, double join) {
  if (!(exponent > 0.0)) throw DomainError("power profile needs a positive exponent");
  auto impl = std::make_shared<Impl>();
  impl->kind = ProfileKind::Power;
  impl->params = {exponent, join};
  impl->tail = {TailModel::Kind::Algebraic, 0.0, exponent};
  if (exponent != 1.0) {
    if (!(join > 0.0)) throw DomainError("power profile join radius must be positive");
    impl->has_core = true;
    impl->core = HermiteCore::from_tail(join, exponent * std::log(join), exponent / join);
  }
  return RadialProfile(std::move(impl));
}

RadialProfile RadialProfile::exponential(double rate, double power, double join) {
  if (!(rate > 0.0) || !(power > 0.0)) throw DomainError("exponential profile needs positive rate and power");
  if (!(join > 0.0)) throw DomainError("exponential profile join radius must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = ProfileKind::Exponential;
  impl->params = {rate, power, join};
  impl->tail = {TailModel::Kind::Stretched, rate, power};
  impl->has_core = true;
  impl->core = HermiteCore::from_tail(join, rate * std::pow(join, power), rate * power * std::pow(join, power - 1.0));
  return RadialProfile(std::move(impl));
}

RadialProfile RadialProfile::sinh(double curvature) {
  if (!(curvature > 0.0)) throw DomainError("sinh profile needs a positive curvature parameter");
  auto impl = std::make_shared<Impl>();
  impl->kind = ProfileKind::Sinh;
  impl->params = {curvature};
  impl->tail = {TailModel::Kind::Stretched, curvature, 1.0};
  return RadialProfile(std::move(impl));
}

RadialProfile RadialProfile::tabulated(std::vector<double> radii, std::vector<double> sigma,
                                       std::vector<double> derivative) {
  if (radii.size() < 2 || radii.size() != sigma.size()) {
    throw DomainError("tabulated profile needs at least two (r, sigma) pairs of equal length");
  }
  if (!derivative.empty() && derivative.size() != radii.size()) {
    throw DomainError("tabulated derivative column has the wrong length");
  }
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1])) throw DomainError("tabulated radii must be strictly increasing");
  }
  if (radii.front() != 0.0) throw DomainError("tabulated profile must start at r = 0");

  auto impl = std::make_shared<Impl>();
  impl->kind = ProfileKind::Tabulated;
  impl->domain_max = radii.back();
  const std::size_t n = radii.size();
  if (derivative.empty()) {
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = radii[i + 1] - radii[i];
      delta[i] = (sigma[i + 1] - sigma[i]) / h[i];
    }
    derivative.assign(n, 0.0);
    derivative[0] = 1.0;
    derivative[n - 1] = delta[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) continue;
      const double w1 = 2 * h[i] + h[i - 1];
      const double w2 = h[i] + 2 * h[i - 1];
      derivative[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  impl->xs = std::move(radii);
  impl->ys = std::move(sigma);
  impl->ds = std::move(derivative);
  return RadialProfile(std::move(impl));
}

RadialProfile RadialProfile::custom(std::function<double(double)> value, std::function<double(double)> derivative,
                                    double domain_max, TailModel tail) {
  if (!value || !derivative) throw DomainError("custom profile needs value and derivative callbacks");
  auto impl = std::make_shared<Impl>();
  impl->kind = ProfileKind::Custom;
  impl->domain_max = domain_max;
  impl->tail = tail;
  impl->custom_value = std::move(value);
  impl->custom_derivative = std::move(derivative);
  return RadialProfile(std::move(impl));
}

void RadialProfile::validate() const {
  if (std::abs(value(0.0)) > kSmoothnessTol || std::abs(derivative(0.0) - 1.0) > kSmoothnessTol) {
    throw DomainError("profile violates sigma(0) = 0, sigma'(0) = 1");
  }
  const Impl& p = *impl_;
  if (p.kind == ProfileKind::Tabulated) {
    for (std::size_t i = 1; i < p.xs.size(); ++i) {
      if (!(p.ys[i] > 0.0)) throw DomainError("tabulated sigma must be positive for r > 0");
    }
    return;
  }
  // Sample the core (or the first unit of a custom profile) for positivity.
  const double span = p.has_core ? p.core.join : std::min(p.domain_max, 10.0);
  constexpr int kSamples = 1000;
  for (int i = 1; i <= kSamples; ++i) {
    const double r = span * i / kSamples;
    if (r >= p.domain_max) break;
    if (!(value(r) > 0.0)) throw DomainError("profile is not positive at r = " + std::to_string(r));
  }
}

ProfileKind RadialProfile::kind() const { return impl_->kind; }
double RadialProfile::domain_max() const { return impl_->domain_max; }
TailModel RadialProfile::tail() const { return impl_->tail; }
std::vector<double> RadialProfile::parameters() const { return impl_->params; }
const std::vector<double>& RadialProfile::knots() const { return impl_->xs; }
const std::vector<double>& RadialProfile::knot_values() const { return impl_->ys; }

double RadialProfile::value(double r) const {
  const Impl& p = *impl_;
  if (r < 0.0 || r > p.domain_max) throw DomainError("radius " + std::to_string(r) + " outside the profile domain");
  switch (p.kind) {
    case ProfileKind::Power:
    case ProfileKind::Exponential:
      if (p.has_core && r < p.core.join) return p.core.value(r);
      if (p.kind == ProfileKind::Power && !p.has_core) return r;
      return std::exp(p.tail_log(r));
    case ProfileKind::Sinh:
      return std::sinh(p.params[0] * r) / p.params[0];
    case ProfileKind::Tabulated: {
      const std::size_t i = p.segment(r);
      const double h = p.xs[i + 1] - p.xs[i];
      const double t = (r - p.xs[i]) / h;
      const double h00 = 2 * t * t * t - 3 * t * t + 1;
      const double h10 = t * t * t - 2 * t * t + t;
      const double h01 = -2 * t * t * t + 3 * t * t;
      const double h11 = t * t * t - t * t;
      return h00 * p.ys[i] + h10 * h * p.ds[i] + h01 * p.ys[i + 1] + h11 * h * p.ds[i + 1];
    }
    case ProfileKind::Custom:
      return p.custom_value(r);
  }
  return 0.0;
}

double RadialProfile::derivative(double r) const {
  const Impl& p = *impl_;
  if (r < 0.0 || r > p.domain_max) throw DomainError("radius " + std::to_string(r) + " outside the profile domain");
  switch (p.kind) {
    case ProfileKind::Power:
    case ProfileKind::Exponential:
      if (p.has_core && r < p.core.join) return p.core.derivative(r);
      if (p.kind == ProfileKind::Power && !p.has_core) return 1.0;
      return p.tail_log_derivative(r) * std::exp(p.tail_log(r));
    case ProfileKind::Sinh:
      return std::cosh(p.params[0] * r);
    case ProfileKind::Tabulated: {
      const std::size_t i = p.segment(r);
      const double h = p.xs[i + 1] - p.xs[i];
      const double t = (r - p.xs[i]) / h;
      const double d00 = 6 * t * t - 6 * t;
      const double d10 = 3 * t * t - 4 * t + 1;
      const double d01 = -6 * t * t + 6 * t;
      const double d11 = 3 * t * t - 2 * t;
      return (d00 * p.ys[i] + d01 * p.ys[i + 1]) / h + d10 * p.ds[i] + d11 * p.ds[i + 1];
    }
    case ProfileKind::Custom:
      return p.custom_derivative(r);
  }
  return 0.0;
}

double RadialProfile::second_derivative(double r) const {
  const Impl& p = *impl_;
  if (r < 0.0 || r > p.domain_max) throw DomainError("radius " + std::to_string(r) + " outside the profile domain");
  switch (p.kind) {
    case ProfileKind::Power:
    case ProfileKind::Exponential: {
      if (p.has_core && r < p.core.join) return p.core.second_derivative(r);
      if (p.kind == ProfileKind::Power && !p.has_core) return 0.0;
      const double d = p.tail_log_derivative(r);
      return (p.tail_log_second(r) + d * d) * std::exp(p.tail_log(r));
    }
    case ProfileKind::Sinh:
      return p.params[0] * std::sinh(p.params[0] * r);
    case ProfileKind::Tabulated: {
      const std::size_t i = p.segment(r);
      const double h = p.xs[i + 1] - p.xs[i];
      const double t = (r - p.xs[i]) / h;
      const double s00 = 12 * t - 6;
      const double s10 = 6 * t - 4;
      const double s01 = -12 * t + 6;
      const double s11 = 6 * t - 2;
      return (s00 * p.ys[i] + s01 * p.ys[i + 1]) / (h * h) + (s10 * p.ds[i] + s11 * p.ds[i + 1]) / h;
    }
    case ProfileKind::Custom: {
      const double h = std::max(1e-5, 1e-5 * r);
      const double lo = std::max(0.0, r - h);
      const double hi = std::min(p.domain_max, r + h);
      return (p.custom_derivative(hi) - p.custom_derivative(lo)) / (hi - lo);
    }
  }
  return 0.0;
}

double RadialProfile::log_value(double r) const {
  const Impl& p = *impl_;
  switch (p.kind) {
    case ProfileKind::Power:
    case ProfileKind::Exponential:
      if (r < 0.0 || r > p.domain_max) throw DomainError("radius outside the profile domain");
      if (p.has_core && r < p.core.join) return p.core.log_value(r);
      if (p.kind == ProfileKind::Power && !p.has_core) return std::log(r);
      return p.tail_log(r);
    case ProfileKind::Sinh: {
      if (r < 0.0) throw DomainError("radius outside the profile domain");
      const double a = p.params[0];
      // log(sinh(a r)/a) = a r + log(1 - e^{-2ar}) - log(2a)
      return a * r + std::log(-std::expm1(-2 * a * r)) - std::log(2 * a);
    }
    default:
      return std::log(value(r));
  }
}

double RadialProfile::log_increment(double x, double h) const {
  const Impl& p = *impl_;
  const double y = x + h;
  switch (p.kind) {
    case ProfileKind::Power:
    case ProfileKind::Exponential: {
      const double join = p.has_core ? p.core.join : 0.0;
      if (x >= join && y >= join && x > 0.0) {
        if (y > p.domain_max) throw DomainError("radius outside the profile domain");
        if (p.kind == ProfileKind::Power) return p.params[0] * std::log1p(h / x);
        return p.params[0] * std::pow(x, p.params[1]) * std::expm1(p.params[1] * std::log1p(h / x));
      }
      return log_value(y) - log_value(x);
    }
    case ProfileKind::Sinh: {
      if (x <= 0.0 || y <= 0.0) return log_value(y) - log_value(x);
      const double a = p.params[0];
      return a * h + std::log(-std::expm1(-2 * a * y)) - std::log(-std::expm1(-2 * a * x));
    }
    default:
      return log_value(y) - log_value(x);
  }
}

double RadialProfile::log_derivative(double r) const {
  const Impl& p = *impl_;
  switch (p.kind) {
    case ProfileKind::Power:
    case ProfileKind::Exponential:
      if (r < 0.0 || r > p.domain_max) throw DomainError("radius outside the profile domain");
      if (p.has_core && r < p.core.join) return p.core.log_derivative(r);
      if (p.kind == ProfileKind::Power && !p.has_core) return 1.0 / r;
      return p.tail_log_derivative(r);
    case ProfileKind::Sinh:
      if (r < 0.0) throw DomainError("radius outside the profile domain");
      return p.params[0] / std::tanh(p.params[0] * r);
    default:
      return derivative(r) / value(r);
  }
}

ModelManifold::ModelManifold(int dimension, RadialProfile profile) : dimension_(dimension), profile_(std::move(profile)) {
  if (dimension < 2) throw DomainError("model manifolds need dimension m >= 2");
}

WarpedCone::WarpedCone(int dimension, double lambda1) : dimension_(dimension), lambda1_(lambda1) {
  if (dimension < 2) throw DomainError("cones need dimension m >= 2");
  if (!(lambda1 >= 0.0)) throw DomainError("fiber eigenvalue must be nonnegative");
}

double sphere_area(int n) {
  if (n < 0) throw DomainError("sphere dimension must be nonnegative");
  const double half = 0.5 * (n + 1);
  return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

namespace {

void check_radius(const ModelManifold& manifold, double r) {
  if (!(r > 0.0) || !(r < manifold.profile().domain_max())) {
    throw DomainError("radius " + std::to_string(r) + " outside (0, domain_max)");
  }
}

}  // namespace

double area(const ModelManifold& manifold, double r) {
  check_radius(manifold, r);
  return sphere_area(manifold.dimension() - 1) * std::pow(manifold.profile().value(r), manifold.dimension() - 1);
}

double log_area(const ModelManifold& manifold, double r) {
  check_radius(manifold, r);
  return std::log(sphere_area(manifold.dimension() - 1)) + (manifold.dimension() - 1) * manifold.profile().log_value(r);
}

double volume(const ModelManifold& manifold, double r, const QuadratureConfig& cfg) {
  check_radius(manifold, r);
  const double omega = sphere_area(manifold.dimension() - 1);
  const int k = manifold.dimension() - 1;
  const auto& profile = manifold.profile();
  const auto integrand = [&](double t) { return std::pow(profile.value(t), k); };
  // Split at the core join, where sigma'' jumps.
  const auto kind = profile.kind();
  if (kind == ProfileKind::Power || kind == ProfileKind::Exponential) {
    const double join = profile.parameters().back();
    if (join < r) return omega * (integral(integrand, 0.0, join, cfg) + integral(integrand, join, r, cfg));
  }
  return omega * integral(integrand, 0.0, r, cfg);
}

double volume_ratio(const ModelManifold& manifold, double r, const QuadratureConfig& cfg) {
  check_radius(manifold, r);
  const int k = manifold.dimension() - 1;
  const auto& profile = manifold.profile();
  // (sigma(r - u) / sigma(r))^k is 1 at u = 0 and decays on the scale 1/(k sigma'/sigma).
  const auto ratio = [&](double u) {
    if (u >= r) return 0.0;
    return std::exp(-k * profile.log_increment(r - u, u));
  };
  const double width = 1.0 / (k * profile.log_derivative(r));
  return peaked_integral(ratio, r, width, cfg);
}

double log_volume(const ModelManifold& manifold, double r, const QuadratureConfig& cfg) {
  return log_area(manifold, r) + std::log(volume_ratio(manifold, r, cfg));
}

double radial_laplacian(const ModelManifold& manifold, const RadialFunction& f, double r) {
  if (!(r > 0.0)) throw DomainError("radial Laplacian is singular at r = 0");
  if (!f.value && (!f.derivative || !f.second_derivative)) throw DomainError("radial function needs a value callback");
  const double h = std::max(1e-5, 1e-5 * r);
  const double d1 = f.derivative ? f.derivative(r) : (f.value(r + h) - f.value(r - h)) / (2 * h);
  const double d2 = f.second_derivative ? f.second_derivative(r)
                                        : (f.value(r + h) - 2 * f.value(r) + f.value(r - h)) / (h * h);
  return d2 + (manifold.dimension() - 1) * manifold.profile().log_derivative(r) * d1;
}

}  // namespace potlib
