#include "potlib/cones.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "potlib/errors.hpp"

namespace potlib {

namespace {

// True when the shooting solution vanishes somewhere in (0, theta0].
bool shoot_crosses(int m, double lambda, double theta0) {
  using State = std::array<double, 2>;
  namespace ode = boost::numeric::odeint;
  const double start = std::min(1e-3, 1e-3 * theta0);
  // Two-term series at the regular singular point theta = 0.
  State y{1.0 - lambda * start * start / (2.0 * (m - 1)), -lambda * start / (m - 1)};
  const auto rhs = [m, lambda](const State& s, State& ds, double theta) {
    ds[0] = s[1];
    ds[1] = -(m - 2) / std::tan(theta) * s[1] - lambda * s[0];
  };
  bool crossed = false;
  const auto observe = [&](const State& s, double) { crossed = crossed || s[0] <= 0.0; };
  auto stepper = ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_dopri5<State>());
  try {
    ode::integrate_adaptive(stepper, rhs, y, start, theta0, 1e-4 * theta0, observe);
  } catch (const std::exception& e) {
    throw ShootingError(std::string("shooting integration failed: ") + e.what());
  }
  return crossed || y[0] <= 0.0;
}

// 2 - alpha = 2(2m - lambda) / (m + 2 + sqrt((m-2)^2 + 4 lambda)), free of cancellation.
double alpha_gap(int m, double lambda) {
  return 2.0 * (2.0 * m - lambda) / (m + 2.0 + std::sqrt((m - 2.0) * (m - 2.0) + 4.0 * lambda));
}

struct Derivs {
  double h;
  double d1;
  double d2;
};

Derivs h_R_derivs(int m, double lambda, double R, double r) {
  const double delta = 2.0 * m - lambda;
  const double eps = alpha_gap(m, lambda);
  const double e = std::expm1(eps * std::log(R / r));
  return {r * r * e / delta, r * (2.0 * e - eps * (e + 1.0)) / delta,
          (2.0 * e - 3.0 * eps * (e + 1.0) + eps * eps * (e + 1.0)) / delta};
}

Derivs h_R_critical_derivs(int m, double R, double r) {
  const double log_R = std::log(R);
  const double k = -1.0 / std::expm1(-(m + 2) * log_R);  // R^{m+2} / (R^{m+2} - 1)
  const double log_r = std::log(r);
  const double inv = std::pow(r, -m);
  const double h = k * (r * r - inv) * log_R - r * r * log_r;
  const double d1 = k * (2.0 * r + m * inv / r) * log_R - 2.0 * r * log_r - r;
  const double d2 = k * (2.0 - m * (m + 1.0) * inv / (r * r)) * log_R - 2.0 * log_r - 3.0;
  return {h / (m + 2), d1 / (m + 2), d2 / (m + 2)};
}

void check_lambda(int m, double lambda) {
  if (m < 2) throw DomainError("cone dimension must be at least 2");
  if (!(lambda >= 0.0) || !(lambda < 2.0 * m)) throw DomainError("h_R needs 0 <= lambda < 2m");
}

}  // namespace

double lambda1_cap(int m, double theta0) {
  if (m < 2) throw DomainError("cap eigenvalue needs m >= 2");
  if (!(theta0 > 0.0) || !(theta0 < std::numbers::pi)) throw DomainError("cap half-angle must lie in (0, pi)");
  constexpr double kCeiling = 1e4;
  double lo = 0.0;
  double hi = 1.0;
  while (!shoot_crosses(m, hi, theta0)) {
    lo = hi;
    hi *= 2.0;
    if (hi > kCeiling) throw ShootingError("no eigenvalue below 1e4 for this cap");
  }
  while (hi - lo > 1e-13 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (shoot_crosses(m, mid, theta0)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double cone_alpha(int m, double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("eigenvalue must be nonnegative");
  return (-(m - 2.0) + std::sqrt((m - 2.0) * (m - 2.0) + 4.0 * lambda)) / 2.0;
}

double h_R_profile(int m, double lambda, double R, double r) {
  check_lambda(m, lambda);
  if (!(R > 0.0) || !(r >= 0.0) || r > R) throw DomainError("h_R needs 0 <= r <= R");
  if (r == R) return 0.0;
  if (r == 0.0) return lambda > 0.0 ? 0.0 : R * R / (2.0 * m);
  // (r/R)^alpha R^2 - r^2 = r^2 ((R/r)^{2 - alpha} - 1)
  return h_R_derivs(m, lambda, R, r).h;
}

double h_R_critical(int m, double R, double r) {
  if (m < 2) throw DomainError("cone dimension must be at least 2");
  if (!(R > 1.0) || !(r >= 1.0) || r > R) throw DomainError("critical h_R needs 1 <= r <= R");
  if (r == 1.0 || r == R) return 0.0;
  return h_R_critical_derivs(m, R, r).h;
}

ExitTimeProfile h_R_table(int m, double lambda, double R, int points) {
  check_lambda(m, lambda);
  ExitTimeProfile out;
  out.coordinate = ExitTimeProfile::Coordinate::Radial;
  for (int i = 0; i <= points; ++i) {
    const double r = i == points ? R : R * i / points;
    out.grid.push_back(r);
    out.values.push_back(h_R_profile(m, lambda, R, r));
    if (i == 0 || i == points) {
      out.residuals.push_back(0.0);
      continue;
    }
    const Derivs d = h_R_derivs(m, lambda, R, r);
    out.residuals.push_back(std::abs(d.d2 + (m - 1) * d.d1 / r - lambda * d.h / (r * r) + 1.0));
  }
  return out;
}

ExitTimeProfile h_R_critical_table(int m, double R, int points) {
  if (!(R > 1.0)) throw DomainError("critical h_R needs R > 1");
  ExitTimeProfile out;
  out.coordinate = ExitTimeProfile::Coordinate::Radial;
  for (int i = 0; i <= points; ++i) {
    const double r = i == points ? R : 1.0 + (R - 1.0) * i / points;
    out.grid.push_back(r);
    out.values.push_back(h_R_critical(m, R, r));
    if (i == 0 || i == points) {
      out.residuals.push_back(0.0);
      continue;
    }
    const Derivs d = h_R_critical_derivs(m, R, r);
    out.residuals.push_back(std::abs(d.d2 + (m - 1) * d.d1 / r - 2.0 * m * d.h / (r * r) + 1.0));
  }
  return out;
}

double supercritical_exit_bound(int m, double lambda_prime, double u_min, double r, double u_max) {
  if (!(lambda_prime > 2.0 * m)) throw DomainError("supercritical bound needs lambda' > 2m");
  if (!(u_min > 0.0) || u_max < u_min) throw DomainError("eigenfunction bounds need 0 < u_min <= u_max");
  if (!(r >= 0.0)) throw DomainError("radius must be nonnegative");
  return u_max * r * r / ((lambda_prime - 2.0 * m) * u_min);
}

ConeVerdict cone_verdict(int m, double lambda1, std::span<const double> R_schedule, double u_min,
                         const DivergenceProtocol& protocol) {
  if (m < 2) throw DomainError("cone dimension must be at least 2");
  if (!(lambda1 >= 0.0)) throw DomainError("fiber eigenvalue must be nonnegative");
  ConeVerdict out;
  out.lambda1 = lambda1;
  out.threshold = 2.0 * m;
  out.l1_liouville = lambda1 <= out.threshold;

  if (lambda1 < out.threshold) {
    out.alpha = cone_alpha(m, lambda1);
    for (double R : R_schedule) {
      if (!(R > 1.0)) throw DomainError("radius schedule must exceed the base point r = 1");
    }
    out.witness = assess_divergence([&](double R) { return h_R_profile(m, lambda1, R, 1.0); }, R_schedule, protocol);
  } else if (lambda1 == out.threshold) {
    for (double R : R_schedule) {
      if (!(R > 2.0)) throw DomainError("radius schedule must exceed the base point r = 2");
    }
    out.witness = assess_divergence([&](double R) { return h_R_critical(m, R, 2.0); }, R_schedule, protocol);
  } else {
    out.bound_coefficient = supercritical_exit_bound(m, lambda1, u_min, 1.0);
  }
  if (out.witness && !out.witness->diverges) {
    throw ConsistencyError("cone exit-time witness failed to diverge below the spectral threshold");
  }
  return out;
}

}  // namespace potlib
