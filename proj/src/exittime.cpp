#include "potlib/exittime.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "potlib/errors.hpp"

namespace potlib {

double ExitTimeProfile::max_residual() const {
  double worst = 0.0;
  for (double r : residuals) worst = std::max(worst, r);
  return worst;
}

std::string to_string(ExitTimeProfile::Coordinate c) {
  switch (c) {
    case ExitTimeProfile::Coordinate::Radial:
      return "radial";
    case ExitTimeProfile::Coordinate::Height:
      return "height";
    case ExitTimeProfile::Coordinate::Busemann:
      return "busemann";
  }
  return "radial";
}

ComparisonWitness assess_divergence(const std::function<double(double)>& value_at, std::span<const double> schedule,
                                    const DivergenceProtocol& protocol) {
  if (schedule.empty()) throw DomainError("divergence assessment needs a nonempty schedule");
  ComparisonWitness out;
  for (double p : schedule) {
    if (!out.parameters.empty() && !(p > out.parameters.back())) {
      throw DomainError("parameter schedule must be strictly increasing");
    }
    out.parameters.push_back(p);
    out.values.push_back(value_at(p));
  }

  // Trailing increments over exact doublings have stopped shrinking.
  const auto flat_tail = [&] {
    const auto n = out.values.size();
    if (n < static_cast<std::size_t>(protocol.window) + 2) return false;
    for (std::size_t j = n - protocol.window; j < n; ++j) {
      if (out.parameters[j] != 2.0 * out.parameters[j - 1] || out.parameters[j - 1] != 2.0 * out.parameters[j - 2]) {
        return false;
      }
      const double inc = out.values[j] - out.values[j - 1];
      const double prev = out.values[j - 1] - out.values[j - 2];
      if (!(inc > 0.0) || inc < prev * (1.0 - 1e-9)) return false;
    }
    return true;
  };
  const auto increasing = [&] {
    for (std::size_t j = 1; j < out.values.size(); ++j) {
      if (!(out.values[j] > out.values[j - 1])) return false;
    }
    return true;
  };

  if (!increasing()) return out;
  for (int step = 0;; ++step) {
    if (out.values.back() > protocol.bound || flat_tail()) {
      out.diverges = true;
      return out;
    }
    if (step >= protocol.max_doublings) return out;
    const double next = 2.0 * out.parameters.back();
    const double v = value_at(next);
    out.parameters.push_back(next);
    out.values.push_back(v);
    if (!(v > out.values[out.values.size() - 2])) return out;
  }
}

double euclidean_ball_exit(int m, double R, double r) {
  if (m < 1) throw DomainError("dimension must be positive");
  if (!(r >= 0.0) || r > R) throw DomainError("ball exit time needs 0 <= r <= R");
  return (R * R - r * r) / (2.0 * m);
}

ExitTimeProfile euclidean_ball_profile(int m, double R, int points) {
  ExitTimeProfile out;
  out.coordinate = ExitTimeProfile::Coordinate::Radial;
  for (int i = 0; i <= points; ++i) {
    const double r = R * i / points;
    out.grid.push_back(r);
    out.values.push_back(euclidean_ball_exit(m, R, r));
    if (i == 0 || i == points) {
      out.residuals.push_back(0.0);
      continue;
    }
    const double d1 = -r / m;
    const double d2 = -1.0 / m;
    out.residuals.push_back(std::abs(d2 + (m - 1) * d1 / r + 1.0));
  }
  return out;
}

double slab_exit(double k, double height) {
  if (!(k > 1.0)) throw DomainError("slab parameter must exceed 1");
  if (height < 1.0 / k || height > k) throw DomainError("height outside the slab [1/k, k]");
  return 0.5 * (height - 1.0 / k) * (k - height);
}

ExitTimeProfile slab_profile(double k, int points) {
  ExitTimeProfile out;
  out.coordinate = ExitTimeProfile::Coordinate::Height;
  const double lo = 1.0 / k;
  for (int i = 0; i <= points; ++i) {
    const double h = i == points ? k : lo + (k - lo) * i / points;
    out.grid.push_back(h);
    out.values.push_back(slab_exit(k, h));
    if (i == 0 || i == points) {
      out.residuals.push_back(0.0);
      continue;
    }
    const double d2 = -1.0;
    out.residuals.push_back(std::abs(d2 + 1.0));
  }
  return out;
}

namespace {

// |a|^{-2p} - |b|^{-2p} from squared distances with b2 - a2 = gap >= 0.
double image_difference(double a2, double gap, double p) {
  return std::pow(a2, -p) * -std::expm1(-p * std::log1p(gap / a2));
}

}  // namespace

double halfspace_green(int ambient_dim, std::span<const double> p, std::span<const double> o) {
  if (ambient_dim < 3) throw DomainError("half-space kernel needs ambient dimension >= 3");
  if (p.size() != static_cast<std::size_t>(ambient_dim) || o.size() != p.size()) {
    throw DomainError("points must have ambient_dim coordinates");
  }
  const double yo = o.back();
  const double yp = p.back();
  if (!(yo > 0.0)) throw DomainError("pole must lie strictly inside the half space");
  if (yp < 0.0) throw DomainError("point must lie in the closed half space");
  double lateral = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) lateral += (p[i] - o[i]) * (p[i] - o[i]);
  const double d2 = lateral + (yp - yo) * (yp - yo);
  if (d2 == 0.0) throw PoleError("half-space kernel evaluated at its pole");
  const double c = 1.0 / ((ambient_dim - 2) * sphere_area(ambient_dim - 1));
  // |p - o'|^2 - |p - o|^2 = 4 yp yo.
  return c * image_difference(d2, 4.0 * yp * yo, 0.5 * (ambient_dim - 2));
}

double halfspace_exit_partial(int ambient_dim, std::span<const double> x, double R, const QuadratureConfig& cfg) {
  if (ambient_dim < 3) throw DomainError("half-space kernel needs ambient dimension >= 3");
  if (x.size() != static_cast<std::size_t>(ambient_dim)) throw DomainError("point must have ambient_dim coordinates");
  const double h = x.back();
  if (!(h > 0.0)) throw DomainError("base point must be strictly interior");
  if (!(R > 0.0)) throw DomainError("truncation radius must be positive");

  const int n = ambient_dim;
  const double c = 1.0 / ((n - 2) * sphere_area(n - 1));
  const double lateral_area = sphere_area(n - 2);
  const double p = 0.5 * (n - 2);

  QuadratureConfig inner = cfg;
  inner.rel_tol = cfg.rel_tol * 1e-2;
  inner.abs_tol = cfg.abs_tol * 1e-2;

  const auto slice = [&](double z) {
    if (z <= 0.0) return 0.0;
    const double dz2 = (z - h) * (z - h);
    const auto radial = [&](double rho) {
      const double a2 = rho * rho + dz2;
      if (a2 == 0.0) return 0.0;
      return std::pow(rho, n - 2) * image_difference(a2, 4.0 * z * h, p);
    };
    const double knee = std::min(R, std::abs(z - h));
    double total = 0.0;
    if (knee > 0.0) total += integral(radial, 0.0, knee, inner);
    if (knee < R) total += integral(radial, knee, R, inner);
    return total;
  };

  double total = 0.0;
  if (h < R) {
    total = integral(slice, 0.0, h, cfg) + integral(slice, h, R, cfg);
  } else {
    total = integral(slice, 0.0, R, cfg);
  }
  return c * lateral_area * total;
}

ComparisonWitness halfspace_exit_divergence(int ambient_dim, std::span<const double> x, std::span<const double> radii,
                                            const DivergenceProtocol& protocol) {
  return assess_divergence([&](double R) { return halfspace_exit_partial(ambient_dim, x, R); }, radii, protocol);
}

double sigma_k_bbar(double B) { return 0.5 * std::sqrt(4.0 * B * B + 1.0); }

double sigma_k_closed_form(double B, double t_k, double s) {
  if (!(B > 0.0)) return s;
  if (s < 0.0 || s >= t_k) throw DomainError("closed form is defined on [0, t_k)");
  const double bb = sigma_k_bbar(B);
  const double ratio = 1.0 - s / t_k;
  return std::pow(t_k, 0.5 + bb) * std::pow(t_k - s, 0.5 - bb) * -std::expm1(2.0 * bb * std::log(ratio)) / (2.0 * bb);
}

std::vector<double> uniform_grid(double lo, double hi, int intervals) {
  if (intervals < 1 || !(hi > lo)) throw DomainError("uniform grid needs hi > lo and at least one interval");
  std::vector<double> grid(intervals + 1);
  for (int i = 0; i <= intervals; ++i) grid[i] = lo + (hi - lo) * i / intervals;
  grid.back() = hi;
  return grid;
}

SigmaKSolution sigma_k_solve(double B, double t_k, std::span<const double> grid) {
  if (!(B >= 0.0)) throw DomainError("sigma_k needs B >= 0");
  if (!(t_k > 2.0)) throw DomainError("sigma_k needs t_k > 2");
  if (grid.size() < 2 || grid.front() != 0.0 || grid.back() > t_k) {
    throw DomainError("sigma_k grid must start at 0 and stay within [0, t_k]");
  }

  std::vector<double> s(grid.begin(), grid.end());
  std::vector<double> sigma(s.size());
  std::vector<double> slope(s.size());

  if (B == 0.0) {
    sigma = s;
    std::fill(slope.begin(), slope.end(), 1.0);
  } else {
    using State = std::array<double, 2>;
    const auto rhs = [B, t_k](const State& y, State& dy, double x) {
      const double gap = t_k - x;
      dy[0] = y[1];
      dy[1] = B * B / (1.0 + gap * gap) * y[0];
    };
    namespace ode = boost::numeric::odeint;
    auto stepper = ode::make_controlled(1e-12, 1e-12, ode::runge_kutta_dopri5<State>());
    std::size_t index = 0;
    const auto observe = [&](const State& y, double) {
      sigma[index] = y[0];
      slope[index] = y[1];
      ++index;
    };
    State y{0.0, 1.0};
    try {
      ode::integrate_times(stepper, rhs, y, s.begin(), s.end(), 1e-3, observe, ode::max_step_checker(1000000));
    } catch (const std::exception& e) {
      throw OdeError(std::string("sigma_k integration failed: ") + e.what());
    }
    if (index != s.size()) throw OdeError("sigma_k integration stopped early");
    sigma[0] = 0.0;
    slope[0] = 1.0;
  }

  double d_bar = kInfinity;
  double discrepancy = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    d_bar = std::min(d_bar, sigma[i] / s[i]);
    if (s[i] < t_k) {
      discrepancy = std::max(discrepancy, std::abs(sigma_k_closed_form(B, t_k, s[i]) - sigma[i]) / sigma[i]);
    }
  }
  return {RadialProfile::tabulated(std::move(s), std::move(sigma), std::move(slope)), d_bar, discrepancy};
}

double f_k_comparison(int m, const RadialProfile& sigma, double t_k, double r, const QuadratureConfig& cfg) {
  if (m < 2) throw DomainError("dimension must be at least 2");
  const double top = t_k - 1.0;
  if (!(r >= 0.0) || r > top) throw DomainError("F_k needs 0 <= r <= t_k - 1");
  if (top > sigma.domain_max()) throw DomainError("profile does not reach t_k - 1");
  const int k = m - 1;
  const auto density = [&](double t) {
    if (t <= 0.0) return 0.0;
    const auto ratio = [&](double u) { return u >= t ? 0.0 : std::exp(-k * sigma.log_increment(t - u, u)); };
    return peaked_integral(ratio, t, 1.0 / (k * sigma.log_derivative(t)), cfg);
  };
  return integral(density, r, top, cfg);
}

namespace {

struct HoroTerms {
  double value;
  double d1;
  double d2;
};

HoroTerms horo_terms(int m, double A, double B, double R, double R_k, double b) {
  const double ca = (m - 1) * A;
  const double cb = (m - 1) * B;
  const double kappa = (R_k - R) / ca;
  const double denom = -std::expm1(-ca * (R_k - R));
  const double near = std::exp(-ca * (b - R));
  const double far = std::exp(-ca * (R_k - R));
  const double q = near / denom;
  return {-kappa * (near - far) / denom + (R_k - b) / cb, kappa * ca * q - 1.0 / cb, -kappa * ca * ca * q};
}

void check_horo(int m, double A, double B, double R, double R_k) {
  if (m < 2) throw DomainError("dimension must be at least 2");
  if (!(A > 0.0) || !(B >= A)) throw DomainError("horoannulus needs 0 < A <= B");
  if (!(R_k > R)) throw DomainError("horoannulus needs R < R_k");
}

}  // namespace

double horoannulus_exit(int m, double A, double B, double R, double R_k, double b) {
  check_horo(m, A, B, R, R_k);
  if (b < R || b > R_k) throw DomainError("Busemann value outside [R, R_k]");
  if (b == R || b == R_k) return 0.0;
  return horo_terms(m, A, B, R, R_k, b).value;
}

ExitTimeProfile horoannulus_profile(int m, double A, double B, double R, double R_k, int points) {
  check_horo(m, A, B, R, R_k);
  ExitTimeProfile out;
  out.coordinate = ExitTimeProfile::Coordinate::Busemann;
  const double ca = (m - 1) * A;
  for (int i = 0; i <= points; ++i) {
    const double b = i == points ? R_k : R + (R_k - R) * i / points;
    out.grid.push_back(b);
    out.values.push_back(horoannulus_exit(m, A, B, R, R_k, b));
    if (i == 0 || i == points) {
      out.residuals.push_back(0.0);
      continue;
    }
    const HoroTerms t = horo_terms(m, A, B, R, R_k, b);
    out.residuals.push_back(std::abs(t.d2 + ca * t.d1 + 1.0));
  }
  return out;
}

LineOperator LineOperator::euclidean_radial(int m) {
  return {[m](double x) { return (m - 1) / x; }, 0.0};
}

LineOperator LineOperator::model_radial(const ModelManifold& manifold) {
  return {[manifold](double x) { return (manifold.dimension() - 1) * manifold.profile().log_derivative(x); }, 0.0};
}

LineOperator LineOperator::hyperbolic_radial(int m, double B) {
  return {[m, B](double x) { return (m - 1) * B / std::tanh(B * x); }, 0.0};
}

KhasminskiiReport khasminskii_check(const KhasminskiiProblem& problem) {
  if (!problem.phi.value || !problem.phi.derivative || !problem.phi.second_derivative) {
    throw DomainError("Khas'minskii check needs phi with two derivatives");
  }
  if (!(problem.hi > problem.lo) || problem.points < 2) throw DomainError("Khas'minskii check needs lo < hi");
  const bool unbounded = std::isinf(problem.hi);
  const double span = unbounded ? 1e6 : problem.hi - problem.lo;

  std::vector<double> grid(problem.points);
  for (int i = 0; i < problem.points; ++i) {
    const double t = static_cast<double>(i) / (problem.points - 1);
    grid[i] = unbounded ? problem.lo + std::expm1(t * std::log1p(span)) : problem.lo + span * t;
  }

  KhasminskiiReport report;
  for (double x : grid) {
    const double d1 = problem.phi.derivative(x);
    const double d2 = problem.phi.second_derivative(x);
    const double drift = problem.op.drift ? problem.op.drift(x) * d1 : 0.0;
    const double value = d2 + drift + problem.op.source;
    const double scale = std::max({1.0, std::abs(d2), std::abs(drift), std::abs(problem.op.source)});
    const double signed_value = problem.superharmonic ? value : -value;
    if (signed_value > problem.tolerance * scale) report.violations.push_back(x);
  }
  report.sign_condition = report.violations.empty();

  if (problem.proper_transversally || !unbounded) {
    report.proper = true;
  } else {
    // Eventually increasing along the sampled ray and above every earlier value.
    const auto start = static_cast<std::size_t>(0.75 * grid.size());
    bool proper = true;
    double earlier = -kInfinity;
    for (std::size_t i = 0; i < start; ++i) earlier = std::max(earlier, problem.phi.value(grid[i]));
    double prev = problem.phi.value(grid[start]);
    for (std::size_t i = start + 1; i < grid.size() && proper; ++i) {
      const double v = problem.phi.value(grid[i]);
      proper = v >= prev;
      prev = v;
    }
    report.proper = proper && prev > earlier;
  }
  report.holds = report.sign_condition && report.proper;
  return report;
}

}  // namespace potlib
