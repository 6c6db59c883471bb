#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "potlib/brownian.hpp"
#include "potlib/classify.hpp"
#include "potlib/cli.hpp"
#include "potlib/cones.hpp"
#include "potlib/errors.hpp"
#include "potlib/exhaustion.hpp"
#include "potlib/exittime.hpp"

namespace potlib::cli {

namespace {

using Check = std::function<std::pair<bool, std::string>()>;

std::string fmt(double x) { return format_double(x); }

std::vector<std::pair<std::string, ModelManifold>> named_models() {
  return {{"euclid(2)", ModelManifold(2, RadialProfile::power(1.0))},
          {"euclid(3)", ModelManifold(3, RadialProfile::power(1.0))},
          {"hyperbolic(3)", ModelManifold(3, RadialProfile::sinh(1.0))},
          {"e_r3_tail(3)", ModelManifold(3, RadialProfile::exponential(1.0, 3.0))}};
}

std::pair<bool, std::string> ball_exit() {
  const ModelManifold euclid3(3, RadialProfile::power(1.0));
  const double closed = euclidean_ball_exit(3, 1.0, 0.0);
  const std::vector<double> schedule{0.5, 0.75, 0.875, 1.0};
  const ExhaustionRun run = exit_time_by_exhaustion(euclid3, 0.0, schedule, {}, 1.0);
  const bool ok = closed == 1.0 / 6.0 && std::abs(run.limit.value - 1.0 / 6.0) < 1e-8 && run.monotone();
  return {ok, "closed form " + fmt(closed) + ", exhaustion " + fmt(run.limit.value)};
}

std::pair<bool, std::string> ball_mc() {
  const ModelManifold euclid3(3, RadialProfile::power(1.0));
  McConfig cfg;
  cfg.n_paths = 20000;
  cfg.dt = 1e-3;
  cfg.seed = 1;
  const McEstimate e = exit_time_ball(euclid3, 0.01, 1.0, cfg);
  const double target = euclidean_ball_exit(3, 1.0, 0.01);
  return {std::abs(e.mean - target) < 3.0 * e.std_error,
          "mean " + fmt(e.mean) + " +- " + fmt(e.std_error) + " vs " + fmt(target)};
}

std::pair<bool, std::string> classification() {
  const Verdict expected[4][3] = {{Verdict::Yes, Verdict::Yes, Verdict::Yes},
                                  {Verdict::No, Verdict::Yes, Verdict::Yes},
                                  {Verdict::No, Verdict::Yes, Verdict::Yes},
                                  {Verdict::No, Verdict::No, Verdict::No}};
  bool ok = true;
  std::string detail;
  int i = 0;
  for (const auto& [name, model] : named_models()) {
    const ClassificationReport r = classify(model);
    const Verdict got[3] = {r.parabolic.verdict, r.stochastically_complete.verdict, r.l1_liouville.verdict};
    for (int j = 0; j < 3; ++j) ok = ok && got[j] == expected[i][j];
    detail += name + "=(" + to_string(got[0]) + "," + to_string(got[1]) + "," + to_string(got[2]) + ") ";
    ++i;
  }
  return {ok, detail};
}

std::pair<bool, std::string> cone_dichotomy() {
  bool ok = true;
  double worst = 0.0;
  for (double R : {5.0, 10.0, 20.0, 40.0, 80.0}) {
    const double h = h_R_profile(3, 2.0, R, 1.0);
    worst = std::max(worst, std::abs(h - (R - 1.0) / 4.0) / ((R - 1.0) / 4.0));
  }
  ok = worst < 1e-14;
  const std::vector<double> schedule{5, 10, 20, 40, 80};
  const ConeVerdict sub = cone_verdict(3, 2.0, schedule);
  const ConeVerdict crit = cone_verdict(3, 6.0, schedule);
  const ConeVerdict super = cone_verdict(3, 8.0, schedule);
  ok = ok && sub.l1_liouville && sub.witness->diverges && crit.l1_liouville && !super.l1_liouville &&
       std::abs(*super.bound_coefficient - 0.5) < 1e-15;
  return {ok, "max rel. deviation from (R-1)/4: " + fmt(worst) + ", supercritical coefficient " +
                  fmt(*super.bound_coefficient)};
}

std::pair<bool, std::string> cap_eigenvalue() {
  const double l3 = lambda1_cap(3, std::numbers::pi / 2);
  const double l4 = lambda1_cap(4, std::numbers::pi / 2);
  return {std::abs(l3 - 2.0) < 1e-6 && std::abs(l4 - 3.0) < 1e-6, "m=3: " + fmt(l3) + ", m=4: " + fmt(l4)};
}

std::pair<bool, std::string> halfspace() {
  const std::vector<double> x{0.0, 0.0, 1.0};
  const std::vector<double> radii{10, 20, 40, 80};
  const ComparisonWitness w = halfspace_exit_divergence(3, x, radii);
  bool increasing = true;
  for (std::size_t i = 1; i < radii.size(); ++i) increasing = increasing && w.values[i] > w.values[i - 1];
  const double ratio = w.values[radii.size() - 1] / w.values[0];
  const std::vector<double> boundary{0.3, -0.7, 0.0};
  const double g = halfspace_green(3, boundary, x);
  return {increasing && ratio > 3.0 && std::abs(g) < 1e-12, "last/first " + fmt(ratio) + ", boundary value " + fmt(g)};
}

std::pair<bool, std::string> horoannulus() {
  double worst = 0.0;
  bool boundary = true;
  bool grows = true;
  for (double A : {0.5, 1.0, 2.0}) {
    for (int m : {2, 3, 4}) {
      const ExitTimeProfile p = horoannulus_profile(m, A, A, 0.0, 1.0);
      worst = std::max(worst, p.max_residual());
      boundary = boundary && p.values.front() == 0.0 && p.values.back() == 0.0;
      const std::vector<double> schedule{1, 2, 4, 8};
      const ComparisonWitness w =
          assess_divergence([&](double Rk) { return horoannulus_exit(m, A, A, 0.0, Rk, 0.5); }, schedule);
      grows = grows && w.diverges;
    }
  }
  return {worst < 1e-8 && boundary && grows, "max residual " + fmt(worst)};
}

std::pair<bool, std::string> sigma_k() {
  const double Bs[] = {0.0, 0.3, 0.6 * std::sqrt(3.0) / 2.0};
  bool ok = true;
  std::ostringstream detail;
  for (double B : Bs) {
    const SigmaKSolution s = sigma_k_solve(B, 100.0, uniform_grid(0.0, 100.0, 2000));
    ok = ok && s.d_bar > 0.0;
    double prev = -1.0;
    for (double t_k : {50.0, 100.0, 200.0, 400.0}) {
      const SigmaKSolution sol = sigma_k_solve(B, t_k, uniform_grid(0.0, t_k, static_cast<int>(20 * t_k)));
      const double f = f_k_comparison(3, sol.profile, t_k, t_k - 2.0);
      ok = ok && f > prev;
      prev = f;
      if (B == 0.0) {
        const double closed = ((t_k - 1.0) * (t_k - 1.0) - (t_k - 2.0) * (t_k - 2.0)) / 6.0;
        ok = ok && std::abs(f - closed) < 1e-9 * closed;
      }
    }
    detail << "B=" << fmt(B) << " dbar=" << fmt(s.d_bar) << " ";
  }
  return {ok, detail.str()};
}

std::pair<bool, std::string> exhaustion() {
  bool ok = true;
  std::string detail;
  const std::vector<double> schedule = doubling_schedule(4.0, 8);
  for (const auto& [name, model] : named_models()) {
    const ClassificationReport r = classify(model);
    const ExhaustionRun v = dirichlet_parabolicity_limit(model, 1.0, 2.0, schedule);
    const ExhaustionRun g = green_by_exhaustion(model, 1.0, schedule);
    const ExhaustionRun e = exit_time_by_exhaustion(model, 0.0, schedule);
    const bool parabolic = r.parabolic.verdict == Verdict::Yes;
    const bool l1 = r.l1_liouville.verdict == Verdict::Yes;
    ok = ok && (v.limit.kind == LimitKind::DivergedToZero) == parabolic &&
         (g.limit.kind == LimitKind::DivergedToInfinity) == parabolic &&
         (e.limit.kind == LimitKind::DivergedToInfinity) == l1 && v.monotone() && g.monotone() && e.monotone();
    if (!parabolic) {
      const double G = green_kernel(model, 1.0);
      ok = ok && std::abs(g.limit.value - G) < 1e-8 * G;
    }
    detail += name + ":" + to_string(v.limit.kind) + "/" + to_string(g.limit.kind) + "/" + to_string(e.limit.kind) + " ";
  }
  return {ok, detail};
}

std::pair<bool, std::string> slab_mc() {
  McConfig cfg;
  cfg.n_paths = 20000;
  cfg.dt = 1e-3;
  cfg.seed = 2;
  const McEstimate e = exit_time_slab(2.0, 1.0, cfg);
  return {std::abs(e.mean - 0.25) < 3.0 * e.std_error, "mean " + fmt(e.mean) + " +- " + fmt(e.std_error)};
}

std::pair<bool, std::string> explosion() {
  McConfig cfg;
  cfg.n_paths = 1000;
  cfg.dt = 1e-2;
  cfg.seed = 3;
  const McProbability p = explosion_probe(ModelManifold(3, RadialProfile::exponential(1.0, 3.0)), 2.0, 10.0, cfg);
  const McProbability q = explosion_probe(ModelManifold(2, RadialProfile::power(1.0)), 2.0, 10.0, cfg);
  return {p.probability > 0.0 && q.hits == 0, "e_r3_tail(3): " + fmt(p.probability) + ", euclid(2) hits " +
                                                  std::to_string(q.hits)};
}

}  // namespace

std::vector<CheckResult> verify_suite(std::string_view suite) {
  if (suite != "paper") throw ConfigError("unknown verification suite '" + std::string(suite) + "'");
  const std::vector<std::pair<std::string, Check>> checks = {
      {"ball_exit_time", ball_exit},
      {"ball_exit_time_mc", ball_mc},
      {"classification_triples", classification},
      {"cone_dichotomy", cone_dichotomy},
      {"cap_eigenvalue", cap_eigenvalue},
      {"halfspace_divergence", halfspace},
      {"horoannulus_residual", horoannulus},
      {"sigma_k_program", sigma_k},
      {"exhaustion_consistency", exhaustion},
      {"slab_exit_time_mc", slab_mc},
      {"explosion_probe", explosion}};
  std::vector<CheckResult> out;
  for (const auto& [name, check] : checks) {
    CheckResult r{name, false, {}};
    try {
      std::tie(r.passed, r.detail) = check();
    } catch (const std::exception& e) {
      r.detail = std::string("error: ") + e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace potlib::cli
