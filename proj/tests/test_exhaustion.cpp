#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "doctest.h"
#include "potlib/classify.hpp"
#include "potlib/errors.hpp"
#include "potlib/exhaustion.hpp"
#include "potlib/exittime.hpp"

using namespace potlib;
using std::numbers::pi;

namespace {

std::vector<std::pair<std::string, ModelManifold>> models() {
  return {{"euclid2", ModelManifold(2, RadialProfile::power(1.0))},
          {"euclid3", ModelManifold(3, RadialProfile::power(1.0))},
          {"hyp3", ModelManifold(3, RadialProfile::sinh(1.0))},
          {"hyp2", ModelManifold(2, RadialProfile::sinh(1.0))},
          {"r^2 m=2", ModelManifold(2, RadialProfile::power(2.0))},
          {"e^r3 m=3", ModelManifold(3, RadialProfile::exponential(1.0, 3.0))},
          {"e^r2 m=3", ModelManifold(3, RadialProfile::exponential(1.0, 2.0))}};
}

}  // namespace

TEST_SUITE("exhaustion") {
  TEST_CASE("harmonic annulus") {
    const ModelManifold plane(2, RadialProfile::power(1.0));
    CHECK(harmonic_annulus(plane, 1.0, std::exp(1.0), std::exp(0.5)) == doctest::Approx(0.5).epsilon(1e-12));
    const ModelManifold euclid3(3, RadialProfile::power(1.0));
    CHECK(harmonic_annulus(euclid3, 1.0, 2.0, 1.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(harmonic_annulus(euclid3, 1.0, 2.0, 1.0) == 0.0);
    CHECK(harmonic_annulus(euclid3, 1.0, 2.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(harmonic_annulus(euclid3, 1.0, 2.0, 2.5), DomainError);
    CHECK_THROWS_AS(harmonic_annulus(euclid3, 0.0, 2.0, 1.0), DomainError);
  }

  TEST_CASE("harmonic sequence in the plane vanishes") {
    const ModelManifold plane(2, RadialProfile::power(1.0));
    const auto schedule = doubling_schedule(4.0, 8);
    const ExhaustionRun run = dirichlet_parabolicity_limit(plane, 1.0, 2.0, schedule);
    for (std::size_t i = 0; i < schedule.size(); ++i) {
      CHECK(run.samples[i] == doctest::Approx(std::log(2.0) / std::log(schedule[i])).epsilon(1e-10));
    }
    CHECK(run.limit.kind == LimitKind::DivergedToZero);
    CHECK(run.limit.value == 0.0);
    CHECK(run.monotone());
  }

  TEST_CASE("harmonic sequence limits off the plane") {
    const auto schedule = doubling_schedule(4.0, 8);
    const ExhaustionRun e3 = dirichlet_parabolicity_limit(ModelManifold(3, RadialProfile::power(1.0)), 1.0, 2.0, schedule);
    REQUIRE(e3.limit.kind == LimitKind::Converged);
    CHECK(e3.limit.value == doctest::Approx(0.5).epsilon(1e-9));

    const ExhaustionRun h3 = dirichlet_parabolicity_limit(ModelManifold(3, RadialProfile::sinh(1.0)), 1.0, 2.0, schedule);
    REQUIRE(h3.limit.kind == LimitKind::Converged);
    const double coth1 = 1.0 / std::tanh(1.0);
    const double coth2 = 1.0 / std::tanh(2.0);
    CHECK(h3.limit.value == doctest::Approx((coth1 - coth2) / (coth1 - 1.0)).epsilon(1e-9));
    CHECK(h3.limit.value > 0.0);
  }

  TEST_CASE("Green kernel by exhaustion") {
    const auto schedule = doubling_schedule(2.0, 8);
    const ExhaustionRun e3 = green_by_exhaustion(ModelManifold(3, RadialProfile::power(1.0)), 1.0, schedule);
    REQUIRE(e3.limit.kind == LimitKind::Converged);
    CHECK(e3.limit.value == doctest::Approx(1.0 / (4.0 * pi)).epsilon(1e-9));

    const ExhaustionRun plane = green_by_exhaustion(ModelManifold(2, RadialProfile::power(1.0)), 1.0, schedule);
    CHECK(plane.limit.kind == LimitKind::DivergedToInfinity);
    for (std::size_t i = 0; i < schedule.size(); ++i) {
      CHECK(plane.samples[i] == doctest::Approx(std::log(schedule[i]) / (2.0 * pi)).epsilon(1e-10));
    }

    const ExhaustionRun h3 = green_by_exhaustion(ModelManifold(3, RadialProfile::sinh(1.0)), 1.0, schedule);
    REQUIRE(h3.limit.kind == LimitKind::Converged);
    CHECK(h3.limit.value == doctest::Approx((1.0 / std::tanh(1.0) - 1.0) / (4.0 * pi)).epsilon(1e-9));
  }

  TEST_CASE("exit time by exhaustion") {
    const ModelManifold euclid3(3, RadialProfile::power(1.0));
    const std::vector<double> unit{1.0};
    const ExhaustionRun ball = exit_time_by_exhaustion(euclid3, 0.0, unit, {}, 1.0);
    CHECK(ball.samples.front() == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
    CHECK(ball.limit.kind == LimitKind::Converged);

    const auto schedule = doubling_schedule(1.0, 8);
    const ExhaustionRun whole = exit_time_by_exhaustion(euclid3, 0.0, schedule);
    CHECK(whole.limit.kind == LimitKind::DivergedToInfinity);
    for (std::size_t i = 0; i < schedule.size(); ++i) {
      CHECK(whole.samples[i] == doctest::Approx(euclidean_ball_exit(3, schedule[i], 0.0)).epsilon(1e-10));
    }

    const ExhaustionRun fast = exit_time_by_exhaustion(ModelManifold(3, RadialProfile::exponential(1.0, 3.0)), 0.0, schedule);
    REQUIRE(fast.limit.kind == LimitKind::Converged);
    CHECK(std::isfinite(fast.limit.value));
    CHECK(fast.limit.value >= fast.samples.back());
  }

  TEST_CASE("ball exhaustion converges to the closed form") {
    const ModelManifold euclid3(3, RadialProfile::power(1.0));
    const std::vector<double> schedule{0.5, 0.75, 0.875, 0.9375};
    const ExhaustionRun run = exit_time_by_exhaustion(euclid3, 0.25, schedule, {}, 1.0);
    REQUIRE(run.limit.kind == LimitKind::Converged);
    CHECK(run.limit.value == doctest::Approx(euclidean_ball_exit(3, 1.0, 0.25)).epsilon(1e-10));
    for (std::size_t i = 0; i < schedule.size(); ++i) {
      CHECK(run.samples[i] == doctest::Approx(euclidean_ball_exit(3, schedule[i], 0.25)).epsilon(1e-10));
    }
  }

  TEST_CASE("monotone sequences and the maximum principle") {
    const auto schedule = doubling_schedule(4.0, 6);
    for (const auto& [name, model] : models()) {
      CAPTURE(name);
      const ExhaustionRun v = dirichlet_parabolicity_limit(model, 1.0, 2.0, schedule);
      const ExhaustionRun g = green_by_exhaustion(model, 1.0, schedule);
      const ExhaustionRun e = exit_time_by_exhaustion(model, 0.5, schedule);
      CHECK(v.monotone());
      CHECK(g.monotone());
      CHECK(e.monotone());
      for (double x : v.samples) {
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
      }
      for (std::size_t i = 1; i < schedule.size(); ++i) {
        CHECK(v.samples[i] <= v.samples[i - 1]);
        CHECK(g.samples[i] >= g.samples[i - 1]);
        CHECK(e.samples[i] >= e.samples[i - 1]);
      }
    }
  }

  TEST_CASE("agreement with the classification") {
    const auto schedule = doubling_schedule(4.0, 8);
    for (const auto& [name, model] : models()) {
      CAPTURE(name);
      const ClassificationReport r = classify(model);
      const ExhaustionRun v = dirichlet_parabolicity_limit(model, 1.0, 2.0, schedule);
      const ExhaustionRun g = green_by_exhaustion(model, 1.0, schedule);
      const ExhaustionRun e = exit_time_by_exhaustion(model, 0.0, schedule);
      const bool parabolic = r.parabolic.verdict == Verdict::Yes;
      CHECK((v.limit.kind == LimitKind::DivergedToZero) == parabolic);
      CHECK((g.limit.kind == LimitKind::DivergedToInfinity) == parabolic);
      CHECK((e.limit.kind == LimitKind::DivergedToInfinity) == (r.l1_liouville.verdict == Verdict::Yes));
      if (!parabolic) {
        const double G = green_kernel(model, 1.0);
        CHECK(std::abs(g.limit.value - G) <= 1e-8 * G);
      }
      if (r.l1_liouville.verdict == Verdict::No) {
        CHECK(std::abs(e.limit.value - r.l1_liouville.witness.value) <= 1e-8 * r.l1_liouville.witness.value);
      }
    }
  }

  TEST_CASE("schedule validation") {
    const ModelManifold euclid3(3, RadialProfile::power(1.0));
    const std::vector<double> bad{4.0, 2.0};
    CHECK_THROWS_AS(green_by_exhaustion(euclid3, 1.0, bad), DomainError);
    const std::vector<double> empty;
    CHECK_THROWS_AS(exit_time_by_exhaustion(euclid3, 0.0, empty), DomainError);
    const std::vector<double> inside{0.5, 4.0};
    CHECK_THROWS_AS(green_by_exhaustion(euclid3, 1.0, inside), DomainError);
    CHECK_THROWS_AS(dirichlet_parabolicity_limit(euclid3, 2.0, 1.0, bad), DomainError);
    const std::vector<double> past{0.5, 2.0};
    CHECK_THROWS_AS(exit_time_by_exhaustion(euclid3, 0.0, past, {}, 1.0), DomainError);
    CHECK_THROWS_AS(doubling_schedule(0.0, 3), DomainError);
    CHECK(doubling_schedule(1.5, 3) == std::vector<double>{1.5, 3.0, 6.0});
  }

  TEST_CASE("limit kinds print") {
    CHECK(to_string(LimitKind::Converged) == "converged");
    CHECK(to_string(LimitKind::DivergedToZero) == "diverged_to_zero");
  }
}
