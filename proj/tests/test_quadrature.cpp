#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "potlib/errors.hpp"
#include "potlib/quadrature.hpp"

using namespace potlib;

namespace {

struct Named {
  std::string name;
  Integrand f;
  double a;
};

/// Regression corpus of 20 named integrands on [a, inf).
std::vector<Named> corpus() {
  return {
      {"t^-1.5", [](double t) { return std::pow(t, -1.5); }, 1.0},
      {"t^-2", [](double t) { return 1.0 / (t * t); }, 1.0},
      {"t^-3", [](double t) { return std::pow(t, -3.0); }, 1.0},
      {"t^-4", [](double t) { return std::pow(t, -4.0); }, 1.0},
      {"e^-t", [](double t) { return std::exp(-t); }, 0.0},
      {"t e^-t", [](double t) { return t * std::exp(-t); }, 0.0},
      {"t^2 e^-t", [](double t) { return t * t * std::exp(-t); }, 0.0},
      {"1/(1+t^2)", [](double t) { return 1.0 / (1.0 + t * t); }, 0.0},
      {"e^-t^2", [](double t) { return std::exp(-t * t); }, 0.0},
      {"sinh^-2", [](double t) { return std::pow(std::sinh(t), -2.0); }, 1.0},
      {"t^-1", [](double t) { return 1.0 / t; }, 1.0},
      {"t^-0.5", [](double t) { return 1.0 / std::sqrt(t); }, 1.0},
      {"1", [](double) { return 1.0; }, 0.0},
      {"t", [](double t) { return t; }, 0.0},
      {"log(1+t)", [](double t) { return std::log1p(t); }, 0.0},
      {"1/(1+t)", [](double t) { return 1.0 / (1.0 + t); }, 0.0},
      {"e^t", [](double t) { return std::exp(std::min(t, 700.0)); }, 0.0},
      {"t^-2 (2+1/t)", [](double t) { return (2.0 + 1.0 / t) / (t * t); }, 1.0},
      {"e^-sqrt t", [](double t) { return std::exp(-std::sqrt(t)); }, 0.0},
      {"1/(t log^2 t)", [](double t) { return 1.0 / (t * std::log(t) * std::log(t)); }, 2.0},
  };
}

}  // namespace

TEST_SUITE("quadrature") {
  TEST_CASE("improper integral examples") {
    auto v = improper_integral([](double t) { return 1.0 / (t * t); }, 1.0);
    REQUIRE(v.converges());
    CHECK(v.value == doctest::Approx(1.0).epsilon(1e-9));

    CHECK(improper_integral([](double t) { return 1.0 / t; }, 1.0).diverges());

    v = improper_integral([](double t) { return t * std::exp(-t); }, 0.0);
    REQUIRE(v.converges());
    CHECK(v.value == doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("finite integral examples") {
    CHECK(integral([](double t) { return t; }, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(integral([](double t) { return 1.0 / std::sqrt(t); }, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-9));
    const double sinh2 = integral([](double t) { return std::sinh(t) * std::sinh(t); }, 0.0, 2.0);
    CHECK(sinh2 == doctest::Approx((std::sinh(4.0) - 4.0) / 4.0).epsilon(1e-12));
    CHECK(sinh2 == doctest::Approx(5.82248).epsilon(1e-5));
  }

  TEST_CASE("empty and reversed ranges") {
    CHECK(integral([](double t) { return t; }, 1.0, 1.0) == 0.0);
    CHECK_THROWS_AS(integral([](double t) { return t; }, 1.0, 0.0), DomainError);
  }

  TEST_CASE("non-integrable interior singularity fails loudly") {
    CHECK_THROWS_AS(integral([](double t) { return 1.0 / ((t - 0.5) * (t - 0.5)); }, 0.0, 1.0), QuadratureError);
  }

  TEST_CASE("config validation") {
    QuadratureConfig cfg;
    cfg.rel_tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.r_start = cfg.r_max;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    CHECK_NOTHROW(cfg.validate());
  }

  TEST_CASE("additivity over random splits") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> split(0.0, 10.0);
    const Integrand f = [](double t) { return std::exp(-0.3 * t) * (1.5 + std::cos(3.0 * t)); };
    const QuadratureConfig cfg;
    const double whole = integral(f, 0.0, 10.0, cfg);
    for (int i = 0; i < 100; ++i) {
      const double b = split(rng);
      const double parts = integral(f, 0.0, b, cfg) + integral(f, b, 10.0, cfg);
      CHECK(std::abs(parts - whole) <= 2.0 * cfg.rel_tol * std::abs(whole));
    }
  }

  TEST_CASE("partials are monotone and converged tails are small") {
    for (const auto& item : corpus()) {
      CAPTURE(item.name);
      const IntegralVerdict v = improper_integral(item.f, item.a);
      for (std::size_t i = 1; i < v.partials.size(); ++i) CHECK(v.partials[i].second >= v.partials[i - 1].second);
      if (v.converges()) {
        const QuadratureConfig cfg;
        CHECK(v.tail_estimate <= cfg.rel_tol * std::abs(v.value) + cfg.abs_tol);
      }
    }
  }

  TEST_CASE("known corpus verdicts") {
    const std::vector<std::string> convergent = {"t^-2",   "t^-3",    "t^-4",          "e^-t",
                                                 "t e^-t", "t^2 e^-t", "1/(1+t^2)",    "e^-t^2",
                                                 "sinh^-2", "t^-2 (2+1/t)", "e^-sqrt t"};
    const std::vector<std::string> divergent = {"t^-1", "t^-0.5", "1", "t", "log(1+t)", "1/(1+t)", "e^t"};
    for (const auto& item : corpus()) {
      CAPTURE(item.name);
      const IntegralVerdict v = improper_integral(item.f, item.a);
      if (std::find(convergent.begin(), convergent.end(), item.name) != convergent.end()) CHECK(v.converges());
      if (std::find(divergent.begin(), divergent.end(), item.name) != divergent.end()) CHECK(v.diverges());
    }
  }

  TEST_CASE("verdict stability when the ceiling doubles") {
    QuadratureConfig wide;
    wide.r_max = 2.0 * QuadratureConfig{}.r_max;
    wide.doubling_steps = QuadratureConfig{}.doubling_steps + 1;
    for (const auto& item : corpus()) {
      CAPTURE(item.name);
      const IntegralVerdict base = improper_integral(item.f, item.a);
      const IntegralVerdict more = improper_integral(item.f, item.a, wide);
      if (base.converges()) CHECK_FALSE(more.diverges());
      if (base.diverges()) CHECK_FALSE(more.converges());
    }
  }

  TEST_CASE("monotonicity of verdicts under domination") {
    struct Pair {
      Integrand f;
      Integrand g;
      double a;
    };
    const std::vector<Pair> pairs = {
        {[](double t) { return std::pow(t, -3.0); }, [](double t) { return 1.0 / (t * t); }, 1.0},
        {[](double t) { return std::exp(-t); }, [](double t) { return std::exp(-t) + 1.0 / (1.0 + t * t); }, 0.0},
        {[](double t) { return 1.0 / (t * t * (1.0 + t)); }, [](double t) { return 1.0 / (t * t); }, 1.0},
        {[](double t) { return 0.5 / (1.0 + t * t); }, [](double t) { return 1.0 / (1.0 + t * t); }, 0.0},
        {[](double t) { return std::exp(-t * t); }, [](double t) { return std::exp(-t); }, 1.0},
    };
    for (const auto& p : pairs) {
      for (int i = 0; i <= 1000; ++i) {
        const double t = p.a + 0.01 * i;
        REQUIRE(p.f(t) <= p.g(t));
      }
      REQUIRE(improper_integral(p.g, p.a).converges());
      CHECK_FALSE(improper_integral(p.f, p.a).diverges());
    }
  }

  TEST_CASE("slow algebraic tails stay undecided instead of diverging") {
    // Doubling increments of t^-1.5 shrink like R^-1/2 and never reach rel_tol below r_max.
    const Integrand f = [](double t) { return std::pow(t, -1.5); };
    CHECK(improper_integral(f, 1.0).status == Convergence::Inconclusive);
    CHECK(improper_integral(f, 1.0, {}, TailEnvelope::algebraic(-1.5)).status == Convergence::Inconclusive);
    QuadratureConfig loose;
    loose.rel_tol = 1e-5;
    const auto v = improper_integral(f, 1.0, loose, TailEnvelope::algebraic(-1.5));
    REQUIRE(v.converges());
    CHECK(v.value == doctest::Approx(2.0).epsilon(1e-5));
  }

  TEST_CASE("tail envelopes") {
    CHECK(TailEnvelope::algebraic(-1.0).divergent());
    CHECK_FALSE(TailEnvelope::algebraic(-2.0).divergent());
    CHECK(TailEnvelope::algebraic(-2.0).tail_integral(10.0, 0.01) == doctest::Approx(0.1));
    CHECK_FALSE(TailEnvelope::stretched(0.0, -1.0, 3.0).divergent());
    CHECK(TailEnvelope::stretched(0.0, 1.0, 3.0).divergent());

    // t^2 e^{-t^3} with its envelope: value 1/3.
    const auto v = improper_integral([](double t) { return t * t * std::exp(-t * t * t); }, 0.0, {},
                                     TailEnvelope::stretched(2.0, -1.0, 3.0));
    REQUIRE(v.converges());
    CHECK(v.value == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
  }

  TEST_CASE("envelope-confirmed divergence of a slowly growing integrand") {
    const auto v = improper_integral([](double t) { return 1.0 / (t * std::log(t + 1.0)); }, 1.0, {},
                                     TailEnvelope::algebraic(-1.0));
    CHECK_FALSE(v.converges());
  }

  TEST_CASE("peaked integral resolves a narrow spike") {
    for (double w : {1e-1, 1e-4, 1e-8}) {
      CAPTURE(w);
      const double L = 50.0;
      const double v = peaked_integral([w](double u) { return std::exp(-u / w); }, L, w);
      CHECK(v == doctest::Approx(w * -std::expm1(-L / w)).epsilon(1e-10));
    }
  }
}
