#include <cmath>
#include <cstdlib>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "potlib/brownian.hpp"
#include "potlib/errors.hpp"
#include "potlib/exittime.hpp"
#include "potlib/philox.hpp"

using namespace potlib;

namespace {

McConfig config(long long n, double dt, std::uint64_t seed) {
  McConfig cfg;
  cfg.n_paths = n;
  cfg.dt = dt;
  cfg.seed = seed;
  return cfg;
}

bool within(const McEstimate& e, double target, double k = 3.0) { return std::abs(e.mean - target) < k * e.std_error; }

/// Worker-count tests need the environment override out of the way.
struct NoThreadOverride {
  NoThreadOverride() { unsetenv("POTLIB_THREADS"); }
};

}  // namespace

TEST_SUITE("brownian") {
  TEST_CASE("Philox known-answer vectors") {
    using C = Philox4x32::Counter;
    CHECK(Philox4x32::block({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
  }

  TEST_CASE("path streams") {
    PathStream a(7, 3);
    PathStream b(7, 3);
    PathStream c(7, 4);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
      const auto x = a();
      CHECK(x == b());
      differs = differs || x != c();
    }
    CHECK(differs);

    PathStream s(11, 0);
    constexpr int n = 200000;
    double sum = 0.0;
    double sq = 0.0;
    double u_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double z = s.normal();
      sum += z;
      sq += z * z;
      const double u = s.uniform();
      REQUIRE(u > 0.0);
      REQUIRE(u < 1.0);
      u_sum += u;
    }
    CHECK(std::abs(sum / n) < 5.0 / std::sqrt(n));
    CHECK(std::abs(sq / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(u_sum / n - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
  }

  TEST_CASE("config validation") {
    McConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.n_paths = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.max_time = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.workers = -2;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = config(0, 1e-3, 0);
    CHECK_THROWS_AS(exit_time_slab(2.0, 1.0, cfg), ConfigError);
  }

  TEST_CASE("ball exit times") {
    const McEstimate e3 = exit_time_ball(ModelManifold(3, RadialProfile::power(1.0)), 0.01, 1.0, config(20000, 1e-3, 5));
    CHECK(within(e3, euclidean_ball_exit(3, 1.0, 0.01)));
    CHECK(e3.censored_fraction == 0.0);
    CHECK(e3.reliable());
    CHECK(e3.n_paths == 20000);

    const McEstimate e2 = exit_time_ball(ModelManifold(2, RadialProfile::power(1.0)), 0.01, 1.0, config(20000, 1e-3, 6));
    CHECK(within(e2, euclidean_ball_exit(2, 1.0, 0.01)));

    const McEstimate at_boundary = exit_time_ball(ModelManifold(3, RadialProfile::power(1.0)), 1.0, 1.0, config(100, 1e-3, 7));
    CHECK(at_boundary.mean == 0.0);
    CHECK_THROWS_AS(exit_time_ball(ModelManifold(3, RadialProfile::power(1.0)), 2.0, 1.0, config(100, 1e-3, 7)), DomainError);
  }

  TEST_CASE("ball on a curved model matches the exhaustion value") {
    // Hyperbolic 3-ball of radius 1 from the center: E = integral_0^1 (sinh 2t / 2 - t) / (2 sinh^2 t) dt.
    const ModelManifold hyp(3, RadialProfile::sinh(1.0));
    const double target = integral([](double t) {
      const double s = std::sinh(t);
      return t < 1e-4 ? t / 3.0 : (0.5 * std::sinh(2.0 * t) - t) / (2.0 * s * s);
    }, 0.0, 1.0);
    const McEstimate e = exit_time_ball(hyp, 0.01, 1.0, config(20000, 1e-3, 8));
    CHECK(within(e, target - 0.01 * 0.01 / 6.0));
  }

  TEST_CASE("slab exit times") {
    const McEstimate k2 = exit_time_slab(2.0, 1.0, config(20000, 1e-3, 9));
    CHECK(within(k2, 0.25));
    const McEstimate k4 = exit_time_slab(4.0, 1.0, config(20000, 1e-3, 10));
    CHECK(within(k4, 1.125));
    const McEstimate edge = exit_time_slab(2.0, 0.5 + 1e-4, config(2000, 1e-4, 11));
    CHECK(edge.mean < 1e-3);
    CHECK_THROWS_AS(exit_time_slab(2.0, 0.5, config(10, 1e-3, 0)), DomainError);
    CHECK_THROWS_AS(exit_time_slab(1.0, 1.0, config(10, 1e-3, 0)), DomainError);
  }

  TEST_CASE("agreement for at least 9 of 10 seeds") {
    int slab_hits = 0;
    int ball_hits = 0;
    const ModelManifold euclid3(3, RadialProfile::power(1.0));
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
      slab_hits += within(exit_time_slab(2.0, 1.0, config(100000, 1e-3, seed)), 0.25);
      ball_hits += within(exit_time_ball(euclid3, 0.01, 1.0, config(20000, 1e-3, seed)), euclidean_ball_exit(3, 1.0, 0.01));
    }
    CHECK(slab_hits >= 9);
    CHECK(ball_hits >= 9);
  }

  TEST_CASE("halving the step stays within one standard error") {
    const RefinementGap g = ball_refinement_gap(ModelManifold(3, RadialProfile::power(1.0)), 0.01, 1.0, config(20000, 1e-3, 12));
    CHECK(std::abs(g.gap) < g.coarse.std_error);
    CHECK(g.gap == doctest::Approx(g.fine.mean - g.coarse.mean));
    CHECK(g.gap_std_error > 0.0);
  }

  TEST_CASE("determinism and worker independence") {
    const NoThreadOverride guard;
    const ModelManifold hyp(3, RadialProfile::sinh(1.0));
    McConfig cfg = config(5000, 1e-3, 13);
    cfg.workers = 1;
    const McEstimate one = exit_time_ball(hyp, 0.5, 1.0, cfg);
    const McEstimate again = exit_time_ball(hyp, 0.5, 1.0, cfg);
    cfg.workers = 4;
    const McEstimate four = exit_time_ball(hyp, 0.5, 1.0, cfg);
    cfg.workers = 7;
    const McEstimate seven = exit_time_ball(hyp, 0.5, 1.0, cfg);
    CHECK(one.mean == again.mean);
    CHECK(one.std_error == again.std_error);
    CHECK(one.mean == four.mean);
    CHECK(one.mean == seven.mean);
    CHECK(one.std_error == seven.std_error);

    cfg.seed = 14;
    CHECK(exit_time_ball(hyp, 0.5, 1.0, cfg).mean != one.mean);
  }

  TEST_CASE("thread override from the environment") {
    setenv("POTLIB_THREADS", "3", 1);
    McConfig cfg;
    cfg.workers = 8;
    CHECK(cfg.resolved_workers() == 3);
    unsetenv("POTLIB_THREADS");
    CHECK(cfg.resolved_workers() == 8);
    cfg.workers = 0;
    CHECK(cfg.resolved_workers() >= 1);
  }

  TEST_CASE("explosion probe") {
    const McConfig cfg = config(20000, 1e-2, 15);
    const McProbability flat = explosion_probe(ModelManifold(2, RadialProfile::power(1.0)), 2.0, 10.0, cfg);
    CHECK(flat.hits == 0);
    CHECK(flat.probability == 0.0);
    const McProbability hyp = explosion_probe(ModelManifold(3, RadialProfile::sinh(1.0)), 2.0, 10.0, cfg);
    CHECK(hyp.hits == 0);
    const McProbability fast = explosion_probe(ModelManifold(3, RadialProfile::exponential(1.0, 3.0)), 2.0, 10.0, cfg);
    CHECK(fast.probability > 0.5);
    CHECK(fast.n_paths == 20000);
    CHECK_THROWS_AS(explosion_probe(ModelManifold(3, RadialProfile::sinh(1.0)), 0.0, 10.0, cfg), DomainError);
  }

  TEST_CASE("censoring") {
    McConfig cfg = config(1000, 1e-3, 16);
    cfg.max_time = 0.01;
    const McEstimate e = exit_time_slab(4.0, 1.0, cfg);
    CHECK(e.censored_fraction > 0.9);
    CHECK(e.n_censored == static_cast<long long>(std::llround(e.censored_fraction * 1000)));
    CHECK_FALSE(e.reliable());
  }

  TEST_CASE("samples and histogram") {
    McConfig cfg = config(3000, 1e-3, 17);
    cfg.keep_samples = true;
    const McEstimate e = exit_time_slab(2.0, 1.0, cfg);
    REQUIRE(e.samples.size() == 3000);
    const double mean = std::accumulate(e.samples.begin(), e.samples.end(), 0.0) / 3000.0;
    CHECK(mean == doctest::Approx(e.mean).epsilon(1e-12));
    const auto h = histogram(e.samples, 20);
    REQUIRE(h.size() == 20);
    long long total = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      total += h[i].second;
      if (i > 0) CHECK(h[i].first > h[i - 1].first);
    }
    CHECK(total == 3000);
    CHECK_THROWS_AS(histogram(e.samples, 0), DomainError);
    CHECK(histogram({}, 5).empty());
  }
}
