#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "potlib/errors.hpp"
#include "potlib/geometry.hpp"

using namespace potlib;
using std::numbers::pi;

TEST_SUITE("geometry") {
  TEST_CASE("sphere areas") {
    CHECK(sphere_area(0) == doctest::Approx(2.0));
    CHECK(sphere_area(1) == doctest::Approx(2.0 * pi).epsilon(1e-15));
    CHECK(sphere_area(2) == doctest::Approx(4.0 * pi).epsilon(1e-15));
    CHECK(sphere_area(3) == doctest::Approx(2.0 * pi * pi).epsilon(1e-15));
  }

  TEST_CASE("area examples") {
    CHECK(area(ModelManifold(3, RadialProfile::power(1.0)), 1.0) == doctest::Approx(4.0 * pi).epsilon(1e-15));
    CHECK(area(ModelManifold(2, RadialProfile::power(1.0)), 2.0) == doctest::Approx(4.0 * pi).epsilon(1e-15));
    const double s = std::sinh(1.0);
    CHECK(area(ModelManifold(3, RadialProfile::sinh(1.0)), 1.0) == doctest::Approx(4.0 * pi * s * s).epsilon(1e-14));
    CHECK(area(ModelManifold(3, RadialProfile::sinh(1.0)), 1.0) == doctest::Approx(17.3554).epsilon(1e-5));
  }

  TEST_CASE("area outside the domain") {
    const ModelManifold euclid(3, RadialProfile::power(1.0));
    CHECK_THROWS_AS(area(euclid, 0.0), DomainError);
    CHECK_THROWS_AS(area(euclid, -1.0), DomainError);
    const ModelManifold table(2, RadialProfile::tabulated({0.0, 1.0, 2.0}, {0.0, 1.0, 2.0}));
    CHECK_THROWS_AS(area(table, 3.0), DomainError);
  }

  TEST_CASE("volume examples") {
    CHECK(volume(ModelManifold(3, RadialProfile::power(1.0)), 1.0) == doctest::Approx(4.0 * pi / 3.0).epsilon(1e-12));
    CHECK(volume(ModelManifold(2, RadialProfile::power(1.0)), 1.0) == doctest::Approx(pi).epsilon(1e-12));
    const double v = volume(ModelManifold(3, RadialProfile::sinh(1.0)), 2.0);
    CHECK(v == doctest::Approx(pi * (std::sinh(4.0) - 4.0)).epsilon(1e-10));
    CHECK(v == doctest::Approx(73.1674).epsilon(1e-5));
  }

  TEST_CASE("volume derivative equals area") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> radius(0.2, 4.0);
    const std::vector<ModelManifold> models = {ModelManifold(3, RadialProfile::sinh(1.0)),
                                               ModelManifold(3, RadialProfile::power(2.0)),
                                               ModelManifold(2, RadialProfile::exponential(1.0, 2.0))};
    for (const auto& model : models) {
      for (int i = 0; i < 100; ++i) {
        const double r = radius(rng);
        if (std::abs(r - 1.0) < 0.01) continue;  // stencil would straddle the core join
        const double h = 1e-3 * r;
        const double dv = (8.0 * (volume(model, r + h) - volume(model, r - h)) -
                           (volume(model, r + 2.0 * h) - volume(model, r - 2.0 * h))) /
                          (12.0 * h);
        CHECK(dv == doctest::Approx(area(model, r)).epsilon(1e-6));
      }
    }
  }

  TEST_CASE("volume ratio agrees with volume over area") {
    const ModelManifold hyp(3, RadialProfile::sinh(1.0));
    for (double r : {0.5, 1.0, 3.0}) CHECK(volume_ratio(hyp, r) == doctest::Approx(volume(hyp, r) / area(hyp, r)));
    // Super-exponential growth where volume and area overflow separately.
    const ModelManifold fast(3, RadialProfile::exponential(1.0, 3.0));
    CHECK(std::isinf(area(fast, 10.0)));
    const double ratio = volume_ratio(fast, 10.0);
    CHECK(ratio == doctest::Approx(1.0 / (2.0 * 3.0 * 100.0)).epsilon(1e-2));
  }

  TEST_CASE("radial Laplacian examples") {
    const ModelManifold euclid3(3, RadialProfile::power(1.0));
    const RadialFunction square{[](double r) { return r * r; }, [](double r) { return 2.0 * r; },
                                [](double) { return 2.0; }};
    CHECK(radial_laplacian(euclid3, square, 1.3) == doctest::Approx(6.0).epsilon(1e-14));
    const RadialFunction kernel{[](double r) { return 1.0 / r; }, {}, {}};
    CHECK(std::abs(radial_laplacian(euclid3, kernel, 2.0)) < 1e-5);
    const RadialFunction kernel_exact{[](double r) { return 1.0 / r; }, [](double r) { return -1.0 / (r * r); },
                                      [](double r) { return 2.0 / (r * r * r); }};
    CHECK(std::abs(radial_laplacian(euclid3, kernel_exact, 2.0)) < 1e-15);

    const ModelManifold cubic(2, RadialProfile::exponential(1.0, 3.0));
    const RadialFunction identity{[](double r) { return r; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
    CHECK(radial_laplacian(cubic, identity, 2.0) == doctest::Approx(12.0).epsilon(1e-14));
    const RadialFunction identity_fd{[](double r) { return r; }, {}, {}};
    CHECK(radial_laplacian(cubic, identity_fd, 2.0) == doctest::Approx(12.0).epsilon(1e-6));
  }

  TEST_CASE("radial Laplacian is singular at the pole") {
    const RadialFunction f{[](double r) { return r; }, {}, {}};
    CHECK_THROWS_AS(radial_laplacian(ModelManifold(3, RadialProfile::power(1.0)), f, 0.0), DomainError);
  }

  TEST_CASE("Green primitive is harmonic off the pole") {
    const std::vector<ModelManifold> models = {ModelManifold(3, RadialProfile::sinh(1.0)),
                                               ModelManifold(4, RadialProfile::power(1.0)),
                                               ModelManifold(3, RadialProfile::exponential(0.5, 2.0))};
    const double R = 4.0;
    for (const auto& model : models) {
      const int k = model.dimension() - 1;
      const auto& p = model.profile();
      const RadialFunction g{
          [&](double r) { return integral([&](double t) { return std::pow(p.value(t), -k); }, r, R); },
          [&](double r) { return -std::pow(p.value(r), -k); },
          [&](double r) { return k * std::pow(p.value(r), -k - 1) * p.derivative(r); }};
      for (double r : {0.3, 1.7, 2.5, 3.9}) {
        const double scale = std::abs(g.second_derivative(r));
        CHECK(std::abs(radial_laplacian(model, g, r)) < 1e-12 * scale);
      }
    }
  }

  TEST_CASE("flat profile reproduces the Euclidean radial Laplacian") {
    const RadialFunction quartic{
        [](double r) { return r * r * r * r + 2.0 * r * r * r - r * r + 3.0 * r + 1.0; },
        [](double r) { return 4.0 * r * r * r + 6.0 * r * r - 2.0 * r + 3.0; },
        [](double r) { return 12.0 * r * r + 12.0 * r - 2.0; }};
    for (int m : {2, 3, 5}) {
      const ModelManifold euclid(m, RadialProfile::power(1.0));
      for (double r : {0.1, 0.7, 1.0, 3.0}) {
        const double exact = quartic.second_derivative(r) + (m - 1) * quartic.derivative(r) / r;
        CHECK(radial_laplacian(euclid, quartic, r) == doctest::Approx(exact).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("profile smoothness at the pole") {
    for (const auto& p : {RadialProfile::power(2.0), RadialProfile::power(0.5), RadialProfile::exponential(1.0, 3.0),
                          RadialProfile::exponential(2.0, 1.0, 1.5), RadialProfile::sinh(2.0)}) {
      CHECK(p.value(0.0) == doctest::Approx(0.0));
      CHECK(p.derivative(0.0) == doctest::Approx(1.0).epsilon(1e-8));
      for (double r : {0.01, 0.5, 1.0, 2.0, 10.0}) CHECK(p.value(r) > 0.0);
    }
  }

  TEST_CASE("profile tails") {
    const RadialProfile p = RadialProfile::power(2.0);
    CHECK(p.value(3.0) == doctest::Approx(9.0));
    const RadialProfile e = RadialProfile::exponential(1.0, 3.0);
    CHECK(e.log_value(2.0) == doctest::Approx(8.0));
    CHECK(e.log_derivative(2.0) == doctest::Approx(12.0));
    CHECK(e.tail().kind == TailModel::Kind::Stretched);
    CHECK(RadialProfile::sinh(0.5).value(2.0) == doctest::Approx(std::sinh(1.0) / 0.5));
  }

  TEST_CASE("log increments stay accurate") {
    const RadialProfile e = RadialProfile::exponential(1.0, 3.0);
    CHECK(e.log_increment(100.0, 1e-9) == doctest::Approx(3e4 * 1e-9).epsilon(1e-6));
    const RadialProfile s = RadialProfile::sinh(1.0);
    CHECK(s.log_increment(50.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.log_increment(0.5, 0.25) == doctest::Approx(std::log(std::sinh(0.75) / std::sinh(0.5))).epsilon(1e-12));
  }

  TEST_CASE("tabulated profiles") {
    std::vector<double> r;
    std::vector<double> s;
    for (int i = 0; i <= 400; ++i) {
      r.push_back(0.01 * i);
      s.push_back(std::sinh(0.01 * i));
    }
    const RadialProfile t = RadialProfile::tabulated(r, s);
    CHECK(t.kind() == ProfileKind::Tabulated);
    CHECK(t.domain_max() == doctest::Approx(4.0));
    CHECK(t.derivative(0.0) == doctest::Approx(1.0));
    for (double x : {0.005, 0.333, 1.2345, 3.99}) CHECK(t.value(x) == doctest::Approx(std::sinh(x)).epsilon(1e-6));

    CHECK_THROWS_AS(RadialProfile::tabulated({0.0, 1.0, 1.0}, {0.0, 1.0, 2.0}), DomainError);
    CHECK_THROWS_AS(RadialProfile::tabulated({0.0, 1.0}, {0.5, 1.0}), DomainError);
    CHECK_THROWS_AS(RadialProfile::tabulated({0.0, 1.0, 2.0}, {0.0, -1.0, 2.0}), DomainError);
  }

  TEST_CASE("custom profiles are validated") {
    CHECK_NOTHROW(RadialProfile::custom([](double x) { return std::sin(x) + x * x * x; },
                                        [](double x) { return std::cos(x) + 3 * x * x; }));
    CHECK_THROWS_AS(RadialProfile::custom([](double x) { return 2.0 * x; }, [](double) { return 2.0; }), DomainError);
    CHECK_THROWS_AS(RadialProfile::custom([](double x) { return x + 1.0; }, [](double) { return 1.0; }), DomainError);
  }

  TEST_CASE("manifold and cone invariants") {
    CHECK_THROWS_AS(ModelManifold(1, RadialProfile::power(1.0)), DomainError);
    CHECK_THROWS_AS(WarpedCone(3, -1.0), DomainError);
    CHECK(WarpedCone(3, 2.0).lambda1() == 2.0);
    CHECK_THROWS_AS(RadialProfile::sinh(0.0), DomainError);
  }
}
