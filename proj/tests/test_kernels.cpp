#include "doctest.h"

#include "sblab/bernstein.hpp"
#include "sblab/geometry.hpp"
#include "sblab/kernels.hpp"
#include "sblab/numerics.hpp"

#include <cmath>
#include <stdexcept>

using namespace sblab;
using namespace sblab::kernels;
using bernstein::BernsteinFunction;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("stable jump constant and density") {
    // A(2,1) = 1/(2*pi)
    CHECK(stable_jump_constant(2, 1.0) ==
          doctest::Approx(0.15915494309189535).epsilon(1e-14));
    CHECK(stable_jump_density(2, 1.0, 1.0) ==
          doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-14));
    // scaling r^{-d-alpha}: r=2 divides by 2^3
    CHECK(stable_jump_density(2, 1.0, 2.0) ==
          doctest::Approx(1.0 / (2.0 * kPi) / 8.0).epsilon(1e-14));
}

TEST_CASE("subordination quadrature reproduces the stable closed form") {
    for (double alpha : {0.5, 1.0, 1.5}) {
        for (int d : {2, 3}) {
            auto f = BernsteinFunction::make("stable", alpha);
            KernelSuite suite(f, d, 100.0);
            for (double r : {0.1, 1.0, 10.0}) {
                double q = suite.jump_density_quadrature(r);
                double ex = stable_jump_density(d, alpha, r);
                CHECK(q == doctest::Approx(ex).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("stable-sum jump density is the sum of the two stable densities") {
    auto f = BernsteinFunction::make("stable-sum", 1.0, 0.5);
    KernelSuite suite(f, 2, 100.0);
    for (double r : {0.2, 1.0, 3.0}) {
        double q = suite.jump_density(r);
        double ex = stable_jump_density(2, 1.0, r) +
                    stable_jump_density(2, 0.5, r);
        CHECK(q == doctest::Approx(ex).epsilon(1e-6));
    }
}

TEST_CASE("stable Green constants and scaling") {
    // C(3,1) = 1/(2*pi^2), C(2,1) = 1/(2*pi)
    CHECK(stable_green_constant(3, 1.0) ==
          doctest::Approx(1.0 / (2.0 * kPi * kPi)).epsilon(1e-14));
    CHECK(stable_green_constant(2, 1.0) ==
          doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-14));
    CHECK(green_exact_stable(3, 1.0, 2.0) ==
          doctest::Approx(1.0 / (2.0 * kPi * kPi) / 4.0).epsilon(1e-13));
    CHECK_THROWS_AS(stable_green_constant(2, 2.0), std::domain_error);
}

TEST_CASE("Green quadrature agrees with the closed form") {
    for (double alpha : {0.5, 1.0, 1.5}) {
        auto f = BernsteinFunction::make("stable", alpha);
        KernelSuite suite(f, 3, 100.0);
        for (double r : {0.5, 1.0, 2.0}) {
            double q = suite.green_quadrature_stable(r);
            double ex = green_exact_stable(3, alpha, r);
            CHECK(q == doctest::Approx(ex).epsilon(1e-6));
        }
    }
    auto f2 = BernsteinFunction::make("stable", 1.0);
    KernelSuite s2(f2, 2, 100.0);
    CHECK(s2.green_quadrature_stable(1.0) ==
          doctest::Approx(green_exact_stable(2, 1.0, 1.0)).epsilon(1e-6));
}

TEST_CASE("surrogates hit their stable closed forms") {
    auto f = BernsteinFunction::make("stable", 1.0);
    KernelSuite suite(f, 3, 2.0);
    // jtilde = phi'(r^-2) / r^{d+2} = (alpha/2) r^{-d-alpha}
    CHECK(suite.jump_surrogate(0.5) ==
          doctest::Approx(0.5 * std::pow(0.5, -4.0)).epsilon(1e-13));
    // gtilde(d=3, alpha=1) = r^{-2}/2
    for (double r : {0.25, 0.5, 1.0, 2.0}) {
        CHECK(suite.green_surrogate(r) ==
              doctest::Approx(0.5 / (r * r)).epsilon(1e-13));
    }
    CHECK_NOTHROW(suite.jump_surrogate(2.0));
    CHECK_THROWS_AS(suite.jump_surrogate(2.02), std::domain_error);
    CHECK_THROWS_AS(suite.green_surrogate(0.0), std::domain_error);
}

TEST_CASE("exact-to-surrogate ratios are the predicted constants") {
    auto grid = num::logspace(1e-3, 2.0, 40);
    for (double alpha : {0.5, 1.0, 1.5}) {
        for (int d : {2, 3}) {
            auto f = BernsteinFunction::make("stable", alpha);
            KernelSuite suite(f, d, 2.0);
            double cj = 2.0 * stable_jump_constant(d, alpha) / alpha;
            auto cmp = verify_comparability(
                [&](double r) { return suite.jump_density(r); },
                [&](double r) { return suite.jump_surrogate(r); }, grid);
            CHECK(cmp.ok);
            CHECK(cmp.c_low == doctest::Approx(cj).epsilon(1e-10));
            CHECK(cmp.c_high == doctest::Approx(cj).epsilon(1e-10));
            if (d > alpha) {
                double cg = 2.0 * stable_green_constant(d, alpha) / alpha;
                auto cmpg = verify_comparability(
                    [&](double r) { return green_exact_stable(d, alpha, r); },
                    [&](double r) { return suite.green_surrogate(r); }, grid);
                CHECK(cmpg.ok);
                CHECK(cmpg.c_low == doctest::Approx(cg).epsilon(1e-10));
                CHECK(cmpg.c_high == doctest::Approx(cg).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("comparability of identical evaluators is the unit constant") {
    auto grid = num::logspace(0.01, 1.0, 20);
    auto one = [](double r) { return std::exp(-r); };
    auto cmp = verify_comparability(one, one, grid);
    CHECK(cmp.ok);
    CHECK(cmp.c_low == doctest::Approx(1.0));
    CHECK(cmp.c_high == doctest::Approx(1.0));
    CHECK(cmp.c == doctest::Approx(1.0));
}

TEST_CASE("surrogate Green decay certificate") {
    auto grid = num::logspace(1e-3, 2.0, 60);
    for (double alpha : {0.5, 1.0, 1.5}) {
        auto f = BernsteinFunction::make("stable", alpha);
        auto fit = check_gdec(f, 3, grid);
        CHECK(fit.ok);
        CHECK(fit.c == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (const char* fam : {"geometric", "relativistic"}) {
        auto f = fam == std::string("relativistic")
                     ? BernsteinFunction::make(fam, 1.0, 0.0, 1.0)
                     : BernsteinFunction::make(fam, 1.0);
        auto fit = check_gdec(f, 2, grid);
        CHECK(fit.ok);
        CHECK(fit.c < 10.0);
        CHECK(fit.c >= 1.0);
    }
}

TEST_CASE("Poisson envelope is radial from the ball center") {
    auto f = BernsteinFunction::make("stable", 1.0);
    KernelSuite suite(f, 2, 2.0);
    geometry::Domain U = geometry::Domain::ball({0, 0, 0}, 1.0, 2);
    PoissonEnvelope env(suite, U);
    CHECK_FALSE(env.surrogate_mode());
    geometry::Point x = {0, 0, 0};
    double v0 = env.eval(x, {1.5, 0, 0});
    for (double th : {0.3, 1.1, 2.7}) {
        geometry::Point z = {1.5 * std::cos(th), 1.5 * std::sin(th), 0};
        CHECK(env.eval(x, z) == doctest::Approx(v0).epsilon(1e-12));
    }
}

TEST_CASE("Poisson envelope blows up toward the boundary") {
    auto f = BernsteinFunction::make("stable", 1.0);
    KernelSuite suite(f, 2, 2.0);
    geometry::Domain U = geometry::Domain::ball({0, 0, 0}, 1.0, 2);
    PoissonEnvelope env(suite, U);
    geometry::Point x = {0, 0, 0};
    double prev = 0.0;
    for (double eps : {0.5, 0.2, 0.05, 0.01}) {
        double v = env.eval(x, {1.0 + eps, 0, 0});
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("Poisson envelope argument domain") {
    auto f = BernsteinFunction::make("geometric", 1.0);
    KernelSuite suite(f, 2, 2.0);
    CHECK_FALSE(suite.has_exact_jump());
    CHECK_THROWS_AS(suite.jump_density(1.0), surrogate_only);
    geometry::Domain U = geometry::Domain::ball({0, 0, 0}, 1.0, 2);
    PoissonEnvelope env(suite, U);
    CHECK(env.surrogate_mode());
    CHECK(env.eval({0, 0, 0}, {1.2, 0, 0}) > 0.0);
    CHECK_THROWS_AS(env.eval({1.5, 0, 0}, {1.2, 0, 0}), std::domain_error);
    CHECK_THROWS_AS(env.eval({0, 0, 0}, {0.5, 0, 0}), std::domain_error);
    CHECK_THROWS_AS(env.eval({0, 0, 0}, {3.5, 0, 0}), std::domain_error);
}
