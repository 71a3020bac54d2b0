#include "doctest.h"

#include "sblab/bernstein.hpp"
#include "sblab/numerics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace sblab;
using bernstein::BernsteinFunction;
using bernstein::Verdict;

namespace {

std::vector<BernsteinFunction> default_families() {
    using B = BernsteinFunction;
    return {B::make("stable", 1.0),
            B::make("power-sum", 0.5, 0.5),
            B::make("relativistic", 1.0, 0.0, 1.0),
            B::make("stable-sum", 1.0, 0.5),
            B::make("stable-log", 1.0, 0.25),
            B::make("geometric", 1.0),
            B::make("relativistic-geometric", 1.0, 0.0, 1.0)};
}

} // namespace

TEST_CASE("family values at hand-checked points") {
    auto stable = BernsteinFunction::make("stable", 1.0);
    CHECK(stable.phi(4.0) == doctest::Approx(2.0).epsilon(1e-14));

    auto ps = BernsteinFunction::make("power-sum", 0.5, 0.5);
    CHECK(ps.phi(4.0) == doctest::Approx(std::sqrt(6.0)).epsilon(1e-14));

    auto rel = BernsteinFunction::make("relativistic", 1.0, 0.0, 2.0);
    CHECK(rel.phi(5.0) == doctest::Approx(1.0).epsilon(1e-14));

    auto ss = BernsteinFunction::make("stable-sum", 1.0, 0.5);
    CHECK(ss.phi(16.0) == doctest::Approx(6.0).epsilon(1e-14));

    auto sl = BernsteinFunction::make("stable-log", 1.0, 0.25);
    CHECK(sl.phi(1.0) ==
          doctest::Approx(std::pow(std::log(2.0), 0.25)).epsilon(1e-14));

    auto geo = BernsteinFunction::make("geometric", 1.0);
    CHECK(geo.phi(1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(geo.phi_prime(1.0) == doctest::Approx(0.25).epsilon(1e-14));

    auto rg = BernsteinFunction::make("relativistic-geometric", 1.0, 0.0, 2.0);
    CHECK(rg.phi(5.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("parameter domains are enforced") {
    CHECK_THROWS_AS(BernsteinFunction::make("stable", 2.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(BernsteinFunction::make("stable", 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(BernsteinFunction::make("power-sum", 1.0, 0.5),
                    std::invalid_argument);
    CHECK_THROWS_AS(BernsteinFunction::make("relativistic", 1.0, 0.0, 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(BernsteinFunction::make("stable-sum", 1.0, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(BernsteinFunction::make("stable-log", 1.0, 0.6),
                    std::invalid_argument);
    CHECK_THROWS_AS(BernsteinFunction::make("nope", 1.0),
                    std::invalid_argument);
    CHECK(BernsteinFunction::family_names().size() == 7);
}

TEST_CASE("closed-form derivatives agree with finite differences") {
    for (const auto& f : default_families()) {
        for (double l : num::logspace(1e-3, 1e3, 2)) {
            double fd = f.phi_prime_fd(l);
            CHECK_MESSAGE(f.phi_prime(l) ==
                              doctest::Approx(fd).epsilon(1e-7),
                          f.label(), " lambda=", l);
            double h = l * 1e-6;
            double fd2 = (f.phi_prime(l + h) - f.phi_prime(l - h)) / (2.0 * h);
            CHECK_MESSAGE(f.phi_second(l) ==
                              doctest::Approx(fd2).epsilon(5e-6),
                          f.label(), " lambda=", l);
        }
    }
}

TEST_CASE("levy density is registered only where exact") {
    auto stable = BernsteinFunction::make("stable", 1.0);
    CHECK(stable.has_chi());
    // chi(t) = (a / Gamma(1-a)) t^(-1-a), a = 1/2
    CHECK(stable.chi(1.0) ==
          doctest::Approx(0.5 / std::tgamma(0.5)).epsilon(1e-14));

    auto ss = BernsteinFunction::make("stable-sum", 1.0, 0.5);
    CHECK(ss.has_chi());
    auto degenerate = BernsteinFunction::make("stable-sum", 1.0, 0.0);
    CHECK_FALSE(degenerate.has_chi());
    CHECK_FALSE(BernsteinFunction::make("geometric", 1.0).has_chi());
    CHECK_THROWS_AS(BernsteinFunction::make("geometric", 1.0).chi(1.0),
                    std::logic_error);
}

TEST_CASE("levy density reproduces the laplace exponent") {
    auto check = [](const BernsteinFunction& f, double lambda) {
        auto integrand = [&](double t) {
            return -std::expm1(-lambda * t) * f.chi(t);
        };
        double v = num::integrate_from_zero(integrand, 1.0, 1e-10) +
                   num::integrate_to_inf(integrand, 1.0, 1e-10);
        CHECK_MESSAGE(v == doctest::Approx(f.phi(lambda)).epsilon(1e-8),
                      f.label(), " lambda=", lambda);
    };
    check(BernsteinFunction::make("stable", 1.0), 2.0);
    check(BernsteinFunction::make("stable", 1.5), 0.7);
    check(BernsteinFunction::make("stable-sum", 1.0, 0.5), 2.0);
}

TEST_CASE("global inequalities hold across the packaged families") {
    for (const auto& f : default_families()) {
        auto g = bernstein::verify_global_inequalities(f);
        CHECK_MESSAGE(g.ok, f.label());
        CHECK(g.berall_slack <= 1e-11);
        CHECK(g.berall1_slack <= 1e-11);
        CHECK(g.monotone_slack <= 1e-11);
        CHECK(g.sign_slack <= 1e-11);
    }
    auto brown = bernstein::verify_global_inequalities(
        BernsteinFunction::make("stable", 2.0));
    CHECK(brown.ok);
}

TEST_CASE("A-3 scan recovers the stable decay exactly") {
    for (double alpha : {0.5, 1.0, 1.5}) {
        auto fit = bernstein::fit_A3(BernsteinFunction::make("stable", alpha),
                                     1.0);
        CHECK(fit.verdict == Verdict::Holds);
        CHECK_MESSAGE(fit.delta ==
                          doctest::Approx(1.0 - alpha / 2.0).epsilon(1e-12),
                      "alpha=", alpha);
        CHECK(fit.sigma == doctest::Approx(1.001).epsilon(1e-6));
    }
}

TEST_CASE("A-3 fails in the Brownian limit") {
    auto fit = bernstein::fit_A3(BernsteinFunction::make("stable", 2.0), 1.0);
    CHECK(fit.verdict == Verdict::Fails);
}

TEST_CASE("A-3 relativistic matches the stable tail with a mass constant") {
    auto fit = bernstein::fit_A3(
        BernsteinFunction::make("relativistic", 1.0, 0.0, 1.0), 1.0);
    CHECK(fit.verdict == Verdict::Holds);
    CHECK(fit.delta == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.sigma == doctest::Approx(1.001 * std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("A-3 geometric reaches first-order decay deep in the tail") {
    auto deep = bernstein::fit_A3(BernsteinFunction::make("geometric", 1.0),
                                  1e4);
    CHECK(deep.verdict == Verdict::Holds);
    CHECK(deep.delta == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(deep.sigma < 3.0);

    auto near = bernstein::fit_A3(BernsteinFunction::make("geometric", 1.0),
                                  1.0);
    CHECK(near.verdict == Verdict::Holds);
    CHECK(near.delta >= 0.95);
    CHECK(near.delta <= 1.0);
}

TEST_CASE("lower scaling bounds for the stable family") {
    auto f = BernsteinFunction::make("stable", 1.0);
    bernstein::ScanGrid grid;
    auto a4 = bernstein::fit_lower_scaling(f, 1.0, grid,
                                           bernstein::LowerKind::A4, 0.5);
    CHECK(a4.verdict == Verdict::Holds);
    CHECK(a4.exponent == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(a4.sigma == doctest::Approx(1.0 / 1.001).epsilon(1e-6));
    CHECK(a4.side_ok);

    auto a5 = bernstein::fit_lower_scaling(f, 1.0, grid,
                                           bernstein::LowerKind::A5, 0.5);
    CHECK(a5.verdict == Verdict::Holds);
    CHECK(a5.exponent == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(a5.sigma == doctest::Approx(1.0 / 1.001).epsilon(1e-6));
}

TEST_CASE("transience integral verdict matrix") {
    using bernstein::check_A6;
    auto stable1 = BernsteinFunction::make("stable", 1.0);
    auto r2 = check_A6(stable1, 2);
    CHECK(r2.verdict == Verdict::Holds);
    CHECK(r2.fitted_exponent == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(r2.integral == doctest::Approx(2.0).epsilon(1e-6));
    auto r3 = check_A6(stable1, 3);
    CHECK(r3.integral == doctest::Approx(1.0).epsilon(1e-6));

    auto brown = BernsteinFunction::make("stable", 2.0);
    CHECK(check_A6(brown, 2).verdict == Verdict::Fails);
    CHECK(check_A6(brown, 3).verdict == Verdict::Holds);
    CHECK(check_A6(brown, 3).integral == doctest::Approx(2.0).epsilon(1e-6));

    auto rel = BernsteinFunction::make("relativistic", 1.0, 0.0, 1.0);
    CHECK(check_A6(rel, 2).verdict == Verdict::Fails);
    auto rel3 = check_A6(rel, 3);
    CHECK(rel3.verdict == Verdict::Holds);
    // exact: 2 + sqrt(2) + log(1+sqrt(2))
    CHECK(rel3.integral ==
          doctest::Approx(2.0 + std::sqrt(2.0) + std::log(1.0 + std::sqrt(2.0)))
              .epsilon(1e-6));

    auto rg = BernsteinFunction::make("relativistic-geometric", 1.0, 0.0, 1.0);
    CHECK(check_A6(rg, 2).verdict == Verdict::Fails);
    CHECK(check_A6(rg, 3).verdict == Verdict::Holds);

    CHECK(check_A6(BernsteinFunction::make("geometric", 1.0), 2).verdict ==
          Verdict::Holds);
    CHECK(check_A6(BernsteinFunction::make("geometric", 2.0), 2).verdict ==
          Verdict::Fails);
    CHECK(check_A6(BernsteinFunction::make("geometric", 2.0), 3).verdict ==
          Verdict::Holds);
}

TEST_CASE("upper scaling constant for the stable family is unity") {
    auto f = BernsteinFunction::make("stable", 1.0);
    auto h = bernstein::check_Hup(f, 0.05, 1.0, 0.5);
    CHECK(h.verdict == Verdict::Holds);
    CHECK(h.c == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("certification composes the assumption checks") {
    auto f = BernsteinFunction::make("stable", 1.0);
    auto w3 = bernstein::certify(f, 3, 1.0);
    CHECK(w3.global.ok);
    CHECK(w3.a3.verdict == Verdict::Holds);
    CHECK(w3.a3.delta == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(w3.a4.verdict == Verdict::NotRequired);
    CHECK(w3.a5.verdict == Verdict::Holds);
    CHECK(w3.a6.verdict == Verdict::Holds);
    CHECK(w3.hup.verdict == Verdict::Holds);

    auto w2 = bernstein::certify(f, 2, 1.0);
    CHECK(w2.a4.verdict == Verdict::Holds);
    CHECK(w2.a4.exponent == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(w2.a4.side_ok);

    // delta = 0.75 > 1/2, so the A-5 lower bound is never invoked
    auto wide = bernstein::certify(BernsteinFunction::make("stable", 0.5), 2,
                                   1.0);
    CHECK(wide.a3.delta == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(wide.a5.verdict == Verdict::NotRequired);
    CHECK(wide.a4.verdict == Verdict::Holds);

    auto geo = bernstein::certify(BernsteinFunction::make("geometric", 1.0), 3,
                                  1.0);
    CHECK(geo.a3.verdict == Verdict::Holds);
    CHECK(geo.a4.verdict == Verdict::NotRequired);
    CHECK(geo.a5.verdict == Verdict::NotRequired);
    CHECK(geo.a6.verdict == Verdict::Holds);
}
