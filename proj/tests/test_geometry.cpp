#include "doctest.h"

#include "sblab/geometry.hpp"
#include "sblab/numerics.hpp"
#include "sblab/rng.hpp"

#include <cmath>
#include <stdexcept>

using namespace sblab;
using namespace sblab::geometry;
using bernstein::BernsteinFunction;

TEST_CASE("ball distances are exact") {
    Domain D = Domain::ball({0, 0, 0}, 1.0, 2);
    CHECK(D.contains({0, 0, 0}));
    CHECK(D.dist_to_boundary({0, 0, 0}) == doctest::Approx(1.0));
    CHECK(D.dist_to_boundary({0, 0.4, 0}) == doctest::Approx(0.6));
    CHECK_FALSE(D.contains({0, 1.5, 0}));
    CHECK(D.dist_to_boundary({0, 1.5, 0}) == doctest::Approx(0.5));
    Point p = D.boundary_projection({0, 0.4, 0});
    CHECK(p[1] == doctest::Approx(1.0));
    CHECK(p[0] == doctest::Approx(0.0));
}

TEST_CASE("flat graph is an exact half-space away from the box") {
    Domain D = Domain::graph(GraphProfile::flat(), 2);
    CHECK(D.contains({0.0, 0.3, 0}));
    CHECK(D.dist_to_boundary({0.0, 0.3, 0}) == doctest::Approx(0.3));
    CHECK_FALSE(D.contains({0.0, -0.2, 0}));
    CHECK(D.dist_to_boundary({0.0, -0.2, 0}) == doctest::Approx(0.2));
    // near a box wall the wall margin wins
    CHECK(D.dist_to_boundary({9.95, 5.0, 0}) == doctest::Approx(0.05));
    CHECK_FALSE(D.contains({10.5, 5.0, 0}));
}

TEST_CASE("graph profiles satisfy their declared Lipschitz constants") {
    for (const auto& prof :
         {GraphProfile::cone(0.5), GraphProfile::bump(0.3, 0.8)}) {
        rng::Philox r(7, 1);
        for (int i = 0; i < 2000; ++i) {
            double a[2] = {r.uniform(-2, 2), r.uniform(-2, 2)};
            double b[2] = {r.uniform(-2, 2), r.uniform(-2, 2)};
            double dv = std::abs(prof.value(a, 2) - prof.value(b, 2));
            double dx = std::hypot(a[0] - b[0], a[1] - b[1]);
            CHECK(dv <= prof.lip() * dx * (1.0 + 1e-12));
            double ga[2], gb[2];
            prof.gradient(a, 2, ga);
            prof.gradient(b, 2, gb);
            double dg = std::hypot(ga[0] - gb[0], ga[1] - gb[1]);
            CHECK(dg <= prof.grad_lip() * dx * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("vertical distance sandwich on graph domains") {
    Domain D = Domain::graph(GraphProfile::cone(0.5), 2);
    Point xi = {0, 0, 0};
    rng::Philox r(11, 0);
    for (int i = 0; i < 500; ++i) {
        double xt = r.uniform(-0.3, 0.3);
        double h = r.uniform(1e-4, 0.3);
        Point x = {xt, D.profile().value(&xt, 1) + h, 0};
        if (distance(x, xi, 2) >= D.lip_R()) continue;
        double rho = D.vertical_distance(xi, x);
        double delta = D.dist_to_boundary(x);
        CHECK(rho == doctest::Approx(h).epsilon(1e-12));
        CHECK(delta <= rho * (1.0 + 1e-9));
        CHECK(rho <= (1.0 + D.lip_Lambda()) * delta * (1.0 + 1e-9));
    }
    CHECK_THROWS_AS(D.vertical_distance(xi, {2.0, 0.1, 0}),
                    std::domain_error);
}

TEST_CASE("vertical distance in the ball chart") {
    Domain D = Domain::ball({0, 0, 0}, 1.0, 2);
    Point xi = {0, -1, 0};
    CHECK(D.vertical_distance(xi, {0, -0.8, 0}) == doctest::Approx(0.2));
    // off-axis: rho = h - (1 - sqrt(1 - t^2))
    Point x = {0.1, -0.7, 0};
    double expect = 0.3 - (1.0 - std::sqrt(1.0 - 0.01));
    CHECK(D.vertical_distance(xi, x) == doctest::Approx(expect).epsilon(1e-12));
    double rho = D.vertical_distance(xi, x);
    double delta = D.dist_to_boundary(x);
    CHECK(delta <= rho);
    CHECK(rho <= (1.0 + D.lip_Lambda()) * delta);
}

TEST_CASE("delta is 1-Lipschitz along segments") {
    Domain D = Domain::graph(GraphProfile::bump(0.3, 0.8), 2);
    rng::Philox r(13, 2);
    for (int i = 0; i < 300; ++i) {
        Point x = {r.uniform(-1, 1), r.uniform(-0.5, 1.5), 0};
        Point y = {x[0] + r.uniform(-0.3, 0.3), x[1] + r.uniform(-0.3, 0.3), 0};
        double dd = std::abs(D.dist_to_boundary(x) - D.dist_to_boundary(y));
        CHECK(dd <= distance(x, y, 2) * (1.0 + 1e-9) + 1e-12);
    }
}

TEST_CASE("stable half-space region reduces to the closed power form") {
    Domain D = Domain::graph(GraphProfile::flat(), 2);
    auto f = BernsteinFunction::make("stable", 1.0);
    ApproachRegion reg;
    reg.domain = &D;
    reg.phi = &f;
    reg.xi = {0, 0, 0};
    reg.gamma = 0.3;
    reg.a = 0.5;  // alpha/2 gives the unit-constant reduction
    double expo = 1.0 + reg.gamma / (2.0 - 0.5);
    rng::Philox r(17, 5);
    for (int i = 0; i < 2000; ++i) {
        Point x = {r.uniform(-0.5, 0.5), r.uniform(1e-4, 0.5), 0};
        bool pred = reg.in_region(x, RegionKind::T);
        double rho = distance(x, reg.xi, 2);
        bool closed = std::pow(rho, expo) <= x[1] * (1.0 + 1e-9);
        bool closed_strict = std::pow(rho, expo) <= x[1] * (1.0 - 1e-9);
        // agree except within the 1e-9 band around the boundary
        if (closed_strict) CHECK(pred);
        if (!closed) CHECK_FALSE(pred);
    }
}

TEST_CASE("geometric family region matches the displayed log form") {
    Domain D = Domain::graph(GraphProfile::flat(), 2);
    auto f = BernsteinFunction::make("geometric", 1.0);
    const double alpha = 1.0;
    const int d = 2;
    ApproachRegion reg;
    reg.domain = &D;
    reg.phi = &f;
    reg.xi = {0, 0, 0};
    reg.gamma = 0.4;
    reg.a = 1.0;
    rng::Philox r(19, 3);
    for (int i = 0; i < 2000; ++i) {
        Point x = {r.uniform(-0.5, 0.5), r.uniform(1e-3, 0.5), 0};
        double rho = distance(x, reg.xi, 2);
        double xd = x[1];
        double lhs = std::pow(rho, reg.gamma + d) *
                     std::sqrt(std::log1p(std::pow(rho, -alpha)));
        double rhs = (2.0 / alpha) * (1.0 + std::pow(xd, alpha)) *
                     std::pow(xd, d) *
                     std::pow(std::log1p(std::pow(xd, -alpha)), 1.5);
        bool pred = reg.in_region(x, RegionKind::T);
        if (lhs <= rhs * (1.0 - 1e-9)) CHECK(pred);
        if (lhs > rhs * (1.0 + 1e-9)) CHECK_FALSE(pred);
    }
}

TEST_CASE("region chain holds on sampled points") {
    auto run = [](const Domain& D, const BernsteinFunction& f, Point xi) {
        ApproachRegion reg;
        reg.domain = &D;
        reg.phi = &f;
        reg.xi = xi;
        reg.gamma = 0.5;
        reg.a = 1.0;
        reg.M = 2.0;
        auto rep = containment_check(reg, 10000);
        CHECK(rep.ok());
        CHECK(rep.inside_any > 0);
    };
    Domain ball = Domain::ball({0, 0, 0}, 1.0, 2);
    Domain ball3 = Domain::ball({0, 0, 0}, 1.0, 3);
    Domain graph = Domain::graph(GraphProfile::flat(), 2);
    for (const char* fam : {"stable", "geometric", "relativistic"}) {
        auto f = fam == std::string("relativistic")
                     ? BernsteinFunction::make(fam, 1.0, 0.0, 1.0)
                     : BernsteinFunction::make(fam, 1.0);
        run(ball, f, {1, 0, 0});
        run(ball3, f, {0, 0, -1});
        run(graph, f, {0, 0, 0});
    }
}

TEST_CASE("T strictly exceeds Tprime for the geometric family") {
    Domain D = Domain::graph(GraphProfile::flat(), 2);
    auto f = BernsteinFunction::make("geometric", 1.0);
    ApproachRegion reg;
    reg.domain = &D;
    reg.phi = &f;
    reg.xi = {0, 0, 0};
    reg.gamma = 0.5;
    reg.a = 1.0;
    bool found = false;
    double rho = 0.05;
    for (double delta = rho; delta > 1e-8 && !found; delta *= 0.9) {
        double lat = std::sqrt(std::max(0.0, rho * rho - delta * delta));
        Point x = {lat, delta, 0};
        if (reg.in_region(x, RegionKind::T) &&
            !reg.in_region(x, RegionKind::Tprime))
            found = true;
    }
    CHECK(found);
}

TEST_CASE("r^d phi(r^-2)^(1/2) is nondecreasing") {
    for (const char* fam : {"stable", "geometric", "stable-log"}) {
        auto f = fam == std::string("stable-log")
                     ? BernsteinFunction::make(fam, 1.0, 0.25)
                     : BernsteinFunction::make(fam, 1.0);
        auto grid = num::logspace(1e-4, 10.0, 50);
        for (std::size_t i = 1; i < grid.size(); ++i) {
            double prev = std::pow(grid[i - 1], 2.0) *
                          std::sqrt(f.phi(1.0 / (grid[i - 1] * grid[i - 1])));
            double cur = std::pow(grid[i], 2.0) *
                         std::sqrt(f.phi(1.0 / (grid[i] * grid[i])));
            CHECK(cur >= prev * (1.0 - 1e-12));
        }
    }
}

TEST_CASE("tangential curve follows the exact stable exponent") {
    Domain D = Domain::graph(GraphProfile::flat(), 2);
    auto f = BernsteinFunction::make("stable", 1.0);
    ApproachRegion reg;
    reg.domain = &D;
    reg.phi = &f;
    reg.xi = {0, 0, 0};
    reg.gamma = 0.3;
    reg.a = 0.5;
    std::vector<double> radii;
    for (int k = 3; k <= 10; ++k) radii.push_back(std::pow(2.0, -k));
    auto curve = tangential_curve(reg, radii);
    REQUIRE(curve.size() == radii.size());
    double expo = 1.0 + reg.gamma / (2.0 - 0.5);
    double c0 = curve[0].x[1] / std::pow(radii[0], expo);
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const auto& cp = curve[i];
        CHECK(distance(cp.x, reg.xi, 2) == doctest::Approx(radii[i]).epsilon(1e-12));
        CHECK(reg.in_region(cp.x, RegionKind::T));
        CHECK_FALSE(reg.in_region(cp.companion, RegionKind::T));
        double c = cp.x[1] / std::pow(radii[i], expo);
        CHECK(c == doctest::Approx(c0).epsilon(1e-6));
    }
}

TEST_CASE("normal-ray curve for the Stolz region") {
    Domain D = Domain::ball({0, 0, 0}, 1.0, 2);
    auto f = BernsteinFunction::make("stable", 1.0);
    ApproachRegion reg;
    reg.domain = &D;
    reg.phi = &f;
    reg.xi = {1, 0, 0};
    reg.gamma = 0.5;
    auto curve = tangential_curve(reg, {0.1, 0.05}, RegionKind::Stolz);
    CHECK(curve[0].x[0] == doctest::Approx(0.9));
    CHECK(std::abs(curve[0].x[1]) < 1e-15);
    CHECK(curve[1].x[0] == doctest::Approx(0.95));
    CHECK(curve[0].delta == doctest::Approx(0.1));
}

TEST_CASE("curve points on the ball stay on the sphere and in region") {
    Domain D = Domain::ball({0, 0, 0}, 1.0, 3);
    auto f = BernsteinFunction::make("geometric", 1.0);
    ApproachRegion reg;
    reg.domain = &D;
    reg.phi = &f;
    reg.xi = {0, 0, -1};
    reg.gamma = 0.4;
    auto curve = tangential_curve(reg, {0.05, 0.02, 0.01});
    for (const auto& cp : curve) {
        CHECK(distance(cp.x, reg.xi, 3) == doctest::Approx(cp.r).epsilon(1e-12));
        CHECK(reg.in_region(cp.x, RegionKind::T));
        CHECK_FALSE(reg.in_region(cp.companion, RegionKind::T));
        CHECK(cp.companion_delta < cp.delta);
    }
}

TEST_CASE("localize sandwiches the localized set") {
    Domain D = Domain::ball({0, 0, 0}, 1.0, 2);
    Point xi = {1, 0, 0};
    double r = 0.5;
    Domain U = localize(D, xi, r);
    CHECK_THROWS_AS(localize(D, xi, 1.5), std::invalid_argument);

    rng::Philox rg(23, 9);
    int in_half = 0;
    for (int i = 0; i < 1000; ++i) {
        Point y = {xi[0] + rg.uniform(-r, r), xi[1] + rg.uniform(-r, r), 0};
        bool inU = U.contains(y);
        bool inD = D.contains(y);
        bool in_small = inD && distance(y, xi, 2) < r / 2.0;
        bool in_big = inD && distance(y, xi, 2) < r;
        if (in_small) {
            CHECK(inU);
            in_half++;
        }
        if (inU) CHECK(in_big);
        if (inU) {
            CHECK(U.dist_to_boundary(y) <=
                  D.dist_to_boundary(y) * (1.0 + 1e-9) + 1e-12);
        }
    }
    CHECK(in_half > 50);
}

TEST_CASE("localized distances match the near-face geometry") {
    Domain D = Domain::graph(GraphProfile::flat(), 2);
    Point xi = {0, 0, 0};
    double r = 0.8;
    Domain U = localize(D, xi, r);
    // deep on the normal ray the boundary is the flat face
    Point x = {0, 0.08, 0};
    CHECK(U.contains(x));
    CHECK(U.dist_to_boundary(x) == doctest::Approx(0.08).epsilon(1e-9));
    // exterior point below the face
    Point z = {0.01, -0.05, 0};
    CHECK_FALSE(U.contains(z));
    CHECK(U.dist_to_boundary(z) == doctest::Approx(0.05).epsilon(1e-6));
    // outside the cap sphere
    Point far = {0, 0.7, 0};
    CHECK_FALSE(U.contains(far));
    CHECK(U.dist_to_boundary(far) ==
          doctest::Approx(0.7 - 0.6).epsilon(1e-6));
}
