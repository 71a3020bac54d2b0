#include "doctest.h"

#include "sblab/numerics.hpp"
#include "sblab/rng.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

using namespace sblab;

TEST_CASE("logspace endpoints and spacing") {
    auto g = num::logspace(1.0, 1e3, 2);
    REQUIRE(g.size() == 7);
    CHECK(g.front() == doctest::Approx(1.0));
    CHECK(g.back() == doctest::Approx(1e3));
    for (std::size_t i = 1; i < g.size(); ++i)
        CHECK(g[i] / g[i - 1] == doctest::Approx(std::sqrt(10.0)).epsilon(1e-12));
}

TEST_CASE("quadrature handles endpoint singularities") {
    CHECK(num::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0)
          == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(num::integrate([](double x) { return std::sin(x); }, 0.0,
                         3.14159265358979323846)
          == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(num::integrate_to_inf([](double x) { return std::exp(-x); }, 0.0)
          == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(num::integrate_to_inf([](double x) { return 1.0 / (x * x); }, 1.0)
          == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(num::integrate_from_zero([](double x) { return std::pow(x, -0.9); },
                                   1.0)
          == doctest::Approx(10.0).epsilon(1e-7));
}

TEST_CASE("loglog slope recovers a power law") {
    auto x = num::logspace(0.1, 10.0, 5);
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * std::pow(v, 2.5));
    CHECK(num::loglog_slope(x, y) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("chi-square survival function") {
    CHECK(num::chi2_sf(0.0, 5.0) == doctest::Approx(1.0));
    CHECK(num::chi2_sf(2.0, 2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(num::chi2_sf(10.0, 4.0) < num::chi2_sf(5.0, 4.0));
}

TEST_CASE("ball and sphere measures") {
    const double pi = 3.14159265358979323846;
    CHECK(num::unit_ball_volume(1) == doctest::Approx(2.0));
    CHECK(num::unit_ball_volume(2) == doctest::Approx(pi));
    CHECK(num::unit_ball_volume(3) == doctest::Approx(4.0 * pi / 3.0));
    CHECK(num::unit_sphere_area(1) == doctest::Approx(2.0));
    CHECK(num::unit_sphere_area(2) == doctest::Approx(2.0 * pi));
    CHECK(num::unit_sphere_area(3) == doctest::Approx(4.0 * pi));
}

TEST_CASE("philox known answers") {
    // Reference vectors for philox4x32-10 (counter-based, 10 rounds).
    rng::Philox zero(0, 0);
    CHECK(zero.next_u32() == 0x6627e8d5u);
    CHECK(zero.next_u32() == 0xe169c58du);
    CHECK(zero.next_u32() == 0xbc57ac4cu);
    CHECK(zero.next_u32() == 0x9b00dbd8u);
    CHECK(zero.next_u32() == 0xf8e4cca4u);
    CHECK(zero.next_u32() == 0x5cb200dbu);
    CHECK(zero.next_u32() == 0xb1a574ebu);
    CHECK(zero.next_u32() == 0x097eff67u);

    rng::Philox seeded(0x299f31d0a4093822ull, 0x0370734413198a2eull);
    CHECK(seeded.next_u32() == 0xb60a410eu);
    CHECK(seeded.next_u32() == 0x61bd7780u);
    CHECK(seeded.next_u32() == 0xa53f3958u);
    CHECK(seeded.next_u32() == 0x3d51eb3fu);
}

TEST_CASE("philox streams are reproducible and distinct") {
    rng::Philox a(42, 7), b(42, 7), c(42, 8);
    bool differs = false;
    for (int i = 0; i < 64; ++i) {
        std::uint32_t va = a.next_u32();
        CHECK(va == b.next_u32());
        if (va != c.next_u32()) differs = true;
    }
    CHECK(differs);

    rng::Philox d(42, 7);
    for (int i = 0; i < 1000; ++i) {
        double u = d.uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("philox variates match their moments") {
    rng::Philox r(2024, 0);
    const int n = 200000;
    double sn = 0, sn2 = 0, se_ = 0, sg = 0, sg2 = 0;
    for (int i = 0; i < n; ++i) {
        double z = r.normal();
        sn += z;
        sn2 += z * z;
        se_ += r.exponential();
        double g = r.gamma(3.5);
        sg += g;
        sg2 += g * g;
    }
    CHECK(std::abs(sn / n) < 0.012);
    CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(se_ / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(sg / n == doctest::Approx(3.5).epsilon(0.01));
    CHECK(sg2 / n - (sg / n) * (sg / n) == doctest::Approx(3.5).epsilon(0.05));
}

TEST_CASE("gamma sampler matches its laplace transform") {
    rng::Philox r(99, 3);
    const int n = 200000;
    double s = 0;
    for (int i = 0; i < n; ++i) s += std::exp(-0.7 * r.gamma(2.3));
    double expect = std::pow(1.7, -2.3);
    CHECK(s / n == doctest::Approx(expect).epsilon(0.02));
}

TEST_CASE("poisson sampler matches its mean, including the split path") {
    rng::Philox r(5, 11);
    const int n = 100000;
    double s = 0;
    for (int i = 0; i < n; ++i) s += static_cast<double>(r.poisson(4.2));
    CHECK(s / n == doctest::Approx(4.2).epsilon(0.01));
    double t = 0;
    const int m = 20000;
    for (int i = 0; i < m; ++i) t += static_cast<double>(r.poisson(61.0));
    CHECK(t / m == doctest::Approx(61.0).epsilon(0.01));
}

TEST_CASE("halton low-discrepancy points") {
    double p[5];
    qmc::halton(0, 2, p);
    CHECK(p[0] == doctest::Approx(0.5));
    CHECK(p[1] == doctest::Approx(1.0 / 3.0));
    qmc::halton(1, 2, p);
    CHECK(p[0] == doctest::Approx(0.25));
    CHECK(p[1] == doctest::Approx(2.0 / 3.0));
    qmc::halton(2, 2, p);
    CHECK(p[0] == doctest::Approx(0.75));

    double mean[5] = {0, 0, 0, 0, 0};
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        qmc::halton(i, 5, p);
        for (int k = 0; k < 5; ++k) mean[k] += p[k];
    }
    for (int k = 0; k < 5; ++k)
        CHECK(mean[k] / n == doctest::Approx(0.5).epsilon(2e-3));
}

TEST_CASE("ball_point fills balls uniformly") {
    double p[3];
    for (int d = 1; d <= 3; ++d) {
        double r2 = 0.0;
        const int n = 20000;
        const double radius = 2.0;
        for (int i = 0; i < n; ++i) {
            qmc::ball_point(i, d, radius, p);
            double s = 0;
            for (int k = 0; k < d; ++k) s += p[k] * p[k];
            REQUIRE(s <= radius * radius * (1.0 + 1e-12));
            r2 += s;
        }
        // E|X|^2 = R^2 * d/(d+2) on the d-ball
        double expect = radius * radius * d / (d + 2.0);
        CHECK(r2 / n == doctest::Approx(expect).epsilon(5e-3));
    }
    double q[3];
    qmc::ball_point(137, 3, 2.0, p);
    qmc::ball_point(137, 3, 2.0, q);
    CHECK(p[0] == q[0]);
    CHECK(p[1] == q[1]);
    CHECK(p[2] == q[2]);
}

TEST_CASE("parallel chunks are worker-invariant") {
    const std::uint64_t n = 50000;
    auto run = [&](int workers) {
        std::vector<num::ChunkSums> parts(num::chunk_count(n));
        num::parallel_chunks(n, workers,
                             [&](std::uint64_t c, std::uint64_t b,
                                 std::uint64_t e) {
                                 for (std::uint64_t i = b; i < e; ++i) {
                                     double v = std::sin(static_cast<double>(i));
                                     parts[c].sum += v;
                                     parts[c].sum_sq += v * v;
                                     parts[c].count++;
                                 }
                             });
        return num::combine_mean(parts);
    };
    auto m1 = run(1);
    auto m3 = run(3);
    auto m7 = run(7);
    CHECK(m1.mean == m3.mean);
    CHECK(m1.se == m3.se);
    CHECK(m1.mean == m7.mean);
    CHECK(m1.se == m7.se);
    CHECK(m1.count == n);
}

TEST_CASE("combine_mean matches the direct formula") {
    std::vector<double> xs = {1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
    std::vector<num::ChunkSums> parts(2);
    for (int i = 0; i < 3; ++i) {
        parts[0].sum += xs[i];
        parts[0].sum_sq += xs[i] * xs[i];
        parts[0].count++;
    }
    for (int i = 3; i < 6; ++i) {
        parts[1].sum += xs[i];
        parts[1].sum_sq += xs[i] * xs[i];
        parts[1].count++;
    }
    auto m = num::combine_mean(parts);
    double mean = 63.0 / 6.0;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= 5.0;
    CHECK(m.mean == doctest::Approx(mean).epsilon(1e-15));
    CHECK(m.se == doctest::Approx(std::sqrt(var / 6.0)).epsilon(1e-12));
}
