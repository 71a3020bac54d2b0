#include "sblab/numerics.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace sblab::num {

std::vector<double> logspace(double lo, double hi, int points_per_decade) {
    if (!(lo > 0.0) || !(hi > lo) || points_per_decade < 1)
        throw std::invalid_argument("logspace: bad range");
    double decades = std::log10(hi / lo);
    int n = static_cast<int>(std::ceil(decades * points_per_decade));
    std::vector<double> out(n + 1);
    for (int i = 0; i <= n; ++i)
        out[i] = lo * std::pow(10.0, decades * i / n);
    out.back() = hi;
    return out;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
    boost::math::quadrature::tanh_sinh<double> quad;
    return quad.integrate(f, a, b, rel_tol);
}

double integrate_to_inf(const std::function<double(double)>& f, double a,
                        double rel_tol) {
    boost::math::quadrature::exp_sinh<double> quad;
    return quad.integrate([&](double u) { return f(a + u); }, rel_tol);
}

double integrate_from_zero(const std::function<double(double)>& f, double b,
                           double rel_tol) {
    using boost::math::quadrature::gauss_kronrod;
    double total = 0.0;
    double hi = b;
    for (int k = 0; k < 150; ++k) {
        double lo = hi / 10.0;
        double part = gauss_kronrod<double, 15>::integrate(f, lo, hi, 8,
                                                           rel_tol * 0.1);
        total += part;
        hi = lo;
        if (k > 2 && std::abs(part) < rel_tol * 1e-3 * std::abs(total)) break;
    }
    return total;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("loglog_slope: need matched samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
        double lx = std::log(x[i]);
        double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double denom = n * sxx - sx * sx;
    return (n * sxy - sx * sy) / denom;
}

double chi2_sf(double stat, double dof) {
    if (stat <= 0.0) return 1.0;
    return boost::math::gamma_q(dof / 2.0, stat / 2.0);
}

double unit_ball_volume(int n) {
    return std::pow(3.14159265358979323846, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

double unit_sphere_area(int n) {
    return n * unit_ball_volume(n);
}

std::uint64_t chunk_count(std::uint64_t n) { return (n + kChunk - 1) / kChunk; }

void parallel_chunks(std::uint64_t n, int workers,
                     const std::function<void(std::uint64_t, std::uint64_t,
                                              std::uint64_t)>& fn) {
    if (n == 0) return;
    std::uint64_t chunks = chunk_count(n);
    if (workers < 1) workers = 1;
    if (static_cast<std::uint64_t>(workers) > chunks)
        workers = static_cast<int>(chunks);
    if (workers == 1) {
        for (std::uint64_t c = 0; c < chunks; ++c)
            fn(c, c * kChunk, std::min(n, (c + 1) * kChunk));
        return;
    }
    std::atomic<std::uint64_t> next{0};
    auto body = [&] {
        for (;;) {
            std::uint64_t c = next.fetch_add(1);
            if (c >= chunks) break;
            fn(c, c * kChunk, std::min(n, (c + 1) * kChunk));
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
}

MeanResult combine_mean(const std::vector<ChunkSums>& parts) {
    double sum = 0.0, sum_sq = 0.0;
    std::uint64_t count = 0;
    for (const auto& p : parts) {
        sum += p.sum;
        sum_sq += p.sum_sq;
        count += p.count;
    }
    MeanResult r;
    r.count = count;
    if (count == 0) return r;
    r.mean = sum / static_cast<double>(count);
    if (count > 1) {
        double var =
            (sum_sq - sum * sum / static_cast<double>(count)) /
            (static_cast<double>(count) - 1.0);
        if (var < 0.0) var = 0.0;
        r.se = std::sqrt(var / static_cast<double>(count));
    }
    return r;
}

} // namespace sblab::num

namespace sblab::qmc {

double radical_inverse(std::uint64_t index, std::uint32_t base) {
    double inv_base = 1.0 / base;
    double factor = inv_base;
    double value = 0.0;
    while (index > 0) {
        value += static_cast<double>(index % base) * factor;
        index /= base;
        factor *= inv_base;
    }
    return value;
}

static const std::uint32_t kBases[8] = {2, 3, 5, 7, 11, 13, 17, 19};

void halton(std::uint64_t index, int dim, double* out) {
    for (int k = 0; k < dim; ++k)
        out[k] = radical_inverse(index + 1, kBases[k]);
}

void halton_at(std::uint64_t index, int dim_offset, int dim, double* out) {
    for (int k = 0; k < dim; ++k)
        out[k] = radical_inverse(index + 1, kBases[dim_offset + k]);
}

static void ball_map(const double* u, int n, double radius, double* out) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    if (n == 1) {
        out[0] = radius * (2.0 * u[0] - 1.0);
    } else if (n == 2) {
        double r = radius * std::sqrt(u[0]);
        double a = two_pi * u[1];
        out[0] = r * std::cos(a);
        out[1] = r * std::sin(a);
    } else if (n == 3) {
        double r = radius * std::cbrt(u[0]);
        double c = 2.0 * u[1] - 1.0;
        double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        double a = two_pi * u[2];
        out[0] = r * s * std::cos(a);
        out[1] = r * s * std::sin(a);
        out[2] = r * c;
    } else {
        throw std::invalid_argument("ball_point: dimension must be 1..3");
    }
}

void ball_point(std::uint64_t index, int n, double radius, double* out) {
    double u[3];
    halton(index, n, u);
    ball_map(u, n, radius, out);
}

void ball_point_at(std::uint64_t index, int dim_offset, int n, double radius,
                   double* out) {
    double u[3];
    halton_at(index, dim_offset, n, u);
    ball_map(u, n, radius, out);
}

} // namespace sblab::qmc
