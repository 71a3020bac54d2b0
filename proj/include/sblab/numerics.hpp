#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace sblab::num {

// Log-spaced grid with a fixed number of points per decade, endpoints included.
std::vector<double> logspace(double lo, double hi, int points_per_decade);

// Adaptive quadrature on a finite interval; integrand may be singular at the
// endpoints (tanh-sinh nodes approach them exponentially).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-9);

// Quadrature on [a, infinity).
double integrate_to_inf(const std::function<double(double)>& f, double a,
                        double rel_tol = 1e-9);

// Integral over (0, b] of an integrand with an integrable power singularity
// at zero. Decade-by-decade quadrature keeps evaluation points away from the
// underflow range, unlike tanh-sinh nodes pushed onto the endpoint.
double integrate_from_zero(const std::function<double(double)>& f, double b,
                           double rel_tol = 1e-9);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Survival function of the chi-square distribution with k degrees of freedom.
double chi2_sf(double stat, double dof);

// Volume of the unit ball in R^n.
double unit_ball_volume(int n);

// Surface area of the unit sphere S^{n-1} in R^n.
double unit_sphere_area(int n);

// Chunked deterministic parallel driver. Indices [0, n) are split into
// fixed-size chunks; fn(chunk_index, begin, end) runs on worker threads but
// must write only to per-chunk storage, so results are independent of the
// worker count. Chunk size is fixed to keep reductions bit-stable.
inline constexpr std::uint64_t kChunk = 4096;

std::uint64_t chunk_count(std::uint64_t n);

void parallel_chunks(std::uint64_t n, int workers,
                     const std::function<void(std::uint64_t, std::uint64_t,
                                              std::uint64_t)>& fn);

// Streaming moments accumulated per chunk and merged in index order.
struct ChunkSums {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::uint64_t count = 0;
};

struct MeanResult {
    double mean = 0.0;
    double se = 0.0;
    std::uint64_t count = 0;
};

// Ordered left-fold over chunks; deterministic for any worker count.
MeanResult combine_mean(const std::vector<ChunkSums>& parts);

} // namespace sblab::num

namespace sblab::qmc {

// Halton sequence point, radical-inverse bases 2,3,5,7,11,13,17,19.
double radical_inverse(std::uint64_t index, std::uint32_t base);

// Point i of the Halton sequence in the unit cube [0,1)^dim (dim <= 8).
void halton(std::uint64_t index, int dim, double* out);

// Same, starting at base index dim_offset; lets one Halton index carry
// several independent coordinate blocks (dim_offset + dim <= 8).
void halton_at(std::uint64_t index, int dim_offset, int dim, double* out);

// Map a Halton index to a uniform point of the ball of given radius centred
// at the origin of R^n (n in {1,2,3}); exact measure-preserving maps, no
// rejection, so index -> point is stable.
void ball_point(std::uint64_t index, int n, double radius, double* out);

// Ball point drawn from the coordinate block starting at dim_offset.
void ball_point_at(std::uint64_t index, int dim_offset, int n, double radius,
                   double* out);

} // namespace sblab::qmc
