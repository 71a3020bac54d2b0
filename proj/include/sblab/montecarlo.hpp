#pragma once

#include "sblab/bernstein.hpp"
#include "sblab/exterior.hpp"
#include "sblab/geometry.hpp"
#include "sblab/rng.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sblab::mc {

using bernstein::BernsteinFunction;
using exterior::ExteriorFunction;
using geometry::Domain;
using geometry::Point;

struct missing_sampler : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One-sided rho-stable increment, E exp(-lambda S) = exp(-dt lambda^rho),
// by the Kanter transform (exact). rho in (0,1]; rho = 1 is pure drift.
double stable_increment(double rho, double dt, rng::Philox& g);

// Samples increments S_dt of the subordinator with Laplace exponent phi,
// E exp(-lambda S_dt) = exp(-dt phi(lambda)).
//
// Exact mode composes closed-form transforms: Kanter for the stable
// family, a Gamma clock for the geometric families, exponential tilting
// by rejection for the relativistic ones, and clock composition for
// power-sum. stable-log has no registered scheme and is refused.
//
// CompoundPoisson mode needs the Levy density chi: jumps >= eps arrive at
// rate jump_rate() and are drawn by inverse CDF from a log-spaced table;
// jumps below eps are replaced by the deterministic drift drift()*dt.
class SubordinatorStepper {
public:
    enum class Mode { Exact, CompoundPoisson };

    explicit SubordinatorStepper(const BernsteinFunction& f,
                                 Mode mode = Mode::Exact, double eps = 1e-4);

    double increment(double dt, rng::Philox& g) const;

    const BernsteinFunction& phi() const { return *f_; }
    bool exact() const { return mode_ == Mode::Exact; }
    double epsilon() const { return eps_; }
    // Lambda(eps) = mu([eps, inf)); 0 in exact mode.
    double jump_rate() const { return rate_; }
    // b(eps) = int_0^eps t mu(dt); 0 in exact mode.
    double drift() const { return drift_; }

private:
    double exact_increment(double dt, rng::Philox& g) const;
    double tilted_stable(double rho, double big_m, double dt,
                         rng::Philox& g) const;
    double table_jump(double u) const;

    const BernsteinFunction* f_;
    Mode mode_;
    double eps_;
    double rate_ = 0.0;
    double drift_ = 0.0;
    std::vector<double> log_t_;  // jump-size table, log abscissae
    std::vector<double> cum_;    // cumulative mass from eps
};

struct StepControl {
    double c_time = 0.05;
    std::uint64_t max_steps = 1000000;
};

struct ExitSample {
    Point x{};         // start point
    double tau = 0.0;  // accumulated process time at exit
    Point exit_pos{};  // first skeleton point outside D
    Point pre_exit{};  // last skeleton point inside D
    std::uint64_t steps = 0;
    double min_delta = 0.0;  // minimum boundary distance along the path
    bool censored = false;   // step budget exhausted before exit
};

// Skeleton walk X_{k+1} = X_k + sqrt(2 S_Delta) G with adaptive step
// Delta = ctrl.c_time / phi(delta_D(X_k)^-2); exit detected at skeleton
// points. Censored samples keep the last interior position.
ExitSample sample_exit(const Domain& D, const Point& x,
                       const SubordinatorStepper& st, const StepControl& ctrl,
                       rng::Philox& g);

struct HarmonicEstimate {
    Point x{};
    double value = 0.0;
    double se = 0.0;  // batch-means standard error, 32 batches
    std::uint64_t n = 0;
    std::uint64_t censored = 0;
    std::uint64_t seed = 0;
    std::string f_id;
    bool heavy_tail_warning = false;
};

// Mean of f(X_{tau_D}) over n exits started at x. Sample i draws from the
// dedicated stream (seed, i), so the result is bit-identical for any
// worker count. Censored paths are excluded from the mean.
HarmonicEstimate estimate_u_f(const Domain& D, const ExteriorFunction& f,
                              const Point& x, std::uint64_t n,
                              const SubordinatorStepper& st,
                              std::uint64_t seed, const StepControl& ctrl = {},
                              int workers = 1);

// Empirical exit kernel from a ball domain, binned by radial shells
// (edges are distances to the closed ball) times equal-measure angular
// sectors; exits beyond the last edge land in the tail.
struct ExitHistogram {
    std::vector<double> edges;  // shell edges, dist(z, D) units, edges[0] = 0
    int n_angular = 1;
    std::uint64_t n = 0;         // uncensored samples
    std::uint64_t censored = 0;
    std::uint64_t tail = 0;      // exits beyond the last shell
    std::vector<std::uint64_t> counts;   // shell-major [k * n_angular + j]
    std::vector<double> volumes;         // exact bin volumes
    std::vector<double> density;         // counts / (n * volume) = K-hat
    std::vector<int> undersampled;       // 1 when a bin has < 50 hits

    std::size_t bins() const { return counts.size(); }
    double mass(std::size_t b) const {
        return n ? static_cast<double>(counts[b]) / static_cast<double>(n)
                 : 0.0;
    }
    double tail_mass() const {
        return n ? static_cast<double>(tail) / static_cast<double>(n) : 0.0;
    }
    Point centroid(std::size_t b) const;  // bin representative point

    Point center{};
    double radius = 0.0;
    int d = 0;
};

ExitHistogram estimate_exit_histogram(const Domain& D, const Point& x,
                                      const std::vector<double>& edges,
                                      int n_angular, std::uint64_t n,
                                      const SubordinatorStepper& st,
                                      std::uint64_t seed,
                                      const StepControl& ctrl = {},
                                      int workers = 1);

struct HarmonicityReport {
    double direct = 0.0;
    double direct_se = 0.0;
    double nested = 0.0;
    double nested_se = 0.0;
    double diff = 0.0;
    double combined_se = 0.0;
    bool pass = false;  // |diff| <= 3 combined SE
};

// Mean-value identity: u_f(x) vs the average of u_f(X_{tau_B(x,rho)})
// over n outer exits from the small ball, each continued with n inner
// exits from D (outer exits already outside D contribute f directly).
HarmonicityReport harmonicity_check(const Domain& D, const ExteriorFunction& f,
                                    const Point& x, double rho,
                                    std::uint64_t n,
                                    const SubordinatorStepper& st,
                                    std::uint64_t seed,
                                    const StepControl& ctrl = {});

struct DecayRow {
    Point x{};
    double delta = 0.0;  // boundary distance of x
    double u2 = 0.0;     // P_x(exit lands outside B(xi, r0))
    double se = 0.0;
};

// u2 along a curve of interior points approaching xi; points must lie in
// D intersect B(xi, r0/8).
std::vector<DecayRow> boundary_decay_check(const Domain& D, const Point& xi,
                                           double r0,
                                           const std::vector<Point>& points,
                                           std::uint64_t n,
                                           const SubordinatorStepper& st,
                                           std::uint64_t seed,
                                           const StepControl& ctrl = {});

// Binary columnar spool of exit samples: magic "SBXS", version, dimension,
// count, then columns x, tau, exit position, steps, flags (bit 0 censored).
void write_exit_spool(const std::string& path,
                      const std::vector<ExitSample>& samples, int d);
std::vector<ExitSample> read_exit_spool(const std::string& path, int* d_out);

}  // namespace sblab::mc
