#pragma once

#include "sblab/bernstein.hpp"
#include "sblab/geometry.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace sblab::exterior {

using bernstein::BernsteinFunction;
using geometry::Domain;
using geometry::Point;

inline constexpr double kPinf = std::numeric_limits<double>::infinity();

// Boundary data defined on the complement of the domain, tagged with the
// declared L^p-Holder class (p, beta). Every packaged family has a global
// defining formula, which doubles as the local representative used by the
// seminorm and oscillation checks.
class ExteriorFunction {
public:
    static ExteriorFunction constant(double value);
    // f(y) = min(|y - y0|^beta, cap); class (inf, beta)
    static ExteriorFunction power(double beta, double cap = 1.0,
                                  Point y0 = {0, 0, 0});
    // smooth step across the sphere |y - z0| = radius, transition width w;
    // Lipschitz, class (inf, 1)
    static ExteriorFunction mollified_indicator(Point z0, double radius,
                                                double width);
    // f(y) = |y - z0|^{-s} with s = 0.45 (d/p + beta); unbounded member of
    // the declared class with margin
    static ExteriorFunction singular(Point z0, int d, double p, double beta);
    // caller-supplied evaluator with a declared class; used for oracles
    static ExteriorFunction custom(std::function<double(const Point&)> eval,
                                   double p, double beta,
                                   std::string tag = "custom");

    double operator()(const Point& y) const { return eval_(y); }
    const std::string& family() const { return family_; }
    double p() const { return p_; }
    double beta() const { return beta_; }
    double singular_exponent() const { return s_; }

private:
    ExteriorFunction() = default;
    std::function<double(const Point&)> eval_;
    std::string family_;
    double p_ = kPinf;
    double beta_ = 1.0;
    double s_ = std::numeric_limits<double>::quiet_NaN();
};

struct HolderFit {
    double c = 0.0;              // sup over shifts of ||f(.+y) - f||_p / |y|^beta
    bool diverging = false;      // ratios grow as |y| -> 0
    std::vector<double> ratios;  // one per shift, shift order preserved
};

// Seminorm estimate over a box window; p = inf uses a max over nodes,
// finite p a quasi-random L^p quadrature.
HolderFit holder_seminorm(const ExteriorFunction& f,
                          const std::vector<Point>& shifts,
                          Point window_center, double window_half, int d,
                          std::uint64_t n_nodes = 100000);

struct MeanEstimate {
    double value = 0.0;
    double se = 0.0;
    std::uint64_t accepted = 0;
    std::uint64_t attempts = 0;
    double volume_fraction = 0.0;
};

struct degenerate_region : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integral mean of f over B(xi, r) \ closure(D) by quasi-random rejection
// from the ball.
MeanEstimate boundary_mean(const Domain& D, const ExteriorFunction& f,
                           Point xi, double r,
                           std::uint64_t n_accepted = 100000);

struct BoundaryMean {
    Point xi = {0, 0, 0};
    std::vector<double> radii;
    std::vector<double> means;
    std::vector<double> ses;
    double limit = 0.0;
    double diagnostic = 0.0;  // sup_k r_k^{-gamma} |A(2 r_k) - A(r_k)|
    bool non_cauchy = false;
};

// Dyadic means A(xi, 2^-k) down to depth k_max with the Cauchy diagnostic.
BoundaryMean boundary_limit(const Domain& D, const ExteriorFunction& f,
                            Point xi, double gamma, int k_max,
                            std::uint64_t n_accepted = 100000);

struct OscillationValues {
    double e_val = 0.0;  // weighted double integral, normalized
    double f_val = 0.0;  // unweighted double integral, normalized
};

// Oscillation functionals at scale r. The unweighted functional uses paired
// quasi-random rejection nodes; the weighted one integrates the singular
// delta-weight by an exact chart quadrature in the vertical coordinate
// against a fixed rejection panel for the inner oscillation mean.
OscillationValues oscillation_functionals(const Domain& D,
                                          const ExteriorFunction& f,
                                          const BernsteinFunction& phi,
                                          Point xi, double r, double gamma,
                                          std::uint64_t n_pairs = 100000,
                                          int n_surface = 512,
                                          int n_panel = 512);

struct SlabBound {
    double lhs = 0.0;
    double ratio = 0.0;  // lhs / (r s^{d-1} phi(r^-2)^{q/2})
};

// Weighted slab integral over {|y~| < s, |rho_xi(y)| < M r} in the boundary
// chart against the bound r s^{d-1} phi(r^-2)^{q/2}.
SlabBound lemma31_check(const Domain& D, const BernsteinFunction& phi,
                        Point xi, double s, double r, double q, double M,
                        double lambda0 = 1.0, int n_surface = 512);

// Ball specialization: integral of phi(delta^-2)^{1/2} over B(xi, r)
// against r^d phi(r^-2)^{1/2}.
SlabBound cor32_check(const Domain& D, const BernsteinFunction& phi, Point xi,
                      double r, double lambda0 = 1.0, int n_surface = 512);

}  // namespace sblab::exterior
