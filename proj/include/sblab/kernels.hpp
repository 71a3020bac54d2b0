#pragma once

#include "sblab/bernstein.hpp"
#include "sblab/geometry.hpp"

#include <functional>
#include <stdexcept>
#include <vector>

namespace sblab::kernels {

// Radial kernel evaluators for the subordinate Brownian motion with Laplace
// exponent phi: the exact jump density and Green profile where closed forms
// or quadrature are available, and the phi-based surrogates that the kernel
// estimates compare them against on (0, M].
class KernelSuite {
public:
    KernelSuite(const bernstein::BernsteinFunction& f, int d, double M = 2.0);

    const bernstein::BernsteinFunction& phi() const { return *f_; }
    int dim() const { return d_; }
    double cutoff() const { return M_; }

    // phi'(r^-2)/r^(d+2)
    double jump_surrogate(double r) const;
    // phi'(r^-2)/(r^(d+2) phi(r^-2)^2)
    double green_surrogate(double r) const;

    // Exact jump density: closed form for the stable family, subordination
    // quadrature for other families with a registered Levy density chi.
    // Throws surrogate_only when neither path exists.
    double jump_density(double r) const;
    bool has_exact_jump() const;

    // Forces the quadrature path (used to cross-check the closed form).
    double jump_density_quadrature(double r) const;

    // Whole-space Green profile for the stable family by subordination
    // quadrature against the potential density of the stable subordinator.
    double green_quadrature_stable(double r) const;

private:
    const bernstein::BernsteinFunction* f_;
    int d_;
    double M_;
};

struct surrogate_only : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A(d,alpha) r^(-d-alpha), the exact rotationally symmetric alpha-stable
// jump density constant.
double stable_jump_constant(int d, double alpha);
double stable_jump_density(int d, double alpha, double r);

// C(d,alpha) r^(alpha-d), the Riesz kernel; requires d > alpha.
double stable_green_constant(int d, double alpha);
double green_exact_stable(int d, double alpha, double r);

struct Comparability {
    double c_low = 0.0;   // inf exact/surrogate over the grid
    double c_high = 0.0;  // sup exact/surrogate
    double c = 0.0;       // max(1/c_low, c_high)
    bool ok = false;      // both finite, positive, span below 1e6
};

Comparability verify_comparability(const std::function<double(double)>& exact,
                                   const std::function<double(double)>& surrogate,
                                   const std::vector<double>& r_grid);

struct GdecFit {
    double c = 1.0;  // smallest constant with value(t) <= c * value(s), s <= t
    bool ok = false;
};

// c-monotonicity of t -> phi'(t^-2)/(phi(t^-2) t^(d+2)) on (0, 2].
GdecFit check_gdec(const bernstein::BernsteinFunction& f, int d,
                   const std::vector<double>& t_grid);

// Envelope of the Poisson kernel K_U(x,z) of a bounded C^{1,1} open set:
//   phi(delta_U(z)^-2)^(1/2)
//   ------------------------------------------------------------- j(|x-z|)
//   phi(delta_U(x)^-2)^(1/2) phi(|x-z|^-2) (1+phi(delta_U(z)^-2)^(-1/2))
// with j replaced by the surrogate when no exact density is registered.
class PoissonEnvelope {
public:
    PoissonEnvelope(const KernelSuite& suite, const geometry::Domain& U);

    double eval(const geometry::Point& x, const geometry::Point& z) const;
    bool surrogate_mode() const { return surrogate_; }

private:
    const KernelSuite* suite_;
    const geometry::Domain* U_;
    bool surrogate_;
};

} // namespace sblab::kernels
