#include "sblab/kernels.hpp"

#include "sblab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sblab::kernels {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

KernelSuite::KernelSuite(const bernstein::BernsteinFunction& f, int d,
                         double M)
    : f_(&f), d_(d), M_(M) {
    if (d < 2) throw std::invalid_argument("KernelSuite: d >= 2");
    if (M <= 0.0) throw std::invalid_argument("KernelSuite: M > 0");
}

double KernelSuite::jump_surrogate(double r) const {
    if (!(r > 0.0) || r > M_)
        throw std::domain_error("jump_surrogate: need 0 < r <= M");
    return f_->phi_prime(1.0 / (r * r)) / std::pow(r, d_ + 2.0);
}

double KernelSuite::green_surrogate(double r) const {
    if (!(r > 0.0) || r > M_)
        throw std::domain_error("green_surrogate: need 0 < r <= M");
    double lam = 1.0 / (r * r);
    double p = f_->phi(lam);
    return f_->phi_prime(lam) / (std::pow(r, d_ + 2.0) * p * p);
}

bool KernelSuite::has_exact_jump() const {
    return (f_->family() == "stable" && f_->alpha() < 2.0) || f_->has_chi();
}

double KernelSuite::jump_density(double r) const {
    if (!(r > 0.0)) throw std::domain_error("jump_density: r > 0");
    if (f_->family() == "stable" && f_->alpha() < 2.0)
        return stable_jump_density(d_, f_->alpha(), r);
    if (f_->has_chi()) return jump_density_quadrature(r);
    throw surrogate_only("surrogate-only: no exact jump density for " +
                         f_->family());
}

double KernelSuite::jump_density_quadrature(double r) const {
    if (!(r > 0.0)) throw std::domain_error("jump_density: r > 0");
    if (!f_->has_chi())
        throw surrogate_only("surrogate-only: no Levy density for " +
                             f_->family());
    // j(r) = int (4 pi t)^(-d/2) exp(-r^2/(4t)) chi(t) dt, t = r^2 u
    double r2 = r * r;
    auto integrand = [&](double u) {
        if (!(u > 0.0)) return 0.0;
        double e = 1.0 / (4.0 * u);
        if (e > 700.0) return 0.0;
        double t = r2 * u;
        if (t > 1e280) return 0.0;
        return std::pow(4.0 * kPi * t, -d_ / 2.0) * std::exp(-e) *
               f_->chi(t) * r2;
    };
    double head = num::integrate(integrand, 0.0, 1.0, 1e-9);
    double tail = num::integrate(
        [&](double v) {
            if (!(v > 1e-100)) return 0.0;
            double u = 1.0 / v;
            return integrand(u) / (v * v);
        },
        0.0, 1.0, 1e-9);
    return head + tail;
}

double KernelSuite::green_quadrature_stable(double r) const {
    if (f_->family() != "stable")
        throw std::domain_error("green_quadrature_stable: stable family only");
    double alpha = f_->alpha();
    if (d_ <= alpha)
        throw std::domain_error("green_quadrature_stable: need d > alpha");
    double rho = alpha / 2.0;
    // potential density of the stable subordinator: s^(rho-1)/Gamma(rho)
    double r2 = r * r;
    auto integrand = [&](double u) {
        if (!(u > 0.0)) return 0.0;
        double e = 1.0 / (4.0 * u);
        if (e > 700.0) return 0.0;
        double s = r2 * u;
        if (s > 1e280) return 0.0;
        return std::pow(4.0 * kPi * s, -d_ / 2.0) * std::exp(-e) *
               std::pow(s, rho - 1.0) / std::tgamma(rho) * r2;
    };
    double head = num::integrate(integrand, 0.0, 1.0, 1e-9);
    double tail = num::integrate(
        [&](double v) {
            if (!(v > 1e-100)) return 0.0;
            double u = 1.0 / v;
            return integrand(u) / (v * v);
        },
        0.0, 1.0, 1e-9);
    return head + tail;
}

double stable_jump_constant(int d, double alpha) {
    return alpha * std::pow(2.0, alpha - 1.0) * std::pow(kPi, -d / 2.0) *
           std::tgamma((d + alpha) / 2.0) / std::tgamma(1.0 - alpha / 2.0);
}

double stable_jump_density(int d, double alpha, double r) {
    return stable_jump_constant(d, alpha) * std::pow(r, -d - alpha);
}

double stable_green_constant(int d, double alpha) {
    if (d <= alpha)
        throw std::domain_error("stable_green_constant: need d > alpha");
    return std::tgamma((d - alpha) / 2.0) /
           (std::pow(2.0, alpha) * std::pow(kPi, d / 2.0) *
            std::tgamma(alpha / 2.0));
}

double green_exact_stable(int d, double alpha, double r) {
    return stable_green_constant(d, alpha) * std::pow(r, alpha - d);
}

Comparability verify_comparability(
    const std::function<double(double)>& exact,
    const std::function<double(double)>& surrogate,
    const std::vector<double>& r_grid) {
    Comparability out;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    bool clean = !r_grid.empty();
    for (double r : r_grid) {
        double ratio = exact(r) / surrogate(r);
        if (!std::isfinite(ratio) || ratio <= 0.0) {
            clean = false;
            break;
        }
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    out.c_low = lo;
    out.c_high = hi;
    out.c = std::max(1.0 / lo, hi);
    out.ok = clean && hi / lo <= 1e6;
    return out;
}

GdecFit check_gdec(const bernstein::BernsteinFunction& f, int d,
                   const std::vector<double>& t_grid) {
    GdecFit out;
    auto value = [&](double t) {
        double lam = 1.0 / (t * t);
        return f.phi_prime(lam) / (f.phi(lam) * std::pow(t, d + 2.0));
    };
    double run_min = std::numeric_limits<double>::infinity();
    double c = 1.0;
    for (double t : t_grid) {
        if (t > 2.0) break;
        double v = value(t);
        if (!std::isfinite(v) || v <= 0.0) return out;
        if (std::isfinite(run_min)) c = std::max(c, v / run_min);
        run_min = std::min(run_min, v);
    }
    out.c = c;
    out.ok = c < 1e6;
    return out;
}

PoissonEnvelope::PoissonEnvelope(const KernelSuite& suite,
                                 const geometry::Domain& U)
    : suite_(&suite), U_(&U), surrogate_(!suite.has_exact_jump()) {}

double PoissonEnvelope::eval(const geometry::Point& x,
                             const geometry::Point& z) const {
    if (!U_->contains(x))
        throw std::domain_error("poisson_envelope: x must lie in U");
    if (U_->contains(z) || U_->dist_to_boundary(z) == 0.0)
        throw std::domain_error("poisson_envelope: z must be exterior to U");
    double r = geometry::distance(x, z, U_->dim());
    if (!(r < suite_->cutoff()))
        throw std::domain_error("poisson_envelope: |x-z| below cutoff only");
    const auto& f = suite_->phi();
    double dx = U_->dist_to_boundary(x);
    double dz = U_->dist_to_boundary(z);
    double px = std::sqrt(f.phi(1.0 / (dx * dx)));
    double pz = std::sqrt(f.phi(1.0 / (dz * dz)));
    double pr = f.phi(1.0 / (r * r));
    double j = surrogate_ ? suite_->jump_surrogate(r) : suite_->jump_density(r);
    return pz / (px * pr * (1.0 + 1.0 / pz)) * j;
}

} // namespace sblab::kernels
