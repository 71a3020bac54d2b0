#include "sblab/exterior.hpp"

#include "sblab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace sblab::exterior {

namespace {

const double kTiny = 1e-300;

}  // namespace

ExteriorFunction ExteriorFunction::constant(double value) {
    ExteriorFunction f;
    f.family_ = "constant";
    f.p_ = kPinf;
    f.beta_ = 1.0;
    f.eval_ = [value](const Point&) { return value; };
    return f;
}

ExteriorFunction ExteriorFunction::power(double beta, double cap, Point y0) {
    if (!(beta > 0.0)) throw std::invalid_argument("power: beta > 0");
    if (!(cap > 0.0)) throw std::invalid_argument("power: cap > 0");
    ExteriorFunction f;
    f.family_ = "power";
    f.p_ = kPinf;
    f.beta_ = beta;
    f.eval_ = [beta, cap, y0](const Point& y) {
        double r = geometry::distance(y, y0, 3);
        return std::min(std::pow(r, beta), cap);
    };
    return f;
}

ExteriorFunction ExteriorFunction::mollified_indicator(Point z0, double radius,
                                                       double width) {
    if (!(radius > 0.0) || !(width > 0.0))
        throw std::invalid_argument("mollified_indicator: radius, width > 0");
    ExteriorFunction f;
    f.family_ = "mollified-indicator";
    f.p_ = kPinf;
    f.beta_ = 1.0;
    f.eval_ = [z0, radius, width](const Point& y) {
        double t = (radius + width / 2.0 - geometry::distance(y, z0, 3)) / width;
        t = std::clamp(t, 0.0, 1.0);
        return t * t * (3.0 - 2.0 * t);
    };
    return f;
}

ExteriorFunction ExteriorFunction::custom(
    std::function<double(const Point&)> eval, double p, double beta,
    std::string tag) {
    if (!(beta > 0.0)) throw std::invalid_argument("custom: beta > 0");
    ExteriorFunction f;
    f.family_ = std::move(tag);
    f.p_ = p;
    f.beta_ = beta;
    f.eval_ = std::move(eval);
    return f;
}

ExteriorFunction ExteriorFunction::singular(Point z0, int d, double p,
                                            double beta) {
    if (d < 2 || d > 3) throw std::invalid_argument("singular: d in {2,3}");
    if (!(p > 1.0) || p == kPinf)
        throw std::invalid_argument("singular: finite p > 1");
    if (!(beta > 1.0 / p)) throw std::invalid_argument("singular: beta > 1/p");
    ExteriorFunction f;
    f.family_ = "singular";
    f.p_ = p;
    f.beta_ = beta;
    f.s_ = 0.45 * (d / p + beta);
    double s = f.s_;
    f.eval_ = [z0, s](const Point& y) {
        double r = geometry::distance(y, z0, 3);
        return std::pow(std::max(r, kTiny), -s);
    };
    return f;
}

HolderFit holder_seminorm(const ExteriorFunction& f,
                          const std::vector<Point>& shifts,
                          Point window_center, double window_half, int d,
                          std::uint64_t n_nodes) {
    if (d < 1 || d > 3) throw std::invalid_argument("holder_seminorm: d");
    if (!(window_half > 0.0))
        throw std::invalid_argument("holder_seminorm: window_half > 0");
    HolderFit out;
    double p = f.p();
    double beta = f.beta();
    double volume = std::pow(2.0 * window_half, d);
    double r_small = 0.0, r_large = 0.0;
    double y_small = kPinf, y_large = 0.0;
    for (const Point& y : shifts) {
        double ay = geometry::norm(y, 3);
        if (!(ay > 0.0))
            throw std::invalid_argument("holder_seminorm: zero shift");
        double acc = 0.0;
        for (std::uint64_t i = 0; i < n_nodes; ++i) {
            double u[3] = {0.5, 0.5, 0.5};
            qmc::halton(i, d, u);
            Point x = window_center;
            for (int k = 0; k < d; ++k)
                x[k] += window_half * (2.0 * u[k] - 1.0);
            Point xs = geometry::add(x, y);
            double diff = std::abs(f(xs) - f(x));
            if (p == kPinf)
                acc = std::max(acc, diff);
            else
                acc += std::pow(diff, p);
        }
        double nrm = (p == kPinf)
                         ? acc
                         : std::pow(volume * acc / double(n_nodes), 1.0 / p);
        double ratio = nrm / std::pow(ay, beta);
        out.ratios.push_back(ratio);
        if (ay < y_small) {
            y_small = ay;
            r_small = ratio;
        }
        if (ay > y_large) {
            y_large = ay;
            r_large = ratio;
        }
        out.c = std::max(out.c, ratio);
    }
    out.diverging = r_small > 10.0 * r_large + 1e-12;
    return out;
}

MeanEstimate boundary_mean(const Domain& D, const ExteriorFunction& f,
                           Point xi, double r, std::uint64_t n_accepted) {
    if (!(r > 0.0) || !(r < D.lip_R() / 2.0))
        throw std::domain_error("boundary_mean: need 0 < r < R_Lip/2");
    if (n_accepted == 0)
        throw std::invalid_argument("boundary_mean: n_accepted > 0");
    int d = D.dim();
    MeanEstimate out;
    double sum = 0.0, sum_sq = 0.0;
    std::uint64_t cap =
        std::max<std::uint64_t>(2000000, 50 * n_accepted);
    std::uint64_t i = 0;
    for (; i < cap && out.accepted < n_accepted; ++i) {
        double b[3] = {0, 0, 0};
        qmc::ball_point(i, d, r, b);
        Point y = {xi[0] + b[0], xi[1] + b[1], xi[2] + b[2]};
        if (D.contains(y)) continue;
        double v = f(y);
        sum += v;
        sum_sq += v * v;
        out.accepted++;
    }
    out.attempts = i;
    out.volume_fraction = double(out.accepted) / double(out.attempts);
    if (out.volume_fraction < 1e-3)
        throw degenerate_region("boundary_mean: exterior fraction below 1e-3");
    out.value = sum / double(out.accepted);
    double var =
        std::max(0.0, sum_sq / double(out.accepted) - out.value * out.value);
    out.se = std::sqrt(var / double(out.accepted));
    return out;
}

BoundaryMean boundary_limit(const Domain& D, const ExteriorFunction& f,
                            Point xi, double gamma, int k_max,
                            std::uint64_t n_accepted) {
    if (k_max < 8) throw std::domain_error("boundary_limit: k_max >= 8");
    if (!(gamma > 0.0)) throw std::invalid_argument("boundary_limit: gamma > 0");
    int k_min = 1;
    while (std::pow(2.0, -k_min) >= D.lip_R() / 2.0) ++k_min;
    if (k_max < k_min + 5)
        throw std::domain_error("boundary_limit: not enough dyadic levels");
    BoundaryMean out;
    out.xi = xi;
    for (int k = k_min; k <= k_max; ++k) {
        double r = std::pow(2.0, -k);
        auto m = boundary_mean(D, f, xi, r, n_accepted);
        out.radii.push_back(r);
        out.means.push_back(m.value);
        out.ses.push_back(m.se);
    }
    out.limit = out.means.back();
    std::size_t n = out.means.size();
    std::vector<double> diffs(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        diffs[j] = std::abs(out.means[j] - out.means[j + 1]);
        double rn = out.radii[j + 1];
        out.diagnostic =
            std::max(out.diagnostic, std::pow(rn, -gamma) * diffs[j]);
    }
    double head = std::max(diffs[0], diffs[1]);
    double tail = std::max(diffs[n - 2], diffs[n - 3]);
    double noise = 0.0;
    for (std::size_t j = n - 3; j + 1 < n; ++j)
        noise = std::max(noise, 3.0 * std::hypot(out.ses[j], out.ses[j + 1]));
    out.non_cauchy = tail > 0.5 * head + noise;
    return out;
}

namespace {

// Boundary chart at xi: orthonormal frame (tan[0..d-2], vert) with vert
// pointing inward; the boundary is the graph {v = psi(tt)} and the interior
// lies above it. For graph domains the frame is the ambient one, matching
// the coordinate-system convention for Lipschitz graphs.
struct Chart {
    const Domain* D = nullptr;
    Point xi = {0, 0, 0};
    Point vert = {0, 0, 0};
    Point tan[2] = {{0, 0, 0}, {0, 0, 0}};
    int d = 2;

    Point at(const double* tt, double v) const {
        Point y = xi;
        for (int k = 0; k + 1 < d; ++k)
            for (int i = 0; i < 3; ++i) y[i] += tt[k] * tan[k][i];
        for (int i = 0; i < 3; ++i) y[i] += v * vert[i];
        return y;
    }

    double psi(const double* tt) const {
        if (D->shape() == Domain::Shape::Ball) {
            double R = D->radius();
            double t2 = 0.0;
            for (int k = 0; k + 1 < d; ++k) t2 += tt[k] * tt[k];
            if (t2 >= R * R) return R;
            return R - std::sqrt(R * R - t2);
        }
        double xt[2] = {0, 0};
        for (int k = 0; k + 1 < d; ++k) xt[k] = xi[k] + tt[k];
        return D->graph_height(xt) - xi[d - 1];
    }
};

Chart make_chart(const Domain& D, const Point& xi) {
    Chart ch;
    ch.D = &D;
    ch.xi = xi;
    ch.d = D.dim();
    if (D.shape() == Domain::Shape::Ball) {
        double R = D.radius();
        Point n = geometry::scale(geometry::sub(D.center(), xi), 1.0 / R);
        ch.vert = n;
        // tangents: least-aligned axes, Gram-Schmidt
        int skip = 0;
        for (int i = 1; i < ch.d; ++i)
            if (std::abs(n[i]) > std::abs(n[skip])) skip = i;
        int j = 0;
        for (int axis = 0; axis < ch.d; ++axis) {
            if (axis == skip) continue;
            Point t = {0, 0, 0};
            t[axis] = 1.0;
            double pn = geometry::dot(t, n, ch.d);
            for (int i = 0; i < 3; ++i) t[i] -= pn * n[i];
            for (int k = 0; k < j; ++k) {
                double pt = geometry::dot(t, ch.tan[k], ch.d);
                for (int i = 0; i < 3; ++i) t[i] -= pt * ch.tan[k][i];
            }
            double nn = geometry::norm(t, ch.d);
            ch.tan[j++] = geometry::scale(t, 1.0 / nn);
        }
    } else if (D.shape() == Domain::Shape::Graph) {
        ch.vert[ch.d - 1] = 1.0;
        for (int k = 0; k + 1 < ch.d; ++k) ch.tan[k][k] = 1.0;
        if (std::abs(D.graph_height(xi.data()) - xi[ch.d - 1]) > 1e-10)
            throw std::invalid_argument("chart: xi not on the graph");
    } else {
        throw std::invalid_argument("chart: localized domains not supported");
    }
    return ch;
}

}  // namespace

OscillationValues oscillation_functionals(const Domain& D,
                                          const ExteriorFunction& f,
                                          const BernsteinFunction& phi,
                                          Point xi, double r, double gamma,
                                          std::uint64_t n_pairs,
                                          int n_surface, int n_panel) {
    if (!(r > 0.0) || !(r < D.lip_R() / 2.0))
        throw std::domain_error("oscillation: need 0 < r < R_Lip/2");
    int d = D.dim();
    double vol_ball = num::unit_ball_volume(d) * std::pow(r, d);
    OscillationValues out;

    // unweighted functional: paired rejection nodes
    double fsum = 0.0;
    for (std::uint64_t i = 0; i < n_pairs; ++i) {
        double by[3] = {0, 0, 0}, bz[3] = {0, 0, 0};
        qmc::ball_point_at(i, 0, d, r, by);
        qmc::ball_point_at(i, 3, d, r, bz);
        Point y = {xi[0] + by[0], xi[1] + by[1], xi[2] + by[2]};
        Point z = {xi[0] + bz[0], xi[1] + bz[1], xi[2] + bz[2]};
        if (D.contains(y) || D.contains(z)) continue;
        fsum += std::abs(f(y) - f(z));
    }
    double f_int = vol_ball * vol_ball * fsum / double(n_pairs);
    out.f_val = f_int / std::pow(r, 2 * d + gamma);

    // rejection panel for the inner oscillation mean
    std::vector<Point> panel;
    std::uint64_t attempts = 0;
    for (std::uint64_t i = 0; int(panel.size()) < n_panel &&
                              attempts < std::uint64_t(4000) * n_panel;
         ++i) {
        double b[3] = {0, 0, 0};
        qmc::ball_point(i, d, r, b);
        ++attempts;
        Point z = {xi[0] + b[0], xi[1] + b[1], xi[2] + b[2]};
        if (!D.contains(z)) panel.push_back(z);
    }
    if (panel.empty())
        throw degenerate_region("oscillation: no exterior volume at scale r");
    double z_vol = vol_ball * double(panel.size()) / double(attempts);

    // weighted functional: chart quadrature in the vertical coordinate
    Chart ch = make_chart(D, xi);
    int dm1 = d - 1;
    double acc = 0.0;
    for (int i = 0; i < n_surface; ++i) {
        double tt[2] = {0, 0};
        qmc::ball_point(i, dm1, r, tt);
        double t2 = tt[0] * tt[0] + tt[1] * tt[1];
        double si = std::sqrt(std::max(0.0, r * r - t2));
        double hi = std::min(ch.psi(tt), si);
        double lo = -si;
        if (!(hi > lo)) continue;
        auto g = [&](double v) {
            Point y = ch.at(tt, v);
            double delta = D.dist_to_boundary(y);
            if (!(delta > 1e-150)) return 0.0;
            double w = std::sqrt(phi.phi(1.0 / (delta * delta)));
            double osc = 0.0;
            for (const Point& z : panel) osc += std::abs(f(y) - f(z));
            return w * osc / double(panel.size()) * z_vol;
        };
        acc += num::integrate(g, lo, hi, 1e-6);
    }
    double e_int =
        num::unit_ball_volume(dm1) * std::pow(r, dm1) * acc / double(n_surface);
    out.e_val = e_int / (std::pow(r, 2 * d + gamma) *
                         std::sqrt(phi.phi(1.0 / (r * r))));
    return out;
}

SlabBound lemma31_check(const Domain& D, const BernsteinFunction& phi,
                        Point xi, double s, double r, double q, double M,
                        double lambda0, int n_surface) {
    int d = D.dim();
    if (!(q >= 1.0)) throw std::domain_error("lemma31: q >= 1");
    if (!(M >= 1.0)) throw std::domain_error("lemma31: M >= 1");
    if (!(s > 0.0) || s > D.lip_R() / 2.0)
        throw std::domain_error("lemma31: need 0 < s <= R_Lip/2");
    double r_cap =
        (1.0 / (2.0 * M)) * std::min(D.lip_R(), 1.0 / std::sqrt(lambda0));
    if (!(r > 0.0) || r > r_cap)
        throw std::domain_error("lemma31: r exceeds the chart scale cap");
    Chart ch = make_chart(D, xi);
    int dm1 = d - 1;
    double acc = 0.0;
    for (int i = 0; i < n_surface; ++i) {
        double tt[2] = {0, 0};
        qmc::ball_point(i, dm1, s, tt);
        double base = ch.psi(tt);
        auto g = [&](double rho) {
            Point y = ch.at(tt, base + rho);
            double delta = D.dist_to_boundary(y);
            if (!(delta > 1e-150)) return 0.0;
            return std::pow(phi.phi(1.0 / (delta * delta)), q / 2.0);
        };
        acc += num::integrate(g, -M * r, 0.0, 1e-7) +
               num::integrate(g, 0.0, M * r, 1e-7);
    }
    SlabBound out;
    out.lhs =
        num::unit_ball_volume(dm1) * std::pow(s, dm1) * acc / double(n_surface);
    out.ratio = out.lhs / (r * std::pow(s, d - 1) *
                           std::pow(phi.phi(1.0 / (r * r)), q / 2.0));
    return out;
}

SlabBound cor32_check(const Domain& D, const BernsteinFunction& phi, Point xi,
                      double r, double lambda0, int n_surface) {
    int d = D.dim();
    double r_cap = std::min(D.lip_R(), 1.0 / std::sqrt(lambda0)) /
                   (2.0 + 2.0 * D.lip_Lambda());
    if (!(r > 0.0) || r > r_cap)
        throw std::domain_error("cor32: r exceeds the chart scale cap");
    Chart ch = make_chart(D, xi);
    int dm1 = d - 1;
    double acc = 0.0;
    for (int i = 0; i < n_surface; ++i) {
        double tt[2] = {0, 0};
        qmc::ball_point(i, dm1, r, tt);
        double t2 = tt[0] * tt[0] + tt[1] * tt[1];
        double si = std::sqrt(std::max(0.0, r * r - t2));
        double base = ch.psi(tt);
        auto g = [&](double v) {
            Point y = ch.at(tt, v);
            double delta = D.dist_to_boundary(y);
            if (!(delta > 1e-150)) return 0.0;
            return std::sqrt(phi.phi(1.0 / (delta * delta)));
        };
        if (base > -si && base < si)
            acc += num::integrate(g, -si, base, 1e-7) +
                   num::integrate(g, base, si, 1e-7);
        else
            acc += num::integrate(g, -si, si, 1e-7);
    }
    SlabBound out;
    out.lhs =
        num::unit_ball_volume(dm1) * std::pow(r, dm1) * acc / double(n_surface);
    out.ratio = out.lhs / (std::pow(r, d) *
                           std::sqrt(phi.phi(1.0 / (r * r))));
    return out;
}

}  // namespace sblab::exterior
