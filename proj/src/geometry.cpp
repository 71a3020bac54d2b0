#include "sblab/geometry.hpp"

#include "sblab/numerics.hpp"
#include "sblab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sblab::geometry {

GraphProfile GraphProfile::flat() { return {}; }

GraphProfile GraphProfile::cone(double slope, double smooth) {
    GraphProfile p;
    p.name = "cone";
    p.slope = slope;
    p.smooth = smooth;
    return p;
}

GraphProfile GraphProfile::bump(double amp, double width) {
    GraphProfile p;
    p.name = "bump";
    p.amp = amp;
    p.width = width;
    return p;
}

double GraphProfile::value(const double* xt, int k) const {
    if (name == "flat") return 0.0;
    double r2 = 0;
    for (int i = 0; i < k; ++i) r2 += xt[i] * xt[i];
    if (name == "cone")
        return slope * (std::sqrt(r2 + smooth * smooth) - smooth);
    return amp * std::exp(-r2 / (width * width));
}

void GraphProfile::gradient(const double* xt, int k, double* out) const {
    if (name == "flat") {
        for (int i = 0; i < k; ++i) out[i] = 0.0;
        return;
    }
    double r2 = 0;
    for (int i = 0; i < k; ++i) r2 += xt[i] * xt[i];
    if (name == "cone") {
        double den = std::sqrt(r2 + smooth * smooth);
        for (int i = 0; i < k; ++i) out[i] = slope * xt[i] / den;
        return;
    }
    double v = amp * std::exp(-r2 / (width * width));
    for (int i = 0; i < k; ++i)
        out[i] = -2.0 * xt[i] / (width * width) * v;
}

double GraphProfile::lip() const {
    if (name == "flat") return 0.0;
    if (name == "cone") return slope;
    // max of 2A t exp(-t^2)/w at t = 1/sqrt(2)
    return std::abs(amp) * std::sqrt(2.0 / std::exp(1.0)) / width;
}

double GraphProfile::grad_lip() const {
    if (name == "flat") return 0.0;
    if (name == "cone") return slope / smooth;
    return 2.0 * std::abs(amp) / (width * width);
}

Domain Domain::ball(const Point& center, double radius, int d) {
    if (radius <= 0.0 || d < 2 || d > 3)
        throw std::invalid_argument("ball: need radius > 0 and d in {2,3}");
    Domain out;
    out.shape_ = Shape::Ball;
    out.d_ = d;
    out.center_ = center;
    out.radius_ = radius;
    out.c11_R_ = radius;
    out.c11_Lambda_ = 2.0 / radius;
    out.lip_R_ = std::min(radius / 2.0, 0.99);
    out.lip_Lambda_ = 1.0 / std::sqrt(3.0);
    return out;
}

Domain Domain::graph(GraphProfile psi, int d, double box_half) {
    if (d < 2 || d > 3 || box_half <= 1.0)
        throw std::invalid_argument("graph: need d in {2,3}, box_half > 1");
    Domain out;
    out.shape_ = Shape::Graph;
    out.d_ = d;
    out.psi_ = psi;
    out.box_half_ = box_half;
    double gl = psi.grad_lip();
    out.c11_R_ = gl > 0.0 ? std::min(1.0, 0.5 / gl) : 1.0;
    out.c11_Lambda_ = gl;
    out.lip_R_ = 0.99;
    out.lip_Lambda_ = psi.lip();
    return out;
}

double Domain::graph_height(const double* xt) const {
    if (shape_ != Shape::Graph)
        throw std::logic_error("graph_height: not a graph domain");
    return psi_.value(xt, d_ - 1);
}

namespace {

// Foot of the nearest point on the surface x_d = psi(x~): damped fixed-point
// iteration on y~ = x~ + (x_d - psi(y~)) grad psi(y~), then the distance from
// x to (y~, psi(y~)). Descent on the squared distance guards the rare
// non-contractive cases, so the result never exceeds the true distance by
// more than the tolerance where the iteration converges.
double nearest_on_graph(const GraphProfile& psi, const double* xt, double xd,
                        int k, double* foot) {
    double y[2] = {xt[0], k > 1 ? xt[1] : 0.0};
    double g[2] = {0, 0};
    auto dist2 = [&](const double* p) {
        double v = psi.value(p, k);
        double s = (xd - v) * (xd - v);
        for (int i = 0; i < k; ++i) s += (xt[i] - p[i]) * (xt[i] - p[i]);
        return s;
    };
    double best = dist2(y);
    for (int it = 0; it < 200; ++it) {
        double v = psi.value(y, k);
        psi.gradient(y, k, g);
        double target[2];
        for (int i = 0; i < k; ++i) target[i] = xt[i] + (xd - v) * g[i];
        double cand[2];
        double step = 1.0;
        double moved = 0.0;
        for (int bt = 0; bt < 30; ++bt) {
            for (int i = 0; i < k; ++i)
                cand[i] = y[i] + step * (target[i] - y[i]);
            double d2 = dist2(cand);
            if (d2 <= best * (1.0 + 1e-15)) {
                moved = 0.0;
                for (int i = 0; i < k; ++i) {
                    moved += std::abs(cand[i] - y[i]);
                    y[i] = cand[i];
                }
                best = d2;
                break;
            }
            step *= 0.5;
        }
        if (moved < 1e-13 * (1.0 + std::abs(xd))) break;
    }
    for (int i = 0; i < k; ++i) foot[i] = y[i];
    return std::sqrt(best);
}

} // namespace

double Domain::graph_dist(const Point& x) const {
    double foot[2];
    return nearest_on_graph(psi_, x.data(), x[d_ - 1], d_ - 1, foot);
}

bool Domain::contains(const Point& x) const {
    switch (shape_) {
        case Shape::Ball:
            return distance(x, center_, d_) < radius_;
        case Shape::Graph: {
            for (int i = 0; i < d_; ++i)
                if (std::abs(x[i]) >= box_half_) return false;
            return x[d_ - 1] > psi_.value(x.data(), d_ - 1);
        }
        case Shape::Localized:
            return set_dist(x) < loc_fillet_;
    }
    return false;
}

double Domain::dist_to_boundary(const Point& x) const {
    switch (shape_) {
        case Shape::Ball:
            return std::abs(radius_ - distance(x, center_, d_));
        case Shape::Graph: {
            double dg = graph_dist(x);
            bool above = x[d_ - 1] > psi_.value(x.data(), d_ - 1);
            double wall = std::numeric_limits<double>::infinity();
            bool in_box = true;
            double out2 = 0.0;
            for (int i = 0; i < d_; ++i) {
                double m = box_half_ - std::abs(x[i]);
                wall = std::min(wall, m);
                if (m < 0.0) {
                    in_box = false;
                    out2 += m * m;
                }
            }
            if (above && in_box) return std::min(dg, wall);
            if (in_box) return dg;
            // outside the box: lower bound by the dominating separation
            return std::max(std::sqrt(out2), above ? 0.0 : dg);
        }
        case Shape::Localized: {
            double de = set_dist(x);
            if (de >= loc_fillet_) return de - loc_fillet_;
            double lower = loc_fillet_ - de;
            if (de == 0.0) {
                double s = std::min(base_->dist_to_boundary(x),
                                    loc_rp_ - distance(x, loc_xi_, d_));
                return std::max(lower, s);
            }
            return lower;
        }
    }
    return 0.0;
}

Point Domain::boundary_projection(const Point& x) const {
    switch (shape_) {
        case Shape::Ball: {
            Point v = sub(x, center_);
            double n = norm(v, d_);
            if (n == 0.0) {
                Point p = center_;
                p[0] += radius_;
                return p;
            }
            return add(center_, scale(v, radius_ / n));
        }
        case Shape::Graph: {
            double foot[2];
            nearest_on_graph(psi_, x.data(), x[d_ - 1], d_ - 1, foot);
            Point p = {foot[0], 0, 0};
            if (d_ == 3) p[1] = foot[1];
            p[d_ - 1] = psi_.value(foot, d_ - 1);
            return p;
        }
        case Shape::Localized: {
            double cap = loc_rp_ - distance(x, loc_xi_, d_);
            double face = base_->dist_to_boundary(x);
            if (face <= cap) return base_->boundary_projection(x);
            Point v = sub(x, loc_xi_);
            double n = norm(v, d_);
            if (n == 0.0) {
                Point p = loc_xi_;
                p[0] += loc_rp_;
                return p;
            }
            return add(loc_xi_, scale(v, loc_rp_ / n));
        }
    }
    return x;
}

double Domain::vertical_distance(const Point& xi, const Point& x) const {
    if (distance(x, xi, d_) >= lip_R_)
        throw std::domain_error("vertical_distance: outside the chart radius");
    switch (shape_) {
        case Shape::Ball: {
            // local chart at xi: height h along the inward normal minus the
            // sphere graph R - sqrt(R^2 - |t|^2)
            Point n = scale(sub(center_, xi), 1.0 / radius_);
            Point rel = sub(x, xi);
            double h = dot(rel, n, d_);
            double t2 = std::max(0.0, dot(rel, rel, d_) - h * h);
            return h - (radius_ - std::sqrt(std::max(0.0, radius_ * radius_ - t2)));
        }
        case Shape::Graph:
            return x[d_ - 1] - psi_.value(x.data(), d_ - 1);
        case Shape::Localized:
            return base_->vertical_distance(xi, x);
    }
    return 0.0;
}

// Distance from x to E = {y in D : delta_D(y) >= fillet} cap closed
// B(xi, r' - fillet), via Dykstra alternating projections (exact for the
// convex ball case, a tight estimate for the mildly curved graphs used here).
double Domain::set_dist(const Point& x) const {
    const Domain& D = *base_;
    const double rho = loc_fillet_;
    const double cap = loc_rp_ - rho;
    auto proj_slab = [&](const Point& y) {
        double inside = D.contains(y) ? D.dist_to_boundary(y)
                                      : -D.dist_to_boundary(y);
        if (inside >= rho) return y;
        Point foot = D.boundary_projection(y);
        Point dir = sub(y, foot);
        double n = norm(dir, d_);
        Point normal;
        if (n < 1e-15) {
            // on the boundary: step inward along the projection of a nudge
            Point probe = y;
            probe[d_ - 1] += 1e-6;
            Point f2 = D.boundary_projection(probe);
            normal = sub(probe, f2);
            double nn = norm(normal, d_);
            normal = nn > 0 ? scale(normal, 1.0 / nn) : Point{0, 0, 0};
        } else {
            normal = scale(dir, (inside >= 0.0 ? 1.0 : -1.0) / n);
        }
        return add(foot, scale(normal, rho));
    };
    auto proj_cap = [&](const Point& y) {
        Point v = sub(y, loc_xi_);
        double n = norm(v, d_);
        if (n <= cap) return y;
        return add(loc_xi_, scale(v, cap / n));
    };
    Point z = x;
    Point p = {0, 0, 0}, q = {0, 0, 0};
    for (int it = 0; it < 80; ++it) {
        Point zp = proj_slab(add(z, p));
        p = sub(add(z, p), zp);
        Point zq = proj_cap(add(zp, q));
        q = sub(add(zp, q), zq);
        double moved = distance(z, zq, d_);
        z = zq;
        if (it > 3 && moved < 1e-13) break;
    }
    return distance(x, z, d_);
}

Domain localize(const Domain& D, const Point& xi, double r) {
    if (D.shape() == Domain::Shape::Localized)
        throw std::invalid_argument("localize: already localized");
    if (r > std::min(D.c11_R(), 1.0) || r <= 0.0)
        throw std::invalid_argument("localize: need 0 < r <= min(R,1)");
    Domain out;
    out.shape_ = Domain::Shape::Localized;
    out.d_ = D.dim();
    out.base_ = std::make_shared<Domain>(D);
    out.loc_xi_ = xi;
    out.loc_r_ = r;
    out.loc_rp_ = 0.75 * r;
    out.loc_fillet_ = r / 20.0;
    out.c11_R_ = out.loc_fillet_ / 2.0;
    out.c11_Lambda_ = 2.0 / out.loc_fillet_;
    out.lip_R_ = std::min(out.loc_fillet_ / 2.0, 0.99);
    out.lip_Lambda_ = std::max(D.lip_Lambda(), 1.0);
    out.center_ = xi;
    out.radius_ = out.loc_rp_;
    return out;
}

Point ApproachRegion::normal() const {
    const Domain& D = *domain;
    int d = D.dim();
    if (D.shape() == Domain::Shape::Ball) {
        Point n = sub(D.center(), xi);
        return scale(n, 1.0 / norm(n, d));
    }
    double g[2] = {0, 0};
    D.profile().gradient(xi.data(), d - 1, g);
    Point n = {-g[0], 0, 0};
    if (d == 3) n[1] = -g[1];
    n[d - 1] = 1.0;
    return scale(n, 1.0 / norm(n, d));
}

bool ApproachRegion::in_region(const Point& x, RegionKind which) const {
    const Domain& D = *domain;
    int d = D.dim();
    if (!D.contains(x)) return false;
    double rho = distance(x, xi, d);
    if (rho == 0.0) return false;
    double delta = D.dist_to_boundary(x);
    switch (which) {
        case RegionKind::Stolz:
            return rho <= M * delta &&
                   rho < std::pow(M, -static_cast<double>(d) / gamma);
        case RegionKind::Tprime: {
            double lhs = std::pow(rho, gamma + d) *
                         std::sqrt(phi->phi(1.0 / (rho * rho)));
            double rhs = std::pow(delta, d) *
                         std::sqrt(phi->phi(1.0 / (delta * delta)));
            return lhs <= rhs;
        }
        case RegionKind::T: {
            double lam = 1.0 / (delta * delta);
            double lhs = std::pow(rho, gamma + d) *
                         std::sqrt(phi->phi(1.0 / (rho * rho)));
            double rhs = a * std::pow(delta, d + 2) *
                         std::pow(phi->phi(lam), 1.5) / phi->phi_prime(lam);
            return lhs <= rhs;
        }
    }
    return false;
}

ContainmentReport containment_check(const ApproachRegion& reg, std::uint64_t n,
                                    double sample_radius) {
    ContainmentReport rep;
    const Domain& D = *reg.domain;
    int d = D.dim();
    double rad = sample_radius > 0.0 ? sample_radius : 0.5 * D.lip_R();
    for (std::uint64_t i = 0; i < n; ++i) {
        double buf[3] = {0, 0, 0};
        qmc::ball_point(i, d, rad, buf);
        Point x = reg.xi;
        for (int k = 0; k < d; ++k) x[k] += buf[k];
        rep.checked++;
        if (!D.contains(x)) continue;
        bool s = reg.in_region(x, RegionKind::Stolz);
        bool tp = reg.in_region(x, RegionKind::Tprime);
        bool t = reg.in_region(x, RegionKind::T);
        if (s || tp || t) rep.inside_any++;
        if ((s && !tp) || (tp && !t)) {
            if (rep.violations == 0) rep.first_violation = x;
            rep.violations++;
        }
    }
    return rep;
}

std::vector<CurvePoint> tangential_curve(const ApproachRegion& reg,
                                         const std::vector<double>& radii,
                                         RegionKind kind) {
    const Domain& D = *reg.domain;
    int d = D.dim();
    Point n = reg.normal();
    // fixed tangent direction: the axis least aligned with the normal,
    // orthogonalized against it
    int least = 0;
    for (int k = 1; k < d; ++k)
        if (std::abs(n[k]) < std::abs(n[least])) least = k;
    Point t = {0, 0, 0};
    t[least] = 1.0;
    double tn = dot(t, n, d);
    for (int k = 0; k < d; ++k) t[k] -= tn * n[k];
    t = scale(t, 1.0 / norm(t, d));

    std::vector<CurvePoint> out;
    out.reserve(radii.size());
    for (double r : radii) {
        auto at = [&](double c) {
            double s = std::sqrt(std::max(0.0, 1.0 - c * c));
            Point x = reg.xi;
            for (int k = 0; k < d; ++k) x[k] += r * (c * n[k] + s * t[k]);
            return x;
        };
        CurvePoint cp;
        cp.r = r;
        if (kind == RegionKind::Stolz) {
            cp.x = at(1.0);
            cp.delta = D.dist_to_boundary(cp.x);
            cp.companion = cp.x;
            cp.companion_delta = cp.delta;
            out.push_back(cp);
            continue;
        }
        if (!reg.in_region(at(1.0), kind))
            throw std::runtime_error(
                "tangential_curve: normal point not in region; r too large");
        double lo = 0.0, hi = 1.0;  // predicate false at lo, true at hi
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (lo + hi);
            if (reg.in_region(at(mid), kind))
                hi = mid;
            else
                lo = mid;
        }
        cp.x = at(hi);
        cp.delta = D.dist_to_boundary(cp.x);

        // companion on the same sphere with half the boundary distance
        double target = 0.5 * cp.delta;
        double clo = 0.0, chi_ = hi;
        for (int it = 0; it < 60; ++it) {
            double mid = 0.5 * (clo + chi_);
            if (D.dist_to_boundary(at(mid)) > target &&
                D.contains(at(mid)))
                chi_ = mid;
            else
                clo = mid;
        }
        Point comp = at(chi_);
        for (int guard = 0; guard < 60 && reg.in_region(comp, kind); ++guard) {
            chi_ *= 0.5;
            comp = at(chi_);
        }
        cp.companion = comp;
        cp.companion_delta = D.dist_to_boundary(comp);
        out.push_back(cp);
    }
    return out;
}

} // namespace sblab::geometry
