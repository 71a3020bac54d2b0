#pragma once

#include "sblab/bernstein.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace sblab::geometry {

// Points live in R^d with d in {2,3}; the unused component stays zero so the
// same array type serves both dimensions.
using Point = std::array<double, 3>;

inline double dot(const Point& a, const Point& b, int d) {
    double s = 0;
    for (int i = 0; i < d; ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Point& a, int d) { return std::sqrt(dot(a, a, d)); }

inline Point sub(const Point& a, const Point& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Point add(const Point& a, const Point& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline Point scale(const Point& a, double c) {
    return {a[0] * c, a[1] * c, a[2] * c};
}

inline double distance(const Point& a, const Point& b, int d) {
    Point t = sub(a, b);
    return norm(t, d);
}

// Boundary profile of a graph domain D = {x : x_d > psi(x~)}, clipped to a
// box. The smoothed cone keeps a Lipschitz gradient so the domain stays
// C^{1,1} with explicit characteristics.
struct GraphProfile {
    std::string name = "flat";  // flat | cone | bump
    double slope = 0.0;         // cone: psi = slope*(sqrt(|x~|^2+s^2)-s)
    double smooth = 0.1;        // cone smoothing scale s
    double amp = 0.0;           // bump: psi = amp*exp(-|x~|^2/width^2)
    double width = 1.0;

    static GraphProfile flat();
    static GraphProfile cone(double slope, double smooth = 0.1);
    static GraphProfile bump(double amp, double width);

    double value(const double* xt, int k) const;
    void gradient(const double* xt, int k, double* out) const;
    double lip() const;       // sup |grad psi|
    double grad_lip() const;  // Lipschitz constant of grad psi
};

// Computable open set with an exact or iteratively projected distance
// function. dist_to_boundary is unsigned and valid on both sides of the
// boundary; membership is carried by contains().
class Domain {
public:
    enum class Shape { Ball, Graph, Localized };

    static Domain ball(const Point& center, double radius, int d);
    static Domain graph(GraphProfile psi, int d, double box_half = 10.0);

    int dim() const { return d_; }
    Shape shape() const { return shape_; }

    bool contains(const Point& x) const;
    double dist_to_boundary(const Point& x) const;
    Point boundary_projection(const Point& x) const;

    // rho_xi(x): signed distance along the graph direction in the local
    // chart at the boundary point xi; requires |x - xi| < lip_R().
    double vertical_distance(const Point& xi, const Point& x) const;

    // C^{1,1} characteristics (R, Lambda) and Lipschitz characteristics
    // (R_Lip < 1, Lambda_Lip) per the local-chart definitions.
    double c11_R() const { return c11_R_; }
    double c11_Lambda() const { return c11_Lambda_; }
    double lip_R() const { return lip_R_; }
    double lip_Lambda() const { return lip_Lambda_; }

    const Point& center() const { return center_; }
    double radius() const { return radius_; }
    double box_half() const { return box_half_; }
    const GraphProfile& profile() const { return psi_; }

    // Height of the graph surface above x~ (graph domains only).
    double graph_height(const double* xt) const;

    friend Domain localize(const Domain& D, const Point& xi, double r);

private:
    Domain() = default;

    double graph_dist(const Point& x) const;  // distance to the graph surface
    double set_dist(const Point& x) const;    // distance to the slab E (localized)

    Shape shape_ = Shape::Ball;
    int d_ = 2;
    Point center_ = {0, 0, 0};
    double radius_ = 1.0;
    GraphProfile psi_;
    double box_half_ = 10.0;
    double c11_R_ = 1.0, c11_Lambda_ = 1.0;
    double lip_R_ = 0.99, lip_Lambda_ = 0.0;

    // localized state: U sandwiched between D cap B(xi, r/2) and D cap B(xi, r)
    std::shared_ptr<const Domain> base_;
    Point loc_xi_ = {0, 0, 0};
    double loc_r_ = 0.0;       // outer radius r
    double loc_rp_ = 0.0;      // cap radius r' = 0.75 r
    double loc_fillet_ = 0.0;  // rolling-ball radius r/20
};

// Opened intersection D cap B(xi, 0.75 r): the corner between the boundary
// of D and the sphere is rounded by a rolling ball of radius r/20, which
// keeps the result C^{1,1} and sandwiched between D cap B(xi,r/2) and
// D cap B(xi,r).
Domain localize(const Domain& D, const Point& xi, double r);

enum class RegionKind { T, Tprime, Stolz };

// Tangential approach region at a boundary point: T is the defining
// inequality with the phi-dependent right side; Tprime drops the phi'/phi
// correction; Stolz is the classical cone with aperture M.
struct ApproachRegion {
    const Domain* domain = nullptr;
    const bernstein::BernsteinFunction* phi = nullptr;
    Point xi = {0, 0, 0};
    double gamma = 0.5;
    double a = 1.0;
    double M = 2.0;

    bool in_region(const Point& x, RegionKind which) const;
    // Inward normal direction at xi.
    Point normal() const;
};

struct ContainmentReport {
    std::uint64_t checked = 0;
    std::uint64_t inside_any = 0;
    std::uint64_t violations = 0;
    Point first_violation = {0, 0, 0};
    bool ok() const { return violations == 0; }
};

// Samples points near xi and asserts the chain Stolz => Tprime => T
// pointwise; sampling radius defaults to half the Lipschitz chart radius.
ContainmentReport containment_check(const ApproachRegion& reg, std::uint64_t n,
                                    double sample_radius = 0.0);

struct CurvePoint {
    Point x = {0, 0, 0};          // on the region boundary, |x - xi| = r
    Point companion = {0, 0, 0};  // same sphere, delta halved, outside T
    double r = 0.0;
    double delta = 0.0;           // delta_D at x
    double companion_delta = 0.0;
};

// For each radius, the point of the sphere |x-xi| = r on the boundary of the
// region (bisection in the polar angle toward the tangent plane), plus a
// companion with delta_D halved that violates the region inequality. With
// kind == Stolz the points follow the inward normal ray instead.
std::vector<CurvePoint> tangential_curve(const ApproachRegion& reg,
                                         const std::vector<double>& radii,
                                         RegionKind kind = RegionKind::T);

} // namespace sblab::geometry
