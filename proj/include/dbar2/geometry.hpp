#pragma once
// Convex model domains in C^2 built from a type profile.
//
// Defining function: rho(z) = P(z1) + r(z2) with
//   P(z1) = G(|z1|^2)   (Modulus shape)  or  G((Re z1)^2)  (RealPart shape),
//   r(z2) = |z2 - 1|^2 - 1  (Ball model)  or  -Re z2  (HalfSpace model).
// G extends the profile F past its certified threshold tj by the tangent
// parabola with curvature max(F''(tj), 0), which keeps G convex and G(t)/t
// nondecreasing on all of [0, inf). The RealPart shape is an unbounded tube
// in Im z1; samplers and quadrature truncate it to |Im z1| <= y_box.
#include <array>
#include <cstdint>
#include <vector>
#include "dbar2/complex2.hpp"
#include "dbar2/profiles.hpp"

namespace dbar2 {

enum class DomainShape { Modulus, RealPart };
enum class RModel { Ball, HalfSpace };

struct DomainSpec {
    DomainShape shape = DomainShape::Modulus;
    TypeProfile profile;
    RModel r_model = RModel::Ball;
    double epsilon = 0.25; // kernel cutoff scale
    double delta = 0.5;    // radius of the degenerate-circle exclusion ball
    double y_box = 2.0;    // RealPart working halfwidth in Im z1

    // extension cache: G = F on [0, tj], tangent parabola beyond
    double tj = 1.0, Fj = 1.0, Fpj = 1.0, kappa = 0.0;
    double rim_sq = 1.0; // G(rim_sq) = 1: z1 shadow is |z1| (or |x1|) < sqrt(rim_sq)

    static DomainSpec make(DomainShape shape, TypeProfile profile,
                           RModel r_model = RModel::Ball);
};

double G_ext(const DomainSpec& d, double t);
double G_ext_prime(const DomainSpec& d, double t);
double G_ext_second(const DomainSpec& d, double t);

double P_of_z1(const DomainSpec& d, C z1);
double rho(const DomainSpec& d, const ComplexPoint& z);
// Wirtinger gradient (d rho/d z1, d rho/d z2)
std::array<C, 2> grad_rho(const DomainSpec& d, const ComplexPoint& z);

// |rho| / |grad rho|_{R^4}; a lower bound for the boundary distance since rho
// is convex. Throws where the gradient degenerates (the Ball center (0,1)).
double distance_proxy(const DomainSpec& d, const ComplexPoint& z);

struct BoundaryPoint {
    double x1 = 0.0, y1 = 0.0, theta = 0.0;
    ComplexPoint point;
    double surface_density = 0.0; // area element of the (x1,y1,theta) chart
};

// Ball model: z2 = 1 + sqrt(1 - P) e^{i theta}; HalfSpace: z2 = P + i theta.
BoundaryPoint boundary_chart(const DomainSpec& d, double x1, double y1, double theta);

// Boundary chart adapted to the shape's symmetry, with the closed-form
// pullback coefficients of dconj(zeta_j) ^ dzeta_1 ^ dzeta_2 (Ball model only).
// Modulus params (a, b, theta): zeta1 = a e^{ib}; RealPart params (x, v, theta):
// zeta1 = x + i v y_box. Both: zeta2 = 1 + R e^{i theta}, R = sqrt(1 - P).
struct HChartPoint {
    ComplexPoint zeta;
    C J1, J2;
};
HChartPoint h_chart(const DomainSpec& d, double p1, double p2, double p3);
std::array<std::array<double, 2>, 3> h_chart_box(const DomainSpec& d);

// q solving G_ext(q) = s, exact through the profile inverse below Fj and the
// quadratic extension above it.
double G_ext_inv(const DomainSpec& d, double s);

// Rim cap chart (Modulus shape, Ball model): params (R, b, theta) with
// zeta1 = a(R) e^{ib}, zeta2 = 1 + R e^{i theta} and G_ext(a(R)^2) = 1 - R^2,
// so the rim R -> 0 is a smooth interior face instead of a sqrt seam. Covers
// G >= 1/2; pairs with h_chart restricted to a <= h_atlas_side_top to form an
// atlas of the boundary.
HChartPoint h_chart_cap(const DomainSpec& d, double p1, double p2, double p3);
std::array<std::array<double, 2>, 3> h_chart_cap_box(const DomainSpec& d);
double h_atlas_side_top(const DomainSpec& d);

// Cartesian disc chart (Modulus shape, Ball model): params (xi, eta, theta),
// zeta1 = xi + i eta, zeta2 = 1 + R e^{i theta}. Carries no angular factor in
// zeta1, so quadrature near the disc center sees no phase cancellation.
HChartPoint h_chart_apex(const DomainSpec& d, double p1, double p2, double p3);

// Axis-aligned box that contains the working region (truncated for RealPart).
std::array<std::array<double, 2>, 4> bounding_box(const DomainSpec& d);

std::vector<ComplexPoint> sample_interior(const DomainSpec& d, int n, std::uint64_t seed);
std::vector<BoundaryPoint> sample_boundary(const DomainSpec& d, int n, std::uint64_t seed);

} // namespace dbar2
