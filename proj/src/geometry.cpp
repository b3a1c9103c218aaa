#include "dbar2/geometry.hpp"
#include <cmath>
#include <stdexcept>
#include "dbar2/rng.hpp"

namespace dbar2 {

DomainSpec DomainSpec::make(DomainShape shape, TypeProfile profile, RModel r_model) {
    DomainSpec d;
    d.shape = shape;
    d.r_model = r_model;
    d.tj = profile.t_max;
    d.Fj = eval_F(profile, d.tj);
    d.Fpj = eval_F_prime(profile, d.tj);
    d.kappa = std::max(eval_F_second(profile, d.tj), 0.0);
    if (!(d.Fpj > 0.0)) throw std::domain_error("profile slope vanishes at t_max");
    if (d.Fj >= 1.0) {
        d.rim_sq = eval_Fstar(profile, 1.0);
    } else {
        // root of Fj + Fpj s + kappa/2 s^2 = 1, stable as kappa -> 0
        const double c = 1.0 - d.Fj;
        const double s = 2.0 * c / (d.Fpj + std::sqrt(d.Fpj * d.Fpj + 2.0 * d.kappa * c));
        d.rim_sq = d.tj + s;
    }
    d.profile = std::move(profile);
    return d;
}

double G_ext(const DomainSpec& d, double t) {
    if (t < 0.0) throw std::domain_error("G needs t >= 0");
    if (t <= d.tj) return eval_F(d.profile, t);
    const double s = t - d.tj;
    return d.Fj + d.Fpj * s + 0.5 * d.kappa * s * s;
}

double G_ext_prime(const DomainSpec& d, double t) {
    if (t < 0.0) throw std::domain_error("G needs t >= 0");
    if (t <= d.tj) return eval_F_prime(d.profile, t);
    return d.Fpj + d.kappa * (t - d.tj);
}

double G_ext_second(const DomainSpec& d, double t) {
    if (t < 0.0) throw std::domain_error("G needs t >= 0");
    if (t <= d.tj) return eval_F_second(d.profile, t);
    return d.kappa;
}

double P_of_z1(const DomainSpec& d, C z1) {
    if (d.shape == DomainShape::Modulus) return G_ext(d, std::norm(z1));
    const double x = z1.real();
    return G_ext(d, x * x);
}

double rho(const DomainSpec& d, const ComplexPoint& z) {
    const double P = P_of_z1(d, z.z1);
    if (d.r_model == RModel::Ball) return P + std::norm(z.z2 - 1.0) - 1.0;
    return P - z.z2.real();
}

std::array<C, 2> grad_rho(const DomainSpec& d, const ComplexPoint& z) {
    C g1;
    if (d.shape == DomainShape::Modulus) {
        g1 = G_ext_prime(d, std::norm(z.z1)) * std::conj(z.z1);
    } else {
        const double x = z.z1.real();
        g1 = C(G_ext_prime(d, x * x) * x, 0.0);
    }
    const C g2 = d.r_model == RModel::Ball ? std::conj(z.z2 - 1.0) : C(-0.5, 0.0);
    return {g1, g2};
}

double distance_proxy(const DomainSpec& d, const ComplexPoint& z) {
    const auto g = grad_rho(d, z);
    const double n = 2.0 * std::sqrt(std::norm(g[0]) + std::norm(g[1]));
    if (n < 1e-12)
        throw std::domain_error("distance proxy degenerates where grad rho = 0");
    return std::abs(rho(d, z)) / n;
}

BoundaryPoint boundary_chart(const DomainSpec& d, double x1, double y1, double theta) {
    BoundaryPoint b;
    b.x1 = x1;
    b.y1 = y1;
    b.theta = theta;
    const C z1(x1, y1);
    const double P = P_of_z1(d, z1);
    double grad_sq; // |grad_{(x1,y1)} P|^2
    if (d.shape == DomainShape::Modulus) {
        const double q = std::norm(z1);
        const double Gp = G_ext_prime(d, q);
        grad_sq = 4.0 * Gp * Gp * q;
    } else {
        const double Gp = G_ext_prime(d, x1 * x1);
        grad_sq = 4.0 * Gp * Gp * x1 * x1;
    }
    if (d.r_model == RModel::Ball) {
        if (P > 1.0 + 1e-12)
            throw std::domain_error("chart parameters outside the z1 shadow");
        const double R = std::sqrt(std::max(1.0 - P, 0.0));
        b.point = {z1, 1.0 + R * C(std::cos(theta), std::sin(theta))};
        b.surface_density = std::sqrt(R * R + 0.25 * grad_sq);
    } else {
        b.point = {z1, C(P, theta)};
        b.surface_density = std::sqrt(1.0 + grad_sq);
    }
    return b;
}

HChartPoint h_chart(const DomainSpec& d, double p1, double p2, double p3) {
    if (d.r_model != RModel::Ball)
        throw std::domain_error("boundary quadrature charts need the Ball model");
    HChartPoint out;
    const C eitheta(std::cos(p3), std::sin(p3));
    if (d.shape == DomainShape::Modulus) {
        const double a = p1, q = a * a;
        const double G = G_ext(d, q), Gp = G_ext_prime(d, q);
        const double R = std::sqrt(std::max(1.0 - G, 0.0));
        const C eib(std::cos(p2), std::sin(p2));
        out.zeta = {a * eib, 1.0 + R * eitheta};
        out.J1 = -2.0 * a * R * eitheta;
        out.J2 = 2.0 * q * Gp * eib; // RR' = -a G' cancels the rim singularity
    } else {
        const double x = p1;
        const double G = G_ext(d, x * x), Gp = G_ext_prime(d, x * x);
        const double R = std::sqrt(std::max(1.0 - G, 0.0));
        out.zeta = {C(x, p2 * d.y_box), 1.0 + R * eitheta};
        out.J1 = -2.0 * d.y_box * R * eitheta;
        out.J2 = C(2.0 * d.y_box * x * Gp, 0.0);
    }
    return out;
}

std::array<std::array<double, 2>, 3> h_chart_box(const DomainSpec& d) {
    const double r = std::sqrt(d.rim_sq);
    if (d.shape == DomainShape::Modulus)
        return {{{0.0, r}, {0.0, 2.0 * PI}, {0.0, 2.0 * PI}}};
    return {{{-r, r}, {-1.0, 1.0}, {0.0, 2.0 * PI}}};
}

double G_ext_inv(const DomainSpec& d, double s) {
    if (s <= d.Fj) return eval_Fstar(d.profile, s);
    // closed-form inverse of the quadratic extension Fj + Fpj u + kappa/2 u^2
    const double c = s - d.Fj;
    const double u =
        2.0 * c / (d.Fpj + std::sqrt(d.Fpj * d.Fpj + 2.0 * d.kappa * c));
    return d.tj + u;
}

// the atlas splits the boundary at G = 1/2: below it the disc chart is
// smooth, above it the cap chart absorbs the sqrt(1 - G) rim seam
constexpr double kAtlasSplit = 0.5;

HChartPoint h_chart_cap(const DomainSpec& d, double p1, double p2, double p3) {
    if (d.r_model != RModel::Ball || d.shape != DomainShape::Modulus)
        throw std::domain_error("cap chart needs the Modulus shape on the Ball model");
    const double R = p1;
    const double q = G_ext_inv(d, 1.0 - R * R);
    const double a = std::sqrt(q);
    const C eib(std::cos(p2), std::sin(p2));
    const C eitheta(std::cos(p3), std::sin(p3));
    HChartPoint out;
    out.zeta = {a * eib, 1.0 + R * eitheta};
    const double Qp = 1.0 / G_ext_prime(d, q); // d(a^2)/dG
    out.J1 = -2.0 * R * R * Qp * eitheta;
    out.J2 = 2.0 * a * R * eib;
    return out;
}

std::array<std::array<double, 2>, 3> h_chart_cap_box(const DomainSpec& d) {
    return {{{0.0, std::sqrt(1.0 - kAtlasSplit)}, {0.0, 2.0 * PI}, {0.0, 2.0 * PI}}};
}

double h_atlas_side_top(const DomainSpec& d) {
    return std::sqrt(G_ext_inv(d, kAtlasSplit));
}

HChartPoint h_chart_apex(const DomainSpec& d, double p1, double p2, double p3) {
    if (d.r_model != RModel::Ball || d.shape != DomainShape::Modulus)
        throw std::domain_error("apex chart needs the Modulus shape on the Ball model");
    const double q = p1 * p1 + p2 * p2;
    const double G = G_ext(d, q);
    if (G > 1.0 + 1e-12)
        throw std::domain_error("apex chart parameters outside the z1 shadow");
    const double R = std::sqrt(std::max(1.0 - G, 0.0));
    const C eitheta(std::cos(p3), std::sin(p3));
    HChartPoint out;
    out.zeta = {C(p1, p2), 1.0 + R * eitheta};
    out.J1 = -2.0 * R * eitheta;
    out.J2 = 2.0 * G_ext_prime(d, q) * C(p1, p2);
    return out;
}

std::array<std::array<double, 2>, 4> bounding_box(const DomainSpec& d) {
    const double r = std::sqrt(d.rim_sq);
    const double y = d.shape == DomainShape::Modulus ? r : d.y_box;
    if (d.r_model == RModel::Ball)
        return {{{-r, r}, {-y, y}, {0.0, 2.0}, {-1.0, 1.0}}};
    return {{{-r, r}, {-y, y}, {0.0, 2.0}, {-1.0, 1.0}}}; // HalfSpace: capped slab
}

std::vector<ComplexPoint> sample_interior(const DomainSpec& d, int n, std::uint64_t seed) {
    Rng rng(seed);
    const auto box = bounding_box(d);
    std::vector<ComplexPoint> out;
    out.reserve(n);
    long attempts = 0;
    const long cap = 200000L + 20000L * n;
    while ((int)out.size() < n) {
        if (++attempts > cap)
            throw std::runtime_error("interior sampler acceptance collapsed");
        const ComplexPoint z{C(rng.uniform(box[0][0], box[0][1]), rng.uniform(box[1][0], box[1][1])),
                             C(rng.uniform(box[2][0], box[2][1]), rng.uniform(box[3][0], box[3][1]))};
        if (rho(d, z) < 0.0) out.push_back(z);
    }
    return out;
}

std::vector<BoundaryPoint> sample_boundary(const DomainSpec& d, int n, std::uint64_t seed) {
    Rng rng(seed + 0x9e3779b97f4a7c15ULL);
    const auto box = bounding_box(d);
    std::vector<BoundaryPoint> out;
    out.reserve(n);
    long attempts = 0;
    const long cap = 200000L + 20000L * n;
    while ((int)out.size() < n) {
        if (++attempts > cap)
            throw std::runtime_error("boundary sampler acceptance collapsed");
        const double x1 = rng.uniform(box[0][0], box[0][1]);
        const double y1 = rng.uniform(box[1][0], box[1][1]);
        const double theta = d.r_model == RModel::Ball ? rng.uniform(0.0, 2.0 * PI)
                                                       : rng.uniform(-1.0, 1.0);
        if (P_of_z1(d, C(x1, y1)) > 1.0 - 1e-14 && d.r_model == RModel::Ball) continue;
        out.push_back(boundary_chart(d, x1, y1, theta));
    }
    return out;
}

} // namespace dbar2
