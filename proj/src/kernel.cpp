#include "dbar2/kernel.hpp"
#include <algorithm>
#include <cmath>
#include "dbar2/rng.hpp"

namespace dbar2 {

double cutoff_chi(double dist, double epsilon) {
    const double s = (dist - 0.5 * epsilon) / (0.5 * epsilon);
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

KernelBundle eval_kernel(const DomainSpec& d, const ComplexPoint& z, const ComplexPoint& zeta) {
    const auto g = grad_rho(d, zeta);
    const C d1 = zeta.z1 - z.z1, d2 = zeta.z2 - z.z2;
    KernelBundle k;
    k.phi = 2.0 * (g[0] * d1 + g[1] * d2);
    k.chi = cutoff_chi(std::sqrt(std::norm(d1) + std::norm(d2)), d.epsilon);
    k.phi1 = k.chi * g[0] + (1.0 - k.chi) * std::conj(d1);
    k.phi2 = k.chi * g[1] + (1.0 - k.chi) * std::conj(d2);
    k.phi_sharp = k.phi1 * d1 + k.phi2 * d2;
    return k;
}

double taylor_gap(const DomainSpec& d, C z1, C zeta1) {
    const C dP = grad_rho(d, {zeta1, C(1.0, 0.0)})[0];
    return P_of_z1(d, z1) - P_of_z1(d, zeta1) - 2.0 * std::real(dP * (z1 - zeta1));
}

namespace {

// profile-slope lower bound on the gap, the workhorse of the M(z) estimates
double chain_lower(const DomainSpec& d, C z1, C zeta1) {
    if (d.shape == DomainShape::Modulus)
        return G_ext_prime(d, std::norm(zeta1)) * std::norm(z1 - zeta1);
    const double x = z1.real(), xi = zeta1.real();
    return G_ext_prime(d, xi * xi) * (x - xi) * (x - xi);
}

// z in the closed domain with |z - zeta| <= eps, biased toward zeta
bool draw_near(const DomainSpec& d, Rng& rng, const ComplexPoint& zeta, double eps,
               ComplexPoint& out) {
    for (int k = 0; k < 64; ++k) {
        const C u1(rng.normal(), rng.normal()), u2(rng.normal(), rng.normal());
        const double n = std::sqrt(std::norm(u1) + std::norm(u2));
        if (n < 1e-12) continue;
        const double r = eps * std::pow(rng.uniform(), 1.5);
        const ComplexPoint z{zeta.z1 + (r / n) * u1, zeta.z2 + (r / n) * u2};
        if (rho(d, z) <= 1e-12) {
            out = z;
            return true;
        }
    }
    return false;
}

// boundary points biased toward the flat point at the origin
std::vector<BoundaryPoint> near_origin_boundary(const DomainSpec& d, int n, std::uint64_t seed) {
    Rng rng(seed ^ 0xd1b54a32d192ed03ull);
    const double r1 = 0.8 * std::min(std::sqrt(d.rim_sq), 0.5 * d.delta);
    std::vector<BoundaryPoint> out;
    out.reserve(n);
    int guard = 0;
    while ((int)out.size() < n && ++guard < 100 * n + 1000) {
        double x1, y1;
        if (d.shape == DomainShape::Modulus) {
            const double r = r1 * std::sqrt(rng.uniform()), a = rng.uniform(0.0, 2.0 * PI);
            x1 = r * std::cos(a);
            y1 = r * std::sin(a);
        } else {
            x1 = rng.uniform(-r1, r1);
            y1 = rng.uniform(-0.5 * d.delta, 0.5 * d.delta);
        }
        const double theta = d.r_model == RModel::Ball ? PI + rng.uniform(-0.6, 0.6)
                                                       : rng.uniform(-0.5, 0.5) * d.delta;
        out.push_back(boundary_chart(d, x1, y1, theta));
    }
    return out;
}

} // namespace

Report verify_lemma21(const DomainSpec& d, int n_samples, std::uint64_t seed) {
    Report rep;
    rep.suite = "lemma21";
    double eps = d.epsilon;
    int halvings = 0;
    for (;;) {
        Rng rng(seed + 0x100 * halvings);
        auto zetas = sample_boundary(d, (n_samples + 1) / 2, seed + halvings);
        for (auto& b : near_origin_boundary(d, n_samples - (int)zetas.size(), seed + halvings))
            zetas.push_back(b);

        double worst = 0.0;
        double worst_flat = 1e300, worst_chain = 1e300, worst_pos = 1e300, worst_sharp = 1e300;
        double c_best = 1e300;
        int pairs = 0, flat_pairs = 0, convex_pairs = 0;
        nlohmann::json worst_at;

        for (std::size_t i = 0; i < zetas.size(); ++i) {
            const ComplexPoint& zeta = zetas[i].point;
            ComplexPoint z;
            if (i % 16 == 0)
                z = zeta;  // equality case of the inequality
            else if (!draw_near(d, rng, zeta, eps, z))
                continue;
            ++pairs;

            const KernelBundle k = eval_kernel(d, z, zeta);
            const double lhs = std::real(k.phi) + rho(d, z);
            const double gap = taylor_gap(d, z.z1, zeta.z1);
            const double chain = chain_lower(d, z.z1, zeta.z1);
            const double d2 = abs2(z - zeta);

            // the tube realizations are flat beyond the model region, so the
            // strictly convex branch is only classified for the modulus shape
            const bool flat =
                d.shape == DomainShape::RealPart || abs2(zeta) <= d.delta * d.delta;
            double viol = std::max(chain - lhs, std::abs(rho(d, z)) - std::real(k.phi));
            if (flat) {
                ++flat_pairs;
                viol = std::max(viol, gap - lhs);
                worst_flat = std::min(worst_flat, lhs - gap);
            } else {
                ++convex_pairs;
                if (d2 > 1e-16) c_best = std::min(c_best, lhs / d2);
            }
            worst_chain = std::min(worst_chain, lhs - chain);
            worst_pos = std::min(worst_pos, std::real(k.phi) - std::abs(rho(d, z)));
            if (d2 <= 0.25 * eps * eps) {
                // Phi# = Phi/2 on the plateau, so the support bound holds at half strength
                const double sm = std::real(k.phi_sharp) - 0.5 * (std::abs(rho(d, z)) + gap);
                worst_sharp = std::min(worst_sharp, sm);
                viol = std::max(viol, -sm);
            }
            if (viol > worst) {
                worst = viol;
                worst_at = {{"violation", viol},
                            {"z", {z.z1.real(), z.z1.imag(), z.z2.real(), z.z2.imag()}},
                            {"zeta", {zeta.z1.real(), zeta.z1.imag(), zeta.z2.real(), zeta.z2.imag()}}};
            }
        }

        const bool convex_ok = d.r_model != RModel::Ball || convex_pairs == 0 || c_best > 0.0;
        rep.pass = worst <= 1e-10 && convex_ok;
        rep.worst_case = worst_at.is_null() ? nlohmann::json{{"violation", worst}} : worst_at;
        rep.constants = {{"epsilon", eps},
                         {"halvings", halvings},
                         {"pairs", pairs},
                         {"flat_pairs", flat_pairs},
                         {"convex_pairs", convex_pairs},
                         {"worst_flat_margin", worst_flat},
                         {"worst_chain_margin", worst_chain},
                         {"worst_positivity_margin", worst_pos},
                         {"worst_sharp_half_margin", worst_sharp}};
        if (convex_pairs > 0) rep.constants["c_best"] = c_best;
        if (rep.pass || halvings >= 4) return rep;
        eps *= 0.5;
        ++halvings;
    }
}

Report verify_holomorphy(const DomainSpec& d, int n_samples, std::uint64_t seed) {
    Report rep;
    rep.suite = "holomorphy";
    const double eps = d.epsilon, h = 1e-5;
    Rng rng(seed);
    const auto zetas = sample_boundary(d, n_samples, seed);

    double max_dbar = 0.0, far_numerator = 0.0, mixed_numerator = 0.0;
    nlohmann::json worst_at;
    for (const auto& b : zetas) {
        const ComplexPoint& zeta = b.point;
        // center of the plateau ball, stencil stays inside chi = 1
        C u1(rng.normal(), rng.normal()), u2(rng.normal(), rng.normal());
        const double n = std::sqrt(std::norm(u1) + std::norm(u2));
        if (n < 1e-12) continue;
        const double r = (0.5 * eps - 4.0 * h) * rng.uniform();
        const ComplexPoint z{zeta.z1 + (r / n) * u1, zeta.z2 + (r / n) * u2};

        for (int field = 0; field < 3; ++field) {
            auto at = [&](double dx1, double dy1, double dx2, double dy2) {
                const KernelBundle k =
                    eval_kernel(d, {z.z1 + C(dx1, dy1), z.z2 + C(dx2, dy2)}, zeta);
                return field == 0 ? k.phi_sharp : field == 1 ? k.phi1 : k.phi2;
            };
            // dbar_j = (d/dx_j + i d/dy_j) / 2 on complex-valued fields
            const C r1 = 0.5 * ((at(h, 0, 0, 0) - at(-h, 0, 0, 0)) / (2 * h) +
                                C(0, 1) * (at(0, h, 0, 0) - at(0, -h, 0, 0)) / (2 * h));
            const C r2 = 0.5 * ((at(0, 0, h, 0) - at(0, 0, -h, 0)) / (2 * h) +
                                C(0, 1) * (at(0, 0, 0, h) - at(0, 0, 0, -h)) / (2 * h));
            const double m = std::max(std::abs(r1), std::abs(r2));
            if (m > max_dbar) {
                max_dbar = m;
                worst_at = {{"dbar_residual", m}, {"field", field}};
            }
        }

        // chi = 0: numerator is antisymmetric in two conjugate factors, exactly zero
        const double rf = rng.uniform(eps, 2.0 * eps);
        const ComplexPoint zf{zeta.z1 + (rf / n) * u1, zeta.z2 + (rf / n) * u2};
        const KernelBundle kf = eval_kernel(d, zf, zeta);
        far_numerator = std::max(far_numerator,
                                 std::abs(kf.phi1 * std::conj(zeta.z2 - zf.z2) -
                                          kf.phi2 * std::conj(zeta.z1 - zf.z1)));

        // sanity: the numerator is not identically zero in the mixed region
        const double rm = rng.uniform(0.6 * eps, 0.9 * eps);
        const ComplexPoint zm{zeta.z1 + (rm / n) * u1, zeta.z2 + (rm / n) * u2};
        const KernelBundle km = eval_kernel(d, zm, zeta);
        mixed_numerator = std::max(mixed_numerator,
                                   std::abs(km.phi1 * std::conj(zeta.z2 - zm.z2) -
                                            km.phi2 * std::conj(zeta.z1 - zm.z1)));
    }

    rep.pass = max_dbar <= 1e-6 && far_numerator <= 1e-13;
    rep.worst_case = worst_at.is_null() ? nlohmann::json::object() : worst_at;
    rep.constants = {{"epsilon", eps},
                     {"samples", (int)zetas.size()},
                     {"max_dbar_residual", max_dbar},
                     {"far_numerator_max", far_numerator},
                     {"mixed_numerator_max", mixed_numerator}};
    return rep;
}

} // namespace dbar2
