#include "dbar2/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "dbar2/kernel.hpp"

namespace dbar2 {
namespace {

// Normalization of the two raw integrals against plain Lebesgue measure (K)
// and chart-parameter measure (H). Powers of pi follow the Cauchy-Fantappie
// normalization in two variables. The K sign is pinned by potential
// reproduction: for a compactly supported potential the volume term alone
// must return the potential at every interior point. The H sign is pinned by
// the residual test on dzbar2, which K alone solves only up to a boundary
// term; H must supply exactly that term with the sign below.
constexpr double cK = -1.0 / (PI * PI);
constexpr double cH = -1.0 / (4.0 * PI * PI);

LeraySection resolve_section(const DomainSpec& d, const SolveOptions& opt) {
    if (opt.section != LeraySection::Auto) return opt.section;
    const bool bounded =
        d.shape == DomainShape::Modulus && d.r_model == RModel::Ball;
    return bounded ? LeraySection::Global : LeraySection::Mixed;
}

bool in_box(const std::array<std::array<double, 2>, 4>& b,
            const ComplexPoint& z) {
    return z.z1.real() >= b[0][0] && z.z1.real() <= b[0][1] &&
           z.z1.imag() >= b[1][0] && z.z1.imag() <= b[1][1] &&
           z.z2.real() >= b[2][0] && z.z2.real() <= b[2][1] &&
           z.z2.imag() >= b[3][0] && z.z2.imag() <= b[3][1];
}

QuadratureResult eval_K_polar(const DomainSpec& d, const OneForm& form,
                              const ComplexPoint& z, double tol,
                              const SolveOptions& opt) {
    const auto box = bounding_box(d);
    if (!in_box(box, z))
        throw std::domain_error("eval_K: z outside the working box");
    double rmax = 0.0;
    for (int c = 0; c < 16; ++c) {
        const ComplexPoint corner{C(box[0][c & 1], box[1][(c >> 1) & 1]),
                                  C(box[2][(c >> 2) & 1], box[3][(c >> 3) & 1])};
        rmax = std::max(rmax, dist(corner, z));
    }
    // the working region is convex, so each ray from z crosses its boundary
    // once; scaling r by that crossing removes both the singularity (the r^3
    // volume factor cancels the kernel decay) and the domain indicator
    auto ray_exit = [&](C u1, C u2) {
        auto gap = [&](double r) {
            const ComplexPoint zeta{z.z1 + r * u1, z.z2 + r * u2};
            double g = rho(d, zeta);
            const double co[4] = {zeta.z1.real(), zeta.z1.imag(),
                                  zeta.z2.real(), zeta.z2.imag()};
            for (int i = 0; i < 4; ++i)
                g = std::max(g, std::max(box[i][0] - co[i], co[i] - box[i][1]));
            return g;
        };
        double lo = 0.0, glo = gap(0.0);
        double hi = rmax, ghi = std::max(gap(rmax), 0.0);
        for (int i = 0; i < 60 && hi - lo > 1e-11 * rmax; ++i) {
            // Illinois step with a bisection guard on stagnation
            double r = ghi > glo ? lo + (hi - lo) * (-glo) / (ghi - glo)
                                 : 0.5 * (lo + hi);
            const double w = hi - lo;
            if (r - lo < 0.01 * w || hi - r < 0.01 * w) r = 0.5 * (lo + hi);
            const double gr = gap(r);
            if (gr < 0.0) {
                lo = r;
                glo = gr;
                ghi *= 0.5;
            } else {
                hi = r;
                ghi = gr;
                glo *= 0.5;
            }
        }
        return 0.5 * (lo + hi);
    };
    // angular nodes repeat across the radial axis, so the exit radius is
    // memoized per direction; values are pure, concurrent recompute is
    // benign, and the map is sharded so worker threads rarely share a lock
    struct RayCache {
        struct KeyHash {
            std::size_t operator()(const std::array<double, 3>& key) const {
                std::size_t h = 0x9e3779b97f4a7c15ULL;
                for (const double v : key) {
                    std::uint64_t bits;
                    std::memcpy(&bits, &v, sizeof bits);
                    h ^= bits + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
                }
                return h;
            }
        };
        struct Shard {
            std::unordered_map<std::array<double, 3>, double, KeyHash> m;
            std::mutex mu;
        };
        std::array<Shard, 64> shards;
        Shard& at(const std::array<double, 3>& key) {
            return shards[KeyHash{}(key) & 63];
        }
    };
    auto cache = std::make_shared<RayCache>();
    const C rot = std::polar(1.0, opt.mesh_rotation);
    PanelProblem<4> p;
    p.box = {{{0.0, 1.0}, {0.0, PI}, {0.0, PI}, {0.0, 2.0 * PI}}};
    p.f = [&, ray_exit, cache](const std::array<double, 4>& x) -> C {
        const double s1 = std::sin(x[1]), c1 = std::cos(x[1]);
        const double s2 = std::sin(x[2]), c2 = std::cos(x[2]);
        const double s3 = std::sin(x[3]), c3 = std::cos(x[3]);
        const C u1 = C(c1, s1 * c2) * rot;
        const C u2(s1 * s2 * c3, s1 * s2 * s3);
        const std::array<double, 3> key{x[1], x[2], x[3]};
        auto& shard = cache->at(key);
        double R;
        {
            std::lock_guard<std::mutex> g(shard.mu);
            auto it = shard.m.find(key);
            R = it == shard.m.end() ? -1.0 : it->second;
        }
        if (R < 0.0) {
            R = ray_exit(u1, u2);
            std::lock_guard<std::mutex> g(shard.mu);
            shard.m.emplace(key, R);
        }
        const ComplexPoint zeta{z.z1 + x[0] * R * u1, z.z2 + x[0] * R * u2};
        const C num = form.phi1(zeta) * std::conj(u1) +
                      form.phi2(zeta) * std::conj(u2);
        return num * (R * s1 * s1 * s2);
    };
    PanelPolicy pol;
    pol.max_panels = opt.max_panels;
    // the substituted integrand is smooth, so high-order panels pay for
    // themselves; the embedded pair keeps one order of gap for the estimate
    pol.nhi = 5;
    pol.nlo = 4;
    QuadratureResult res = integrate_panels(p, tol / std::abs(cK), pol);
    res.value *= cK;
    res.err_estimate *= std::abs(cK);
    return res;
}

QuadratureResult eval_K_literal(const DomainSpec& d, const OneForm& form,
                                const ComplexPoint& z, double tol,
                                const SolveOptions& opt) {
    const auto box = bounding_box(d);
    const double supn = std::max(form.sup_norm, 1e-12);
    // the excluded core ball contributes at most 2 pi^2 sqrt2 |phi| h_core
    const double raw_tol = tol / std::abs(cK);
    const double core_rate = 2.0 * PI * PI * std::sqrt(2.0) * supn;
    const double h_core = raw_tol / (10.0 * core_rate);
    PanelProblem<4> p;
    p.box = box;
    p.f = [&](const std::array<double, 4>& x) -> C {
        const ComplexPoint zeta{C(x[0], x[1]), C(x[2], x[3])};
        if (!(rho(d, zeta) < 0.0)) return C(0.0, 0.0);
        const C d1 = zeta.z1 - z.z1, d2 = zeta.z2 - z.z2;
        const double r2 = std::norm(d1) + std::norm(d2);
        if (r2 <= h_core * h_core) return C(0.0, 0.0);
        const C num = form.phi1(zeta) * std::conj(d1) +
                      form.phi2(zeta) * std::conj(d2);
        return num / (r2 * r2);
    };
    p.dist = [z](const std::array<double, 4>& x) {
        return dist({C(x[0], x[1]), C(x[2], x[3])}, z);
    };
    PanelPolicy pol;
    pol.max_panels = opt.max_panels;
    QuadratureResult res = integrate_panels(p, raw_tol, pol);
    res.value *= cK;
    res.err_estimate = res.err_estimate * std::abs(cK) + tol / 10.0;
    return res;
}

} // namespace

QuadratureResult eval_K(const DomainSpec& d, const OneForm& form,
                        const ComplexPoint& z, double tol,
                        const SolveOptions& opt) {
    if (!(rho(d, z) < 0.0))
        throw std::domain_error("eval_K: z is not interior");
    return opt.k_reference ? eval_K_literal(d, form, z, tol, opt)
                           : eval_K_polar(d, form, z, tol, opt);
}

QuadratureResult eval_H(const DomainSpec& d, const OneForm& form,
                        const ComplexPoint& z, double tol,
                        const SolveOptions& opt) {
    if (!(rho(d, z) < 0.0))
        throw std::domain_error("eval_H: z is not interior");
    if (d.r_model != RModel::Ball)
        throw std::invalid_argument(
            "eval_H: boundary quadrature needs the Ball model");
    const bool mixed = resolve_section(d, opt) == LeraySection::Mixed;
    if (!mixed && d.shape != DomainShape::Modulus)
        throw std::invalid_argument(
            "eval_H: global section needs the bounded realization");

    const double eps = d.epsilon;
    const double eps2 = eps * eps;
    const double margin = 1.05 * eps;

    // one parameter box per atlas piece; clipping an axis whose parameter
    // distance lower-bounds |zeta - z| drops only regions where the windowed
    // integrand vanishes identically
    enum class Kind { Side, Disc, Wedge, Cap };
    struct Piece {
        std::array<std::array<double, 2>, 3> box;
        Kind kind = Kind::Side;
        double bk = 0.0; // wedge center angle
    };
    std::vector<Piece> pieces;
    const double atop = d.shape == DomainShape::Modulus ? h_atlas_side_top(d) : 0.0;
    const double ra = atop / std::sqrt(2.0);
    if (d.shape == DomainShape::Modulus) {
        // disc chart on the inscribed square, four wedges out to the circle
        // G = 1/2, cap chart beyond; the square keeps the phaseless chart on
        // the apex, where the polar charts cancel in the angle
        Piece apex{{{{-ra, ra}, {-ra, ra}, {0.0, 2.0 * PI}}}, Kind::Disc, 0.0};
        if (mixed) {
            apex.box[0][0] = std::max(apex.box[0][0], z.z1.real() - margin);
            apex.box[0][1] = std::min(apex.box[0][1], z.z1.real() + margin);
            apex.box[1][0] = std::max(apex.box[1][0], z.z1.imag() - margin);
            apex.box[1][1] = std::min(apex.box[1][1], z.z1.imag() + margin);
        }
        pieces.push_back(apex);
        for (int k = 0; k < 4; ++k) {
            const double bk = 0.5 * PI * k;
            pieces.push_back({{{{0.0, 1.0},
                                {bk - 0.25 * PI, bk + 0.25 * PI},
                                {0.0, 2.0 * PI}}},
                              Kind::Wedge,
                              bk});
        }
        Piece cap{h_chart_cap_box(d), Kind::Cap, 0.0};
        if (mixed) {
            const double R0 = std::abs(z.z2 - 1.0);
            cap.box[0][0] = std::max(cap.box[0][0], R0 - margin);
            cap.box[0][1] = std::min(cap.box[0][1], R0 + margin);
        }
        pieces.push_back(cap);
    } else {
        Piece whole{h_chart_box(d), Kind::Side, 0.0};
        if (mixed) {
            whole.box[0][0] = std::max(whole.box[0][0], z.z1.real() - margin);
            whole.box[0][1] = std::min(whole.box[0][1], z.z1.real() + margin);
            const double v0 = z.z1.imag() / d.y_box;
            whole.box[1][0] = std::max(whole.box[1][0], v0 - margin / d.y_box);
            whole.box[1][1] = std::min(whole.box[1][1], v0 + margin / d.y_box);
        }
        pieces.push_back(whole);
    }

    auto chart_at = [&](const Piece& pc,
                        const std::array<double, 3>& x) -> HChartPoint {
        switch (pc.kind) {
            case Kind::Disc: return h_chart_apex(d, x[0], x[1], x[2]);
            case Kind::Cap: return h_chart_cap(d, x[0], x[1], x[2]);
            case Kind::Wedge: {
                const double asq = ra / std::cos(x[1] - pc.bk);
                const double w = atop - asq;
                HChartPoint cp = h_chart(d, asq + x[0] * w, x[1], x[2]);
                cp.J1 *= w;
                cp.J2 *= w;
                return cp;
            }
            case Kind::Side: break;
        }
        return h_chart(d, x[0], x[1], x[2]);
    };

    QuadratureResult total;
    total.min_separation = std::numeric_limits<double>::infinity();
    double live = 0.0;
    for (const auto& piece : pieces)
        if (piece.box[0][1] > piece.box[0][0] && piece.box[1][1] > piece.box[1][0])
            live += 1.0;
    for (const auto& piece : pieces) {
        if (!(piece.box[0][1] > piece.box[0][0] &&
              piece.box[1][1] > piece.box[1][0]))
            continue;
        PanelProblem<3> p;
        p.box = piece.box;
        p.f = [&, piece](const std::array<double, 3>& x) -> C {
            const HChartPoint cp = chart_at(piece, x);
            const C d1 = cp.zeta.z1 - z.z1, d2 = cp.zeta.z2 - z.z2;
            const double r2 = std::norm(d1) + std::norm(d2);
            if (mixed && r2 >= eps2) return C(0.0, 0.0);
            if (r2 < 1e-300) return C(0.0, 0.0);
            C num, sharp;
            if (mixed) {
                const KernelBundle k = eval_kernel(d, z, cp.zeta);
                num = k.phi1 * std::conj(d2) - k.phi2 * std::conj(d1);
                sharp = k.phi_sharp;
            } else {
                const auto g = grad_rho(d, cp.zeta);
                num = g[0] * std::conj(d2) - g[1] * std::conj(d1);
                sharp = g[0] * d1 + g[1] * d2;
            }
            const C w = form.phi1(cp.zeta) * cp.J1 + form.phi2(cp.zeta) * cp.J2;
            return num * w / (sharp * r2);
        };
        p.dist = [&, piece](const std::array<double, 3>& x) {
            return dist(chart_at(piece, x).zeta, z);
        };
        PanelPolicy pol;
        pol.max_panels = opt.max_panels;
        // smooth away from zeta = z; the distance-driven splits isolate the
        // near-singular patch, where high order still converges
        pol.nhi = 5;
        pol.nlo = 4;
        QuadratureResult res =
            integrate_panels(p, tol / (live * std::abs(cH)), pol);
        total.value += cH * res.value;
        total.err_estimate += std::abs(cH) * res.err_estimate;
        total.panels += res.panels;
        total.min_separation = std::min(total.min_separation, res.min_separation);
    }
    return total;
}

QuadratureResult solve(const DomainSpec& d, const OneForm& form,
                       const ComplexPoint& z, double tol,
                       const SolveOptions& opt) {
    const QuadratureResult h = eval_H(d, form, z, tol, opt);
    const QuadratureResult k = eval_K(d, form, z, tol, opt);
    QuadratureResult res;
    res.value = h.value + k.value;
    res.err_estimate = h.err_estimate + k.err_estimate;
    res.panels = h.panels + k.panels;
    res.min_separation = std::min(h.min_separation, k.min_separation);
    return res;
}

std::array<C, 2> dbar_residual(const DomainSpec& d, const OneForm& form,
                               const ComplexPoint& z, double h, double tol,
                               const SolveOptions& opt) {
    double proxy = 1.0;  // gradient degenerates only deep inside
    try {
        proxy = distance_proxy(d, z);
    } catch (const std::domain_error&) {
    }
    if (!(proxy > 4.0 * h))
        throw std::domain_error("dbar_residual: stencil exits the interior margin");
    auto u = [&](double dx1, double dy1, double dx2, double dy2) {
        const ComplexPoint w{z.z1 + C(dx1, dy1), z.z2 + C(dx2, dy2)};
        return solve(d, form, w, tol, opt).value;
    };
    const double s = 2.0 * h;
    const C db1 = 0.5 * ((u(h, 0, 0, 0) - u(-h, 0, 0, 0)) / s +
                         C(0.0, 1.0) * (u(0, h, 0, 0) - u(0, -h, 0, 0)) / s);
    const C db2 = 0.5 * ((u(0, 0, h, 0) - u(0, 0, -h, 0)) / s +
                         C(0.0, 1.0) * (u(0, 0, 0, h) - u(0, 0, 0, -h)) / s);
    return {db1 - form.phi1(z), db2 - form.phi2(z)};
}

namespace {

// shared region and chain lower bound for the two probes
struct ProbeRegion {
    std::array<std::array<double, 2>, 2> box;
    double q = 0.0;
};

ProbeRegion probe_region(const DomainSpec& d, const ComplexPoint& z) {
    const double r = rho(d, z);
    if (!(r < 0.0)) throw std::domain_error("probe: z is not interior");
    ProbeRegion reg;
    reg.q = -r;
    const double eps = d.epsilon, del = d.delta;
    const double x0 = z.z1.real(), y0 = z.z1.imag();
    reg.box = {{{std::max(-del, x0 - eps), std::min(del, x0 + eps)},
                {std::max(-del, y0 - eps), std::min(del, y0 + eps)}}};
    return reg;
}

double chain_floor(const DomainSpec& d, C zeta1, C z1) {
    if (d.shape == DomainShape::Modulus)
        return G_ext_prime(d, std::norm(zeta1)) * std::norm(zeta1 - z1);
    const double dx = zeta1.real() - z1.real();
    return G_ext_prime(d, zeta1.real() * zeta1.real()) * dx * dx;
}

ProbeResult run_probe(const DomainSpec& d, const ComplexPoint& z,
                      bool log_kernel) {
    const ProbeRegion reg = probe_region(d, z);
    const double del2 = d.delta * d.delta, eps2 = d.epsilon * d.epsilon;
    PanelProblem<2> p;
    p.box = reg.box;
    p.f = [&](const std::array<double, 2>& x) -> C {
        const C zeta1(x[0], x[1]);
        if (std::norm(zeta1) >= del2) return C(0.0, 0.0);
        const double r2 = std::norm(zeta1 - z.z1);
        if (r2 >= eps2) return C(0.0, 0.0);
        const double den = reg.q + chain_floor(d, zeta1, z.z1);
        const double sep = std::sqrt(std::max(r2, 1e-300));
        const double val =
            log_kernel ? std::abs(std::log(den)) / sep : 1.0 / (den * sep);
        return C(val, 0.0);
    };
    p.dist = [&](const std::array<double, 2>& x) {
        return std::hypot(x[0] - z.z1.real(), x[1] - z.z1.imag());
    };
    PanelPolicy pol;
    pol.rel_tol = 1e-6;
    pol.max_panels = 200000;
    const QuadratureResult res = integrate_panels(p, 0.0, pol);
    ProbeResult pr;
    pr.lhs = res.value.real();
    pr.panels = res.panels;
    return pr;
}

} // namespace

ProbeResult gradient_bound_probe(const DomainSpec& d, const ComplexPoint& z) {
    ProbeResult pr = run_probe(d, z, false);
    const double q = -rho(d, z);
    const double s = std::sqrt(eval_Fstar(d.profile, q));
    pr.rhs = d.shape == DomainShape::Modulus ? s / q
                                             : s * std::abs(std::log(s)) / q;
    return pr;
}

ProbeResult supnorm_probe(const DomainSpec& d, const ComplexPoint& z) {
    ProbeResult pr = run_probe(d, z, true);
    const double lim = std::max(d.delta, d.epsilon);
    const auto hyp = hypothesis_integral(
        d.profile,
        d.shape == DomainShape::Modulus ? ModulusVariant::CaseI
                                        : ModulusVariant::CaseII,
        lim);
    if (!hyp.converged)
        throw DivergenceError("supnorm_probe: hypothesis integral diverges");
    pr.rhs = hyp.value;
    return pr;
}

} // namespace dbar2
