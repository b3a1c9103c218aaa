#pragma once
// (0,1)-forms phi = phi1 dconj(z1) + phi2 dconj(z2) used as solver inputs.
// Every built-in form is dbar of an explicit potential, kept in `primitive`
// so exactness tests can compare against a closed-form answer.
#include <functional>
#include <string>
#include "dbar2/complex2.hpp"
#include "dbar2/geometry.hpp"

namespace dbar2 {

struct OneForm {
    std::string name;
    std::function<C(const ComplexPoint&)> phi1, phi2;
    double sup_norm = 0.0;  // bound for |phi_j| on the working box
    std::function<C(const ComplexPoint&)> primitive;  // u0 with dbar u0 = phi
};

namespace detail {
// largest |z1|, |z2| over the working box, for declared sup norms
inline std::array<double, 2> box_moduli(const DomainSpec& d) {
    const auto b = bounding_box(d);
    auto axis_max = [&](int i) {
        return std::max(b[i][0] * b[i][0], b[i][1] * b[i][1]);
    };
    return {std::sqrt(axis_max(0) + axis_max(1)),
            std::sqrt(axis_max(2) + axis_max(3))};
}
} // namespace detail

inline OneForm form_zero() {
    OneForm f;
    f.name = "zero";
    f.phi1 = [](const ComplexPoint&) { return C{0.0, 0.0}; };
    f.phi2 = f.phi1;
    f.sup_norm = 0.0;
    f.primitive = f.phi1;
    return f;
}

inline OneForm form_dzbar2() {
    OneForm f;
    f.name = "dzbar2";
    f.phi1 = [](const ComplexPoint&) { return C{0.0, 0.0}; };
    f.phi2 = [](const ComplexPoint&) { return C{1.0, 0.0}; };
    f.sup_norm = 1.0;
    f.primitive = [](const ComplexPoint& z) { return std::conj(z.z2); };
    return f;
}

inline OneForm form_z2_dzbar1(const DomainSpec& d) {
    OneForm f;
    f.name = "z2dzbar1";
    f.phi1 = [](const ComplexPoint& z) { return z.z2; };
    f.phi2 = [](const ComplexPoint&) { return C{0.0, 0.0}; };
    f.sup_norm = detail::box_moduli(d)[1];
    f.primitive = [](const ComplexPoint& z) { return std::conj(z.z1) * z.z2; };
    return f;
}

inline OneForm form_mixed() {
    OneForm f;
    f.name = "mixed";
    f.phi1 = [](const ComplexPoint&) { return C{1.0, 0.0}; };
    f.phi2 = f.phi1;
    f.sup_norm = 1.0;
    f.primitive = [](const ComplexPoint& z) {
        return std::conj(z.z1) + std::conj(z.z2);
    };
    return f;
}

inline OneForm form_quad_dzbar1(const DomainSpec& d) {
    OneForm f;
    f.name = "quad";
    f.phi1 = [](const ComplexPoint& z) { return 2.0 * std::conj(z.z1) * z.z2; };
    f.phi2 = [](const ComplexPoint&) { return C{0.0, 0.0}; };
    const auto m = detail::box_moduli(d);
    f.sup_norm = 2.0 * m[0] * m[1];
    f.primitive = [](const ComplexPoint& z) {
        return std::conj(z.z1) * std::conj(z.z1) * z.z2;
    };
    return f;
}

// dbar of S(t) conj(z2) with S a quintic smoothstep in
// t = (ro^2 - |z - c|^2) / (ro^2 - ri^2): equals conj(z2) dzbar2 inside the
// inner ball and vanishes outside the outer one.
inline OneForm form_bump(const ComplexPoint& c, double ri, double ro) {
    const double D = ro * ro - ri * ri;
    auto S = [](double t) {
        if (t <= 0.0) return 0.0;
        if (t >= 1.0) return 1.0;
        return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
    };
    auto Sp = [](double t) {
        if (t <= 0.0 || t >= 1.0) return 0.0;
        const double u = t * (1.0 - t);
        return 30.0 * u * u;
    };
    OneForm f;
    f.name = "bump";
    const double ro2 = ro * ro;
    auto t_of = [c, D, ro2](const ComplexPoint& z) {
        return (ro2 - abs2(z - c)) / D;
    };
    f.phi1 = [c, D, Sp, t_of](const ComplexPoint& z) {
        return Sp(t_of(z)) * (-(z.z1 - c.z1) / D) * std::conj(z.z2);
    };
    f.phi2 = [c, D, S, Sp, t_of](const ComplexPoint& z) {
        const double t = t_of(z);
        return Sp(t) * (-(z.z2 - c.z2) / D) * std::conj(z.z2) + S(t);
    };
    f.primitive = [S, t_of](const ComplexPoint& z) {
        return S(t_of(z)) * std::conj(z.z2);
    };
    // |phi1| <= max S' * (ro/D) * max|z2| on the support; S' peaks at 15/8
    f.sup_norm = 1.875 * (ro / D) * (std::abs(c.z2) + ro) + 1.0;
    return f;
}

// |d phi1 / d conj(z2) - d phi2 / d conj(z1)| by central Wirtinger stencils;
// vanishes (to O(h^2)) exactly when phi is dbar-closed.
inline double closedness_residual(const OneForm& f, const ComplexPoint& z,
                                  double h) {
    auto d2 = [&](const std::function<C(const ComplexPoint&)>& g) {
        const C dx = g({z.z1, z.z2 + h}) - g({z.z1, z.z2 - h});
        const C dy = g({z.z1, z.z2 + C(0.0, h)}) - g({z.z1, z.z2 - C(0.0, h)});
        return 0.5 * (dx / (2.0 * h) + C(0.0, 1.0) * dy / (2.0 * h));
    };
    auto d1 = [&](const std::function<C(const ComplexPoint&)>& g) {
        const C dx = g({z.z1 + h, z.z2}) - g({z.z1 - h, z.z2});
        const C dy = g({z.z1 + C(0.0, h), z.z2}) - g({z.z1 - C(0.0, h), z.z2});
        return 0.5 * (dx / (2.0 * h) + C(0.0, 1.0) * dy / (2.0 * h));
    };
    return std::abs(d2(f.phi1) - d1(f.phi2));
}

} // namespace dbar2
