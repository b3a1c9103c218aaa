#pragma once
// Leray support machinery: Phi, the radial cutoff chi, the mixed
// coefficients Phi_1, Phi_2, and the assembled support function Phi#.
#include <cstdint>
#include "dbar2/geometry.hpp"
#include "dbar2/json_report.hpp"

namespace dbar2 {

struct KernelBundle {
    C phi;         // 2 <grad rho(zeta), zeta - z>
    C phi1, phi2;  // chi grad_j rho(zeta) + (1-chi) conj(zeta_j - z_j)
    C phi_sharp;   // phi1 (zeta1-z1) + phi2 (zeta2-z2)
    double chi;    // 1 on |z-zeta| <= eps/2, 0 beyond eps
};

// quintic smoothstep between the two plateaus, C^2 at the joins
double cutoff_chi(double dist, double epsilon);

KernelBundle eval_kernel(const DomainSpec& d, const ComplexPoint& z, const ComplexPoint& zeta);
inline KernelBundle eval_kernel(const DomainSpec& d, const ComplexPoint& z,
                                const BoundaryPoint& zeta) {
    return eval_kernel(d, z, zeta.point);
}

// convexity gap of P at zeta1 toward z1:
// P(z1) - P(zeta1) - 2 Re[dP/dzeta1(zeta1) (z1 - zeta1)], always >= 0
double taylor_gap(const DomainSpec& d, C z1, C zeta1);

// Samples (z, zeta) pairs with z in the closed domain, zeta on the boundary,
// |z - zeta| <= eps, and checks the support inequality branch by branch.
// Halves eps and retries (up to 4 times) if a violation beyond 1e-10 shows up.
Report verify_lemma21(const DomainSpec& d, int n_samples, std::uint64_t seed);

// Finite-difference check that Phi#, Phi_1, Phi_2 are holomorphic in z on the
// chi = 1 plateau, plus the exact vanishing of the numerator where chi = 0.
Report verify_holomorphy(const DomainSpec& d, int n_samples, std::uint64_t seed);

} // namespace dbar2
