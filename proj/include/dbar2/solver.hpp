#pragma once
// Integral solution operator u = H phi + K phi for dbar u = phi on the model
// domains, plus the finite-difference residual check and the two integrand
// probes behind the gradient and supnorm estimates.
#include <array>
#include "dbar2/geometry.hpp"
#include "dbar2/oneform.hpp"
#include "dbar2/quadnd.hpp"

namespace dbar2 {

// Mixed: support-function section blended into the Bochner-Martinelli section
// across the cutoff shell; the boundary integrand vanishes beyond epsilon, so
// the boundary term dies off deeper than epsilon and the sum no longer
// corrects the volume term there. Bounded-norm grade, any realization.
// Global: pure support-function section over the whole boundary; exactness
// grade, needs the bounded realization (Modulus shape, Ball model).
// Auto resolves to Global where available and Mixed otherwise.
enum class LeraySection { Auto, Mixed, Global };

struct SolveOptions {
    LeraySection section = LeraySection::Auto;
    bool k_reference = false;    // literal 4D volume route instead of polar
    double mesh_rotation = 0.0;  // rotates the polar mesh; symmetry checks
    long max_panels = 400000;
};

QuadratureResult eval_K(const DomainSpec& d, const OneForm& form,
                        const ComplexPoint& z, double tol,
                        const SolveOptions& opt = {});
QuadratureResult eval_H(const DomainSpec& d, const OneForm& form,
                        const ComplexPoint& z, double tol,
                        const SolveOptions& opt = {});
QuadratureResult solve(const DomainSpec& d, const OneForm& form,
                       const ComplexPoint& z, double tol,
                       const SolveOptions& opt = {});

// (dbar_1 u - phi1(z), dbar_2 u - phi2(z)) by central Wirtinger stencils of
// step h; throws if the stencil leaves the safe interior margin.
std::array<C, 2> dbar_residual(const DomainSpec& d, const OneForm& form,
                               const ComplexPoint& z, double h, double tol,
                               const SolveOptions& opt = {});

struct ProbeResult {
    double lhs = 0.0;
    double rhs = 0.0;
    long panels = 0;
};

// lhs: the zeta_1-disc integral behind the gradient bound, with Re Phi
// replaced by its chain lower bound; rhs: the profile law it is tested against.
ProbeResult gradient_bound_probe(const DomainSpec& d, const ComplexPoint& z);
// Same with the log kernel; rhs is the (finite) hypothesis integral.
ProbeResult supnorm_probe(const DomainSpec& d, const ComplexPoint& z);

} // namespace dbar2
