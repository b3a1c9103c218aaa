#pragma once
// Adaptive tensor Gauss-Legendre panel integration in 2 to 4 dimensions.
// Panels subdivide on embedded-rule error and, near a designated singular
// point, on a geometric rule that caps the kernel variation per panel.
// Tentative convergence is audited against one uniform refinement level so
// mass hidden between the nodes of a frozen panel is detected and recovered.
#include <array>
#include <functional>
#include "dbar2/complex2.hpp"

namespace dbar2 {

struct QuadratureResult {
    C value{0.0, 0.0};
    double err_estimate = 0.0;
    long panels = 0;
    double min_separation = 0.0;  // closest sampled approach to the singularity
};

struct PanelPolicy {
    long max_panels = 400000;  // live-panel budget; exceeding it throws
    double dist_ratio = 0.3;   // split while dist variation > ratio * min dist
    int depth_floor = 24;      // geometric refinement stops at this depth
    int max_depth = 48;        // error-driven splits stop here
    double rel_tol = 0.0;      // extra stop: err <= rel_tol * |value|
    int min_depth = -1;        // splits forced regardless of error; -1: one
                               // halving per axis
    int nhi = 0;               // per-panel rule orders; 0 picks a dimension
    int nlo = 0;               // default (low for singular, high for smooth)
};

template <int N>
struct PanelProblem {
    std::function<C(const std::array<double, N>&)> f;
    std::array<std::array<double, 2>, N> box;
    // distance from a parameter point to the singularity measured in the
    // integrand's own geometry; leave empty for regular integrands
    std::function<double(const std::array<double, N>&)> dist;
};

QuadratureResult integrate_panels(const PanelProblem<2>& p, double tol,
                                  const PanelPolicy& pol = {});
QuadratureResult integrate_panels(const PanelProblem<3>& p, double tol,
                                  const PanelPolicy& pol = {});
QuadratureResult integrate_panels(const PanelProblem<4>& p, double tol,
                                  const PanelPolicy& pol = {});

} // namespace dbar2
