#pragma once
// 1D adaptive quadrature (Gauss-Kronrod 7/15) and a chunked integrator for
// improper integrals over (-inf, b] with geometric-decay divergence diagnosis.
#include <functional>
#include <vector>

namespace dbar2 {

using Fun1D = std::function<double(double)>;

struct QuadResult1D {
    double value = 0.0;
    double err = 0.0;      // conservative estimate (sum of |GK15 - G7| per panel)
    int panels = 0;
    bool converged = false;
};

// Single Gauss-Kronrod 7/15 application on [a, b]; err = |kronrod - gauss|.
QuadResult1D gk15(const Fun1D& f, double a, double b);

// Error-driven bisection, deterministic panel set and summation order.
// Stops when sum(err) <= max(abs_tol, rel_tol * |value|) or the panel budget
// is hit (converged = false then). Breakpoints seed the initial partition.
QuadResult1D adaptive_1d(const Fun1D& f, double a, double b,
                         double abs_tol, double rel_tol,
                         int max_panels = 4000,
                         const std::vector<double>& breakpoints = {});

struct ChunkPolicy {
    double first_width = 1.0;   // width of the chunk touching the right end
    bool doubling = true;       // geometric widths; false = constant (dyadic shells)
    int max_chunks = 1200;
    double stop_rel = 1e-9;     // chunk negligible when |chunk| <= stop_rel * |total|
    int stop_consecutive = 3;
    double decay_threshold = 0.97; // ratios >= this flag divergence
    int decay_consecutive = 4;
    double rel_tol = 1e-10;     // per-chunk adaptive tolerance
};

struct ChunkResult {
    double value = 0.0;
    double err = 0.0;
    int chunks = 0;
    bool converged = false; // false when diagnosed divergent or budget exhausted
    bool diverged = false;  // chunk masses failed to decay
};

// Integrates f over (-inf, b] as sum of chunks [b - W_{k+1}, b - W_k].
// Divergence is diagnosed when decay_consecutive successive chunk ratios
// exceed decay_threshold while the chunks still carry meaningful mass.
ChunkResult integrate_left_tail(const Fun1D& f, double b, const ChunkPolicy& policy);

} // namespace dbar2
