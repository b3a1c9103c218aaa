#include "dbar2/quadnd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dbar2/threadpool.hpp"

namespace dbar2 {
namespace {

struct GLRule {
    const double* x;
    const double* w;
    int n;
};

const double gl2x[] = {-0.5773502691896257, 0.5773502691896257};
const double gl2w[] = {1.0, 1.0};
const double gl3x[] = {-0.7745966692414834, 0.0, 0.7745966692414834};
const double gl3w[] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
const double gl4x[] = {-0.8611363115940526, -0.3399810435848563,
                       0.3399810435848563, 0.8611363115940526};
const double gl4w[] = {0.34785484513745385, 0.6521451548625461,
                       0.6521451548625461, 0.34785484513745385};
const double gl5x[] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                       0.5384693101056831, 0.9061798459386640};
const double gl5w[] = {0.23692688505618908, 0.47862867049936647,
                       0.5688888888888889, 0.47862867049936647,
                       0.23692688505618908};
const double gl6x[] = {-0.9324695142031521, -0.6612093864662645,
                       -0.2386191860831969, 0.2386191860831969,
                       0.6612093864662645,  0.9324695142031521};
const double gl6w[] = {0.17132449237917036, 0.3607615730481386,
                       0.46791393457269104, 0.46791393457269104,
                       0.3607615730481386,  0.17132449237917036};

GLRule rule(int n) {
    switch (n) {
        case 2: return {gl2x, gl2w, 2};
        case 3: return {gl3x, gl3w, 3};
        case 4: return {gl4x, gl4w, 4};
        case 5: return {gl5x, gl5w, 5};
        default: return {gl6x, gl6w, 6};
    }
}

template <int N>
struct Panel {
    std::array<double, N> lo{}, hi{};
    C val{0.0, 0.0};
    double err = 0.0;
    double sep = std::numeric_limits<double>::infinity();
    int depth = 0;
    bool forced = false;
    bool alive = true;
};

template <int N>
C tensor_eval(const PanelProblem<N>& p, const Panel<N>& pan, const GLRule& r) {
    long total = 1;
    for (int i = 0; i < N; ++i) total *= r.n;
    C sum{0.0, 0.0};
    std::array<double, N> x{};
    for (long idx = 0; idx < total; ++idx) {
        long t = idx;
        double wgt = 1.0;
        for (int dim = 0; dim < N; ++dim) {
            const int k = static_cast<int>(t % r.n);
            t /= r.n;
            const double c = 0.5 * (pan.lo[dim] + pan.hi[dim]);
            const double h = 0.5 * (pan.hi[dim] - pan.lo[dim]);
            x[dim] = c + h * r.x[k];
            wgt *= h * r.w[k];
        }
        sum += wgt * p.f(x);
    }
    return sum;
}

// Error from an embedded lower-order rule; geometric refinement is keyed to
// the variation of the singularity distance across the panel, which bounds
// the kernel's magnitude swing without needing the chart metric explicitly.
template <int N>
void eval_panel(const PanelProblem<N>& p, const PanelPolicy& pol,
                int nhi, int nlo, Panel<N>& pan) {
    const C vhi = tensor_eval(p, pan, rule(nhi));
    const C vlo = tensor_eval(p, pan, rule(nlo));
    pan.val = vhi;
    pan.err = std::abs(vhi - vlo);
    pan.forced = false;
    pan.sep = std::numeric_limits<double>::infinity();
    if (!p.dist) return;
    double dmin = std::numeric_limits<double>::infinity();
    double dmax = 0.0;
    std::array<double, N> x{};
    for (int corner = 0; corner < (1 << N) + 1; ++corner) {
        for (int dim = 0; dim < N; ++dim) {
            if (corner == (1 << N))
                x[dim] = 0.5 * (pan.lo[dim] + pan.hi[dim]);
            else
                x[dim] = (corner >> dim) & 1 ? pan.hi[dim] : pan.lo[dim];
        }
        const double dv = p.dist(x);
        dmin = std::min(dmin, dv);
        dmax = std::max(dmax, dv);
    }
    pan.sep = dmin;
    pan.forced = pan.depth < pol.depth_floor &&
                 dmax - dmin > pol.dist_ratio * std::max(dmin, 1e-300);
}

template <int N>
QuadratureResult run(const PanelProblem<N>& p, double tol,
                     const PanelPolicy& pol) {
    const int nhi = pol.nhi > 0 ? pol.nhi : (N == 4 ? 3 : 4);
    const int nlo = pol.nlo > 0 ? pol.nlo : (N == 4 ? 2 : 3);
    const int init = N == 2 ? 4 : (N == 3 ? 3 : 2);

    std::array<double, N> width{};
    for (int dim = 0; dim < N; ++dim) {
        width[dim] = p.box[dim][1] - p.box[dim][0];
        if (!(width[dim] > 0.0)) return {};
    }

    std::vector<Panel<N>> panels;
    long cells = 1;
    for (int i = 0; i < N; ++i) cells *= init;
    panels.resize(cells);
    for (long idx = 0; idx < cells; ++idx) {
        long t = idx;
        for (int dim = 0; dim < N; ++dim) {
            const int k = static_cast<int>(t % init);
            t /= init;
            panels[idx].lo[dim] = p.box[dim][0] + width[dim] * k / init;
            panels[idx].hi[dim] = p.box[dim][0] + width[dim] * (k + 1) / init;
        }
    }
    parallel_for(panels.size(), [&](std::size_t i) {
        eval_panel(p, pol, nhi, nlo, panels[i]);
    });

    auto split_into = [&](const std::vector<std::size_t>& split) {
        const std::size_t base = panels.size();
        panels.resize(base + 2 * split.size());
        for (std::size_t k = 0; k < split.size(); ++k) {
            Panel<N>& par = panels[split[k]];
            par.alive = false;
            int axis = 0;
            double best = -1.0;
            for (int dim = 0; dim < N; ++dim) {
                const double rel = (par.hi[dim] - par.lo[dim]) / width[dim];
                if (rel > best) {
                    best = rel;
                    axis = dim;
                }
            }
            const double mid = 0.5 * (par.lo[axis] + par.hi[axis]);
            Panel<N>& a = panels[base + 2 * k];
            Panel<N>& b = panels[base + 2 * k + 1];
            a.lo = par.lo;
            a.hi = par.hi;
            a.hi[axis] = mid;
            b.lo = par.lo;
            b.hi = par.hi;
            b.lo[axis] = mid;
            a.depth = b.depth = par.depth + 1;
        }
        parallel_for(2 * split.size(), [&](std::size_t j) {
            eval_panel(p, pol, nhi, nlo, panels[base + j]);
        });
    };

    // An embedded estimate can read exactly zero while the committed value
    // is wrong: an integrand feature narrower than the node spacing sits
    // between every sample and the panel freezes early. Two guards: every
    // panel is split min_depth times unconditionally, and each tentative
    // convergence is audited by re-deriving every panel from its 2^N
    // half-boxes. The audit commits the finer values and turns each
    // disagreement into that panel's error, so hidden mass re-enters the
    // refinement queue instead of being silently accepted.
    const int min_depth = pol.min_depth >= 0 ? pol.min_depth : N;
    std::vector<std::size_t> split;
    for (;;) {
        bool converged = false;
        for (;;) {
            double total_err = 0.0;
            double total_abs = 0.0;
            long alive = 0;
            split.clear();
            std::vector<std::size_t> by_err;
            for (std::size_t i = 0; i < panels.size(); ++i) {
                if (!panels[i].alive) continue;
                ++alive;
                total_err += panels[i].err;
                total_abs += std::abs(panels[i].val);
                if (panels[i].forced || panels[i].depth < min_depth)
                    split.push_back(i);
                else if (panels[i].depth < pol.max_depth && panels[i].err > 0.0)
                    by_err.push_back(i);
            }
            converged =
                total_err <= tol || total_err <= pol.rel_tol * total_abs;
            if (split.empty() && converged) break;
            if (alive > pol.max_panels)
                throw std::runtime_error(
                    "integrate_panels: panel budget exhausted before "
                    "tolerance");
            if (!converged) {
                // batch size depends only on the panel set, never on the
                // thread count
                const std::size_t batch = std::max<std::size_t>(
                    16, static_cast<std::size_t>(alive / 64));
                std::partial_sort(
                    by_err.begin(),
                    by_err.begin() + std::min(batch, by_err.size()),
                    by_err.end(), [&](std::size_t a, std::size_t b) {
                        if (panels[a].err != panels[b].err)
                            return panels[a].err > panels[b].err;
                        return a < b;
                    });
                for (std::size_t k = 0; k < std::min(batch, by_err.size());
                     ++k)
                    split.push_back(by_err[k]);
            }
            if (split.empty()) break;  // nothing splittable; report honestly
            split_into(split);
        }
        if (!converged) break;

        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < panels.size(); ++i)
            if (panels[i].alive && panels[i].depth < pol.max_depth)
                idx.push_back(i);
        if (idx.empty()) break;
        std::vector<C> refs(idx.size());
        parallel_for(idx.size(), [&](std::size_t j) {
            const Panel<N>& pan = panels[idx[j]];
            Panel<N> sub;
            C ref{0.0, 0.0};
            for (int sc = 0; sc < (1 << N); ++sc) {
                for (int dim = 0; dim < N; ++dim) {
                    const double mid = 0.5 * (pan.lo[dim] + pan.hi[dim]);
                    sub.lo[dim] = (sc >> dim) & 1 ? mid : pan.lo[dim];
                    sub.hi[dim] = (sc >> dim) & 1 ? pan.hi[dim] : mid;
                }
                ref += tensor_eval(p, sub, rule(nhi));
            }
            refs[j] = ref;
        });
        for (std::size_t j = 0; j < idx.size(); ++j) {
            Panel<N>& pan = panels[idx[j]];
            pan.err = std::abs(pan.val - refs[j]);
            pan.val = refs[j];
        }
        double total_err = 0.0;
        double total_abs = 0.0;
        for (const auto& pan : panels) {
            if (!pan.alive) continue;
            total_err += pan.err;
            total_abs += std::abs(pan.val);
        }
        if (total_err <= tol || total_err <= pol.rel_tol * total_abs) break;
    }

    QuadratureResult res;
    double min_sep = std::numeric_limits<double>::infinity();
    for (const auto& pan : panels) {
        if (!pan.alive) continue;
        res.value += pan.val;
        res.err_estimate += pan.err;
        ++res.panels;
        min_sep = std::min(min_sep, pan.sep);
    }
    res.min_separation = std::isfinite(min_sep) ? min_sep : 0.0;
    return res;
}

} // namespace

QuadratureResult integrate_panels(const PanelProblem<2>& p, double tol,
                                  const PanelPolicy& pol) {
    return run(p, tol, pol);
}
QuadratureResult integrate_panels(const PanelProblem<3>& p, double tol,
                                  const PanelPolicy& pol) {
    return run(p, tol, pol);
}
QuadratureResult integrate_panels(const PanelProblem<4>& p, double tol,
                                  const PanelPolicy& pol) {
    return run(p, tol, pol);
}

} // namespace dbar2
