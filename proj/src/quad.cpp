#include "dbar2/quad.hpp"
#include <algorithm>
#include <cmath>
#include <queue>

namespace dbar2 {

namespace {
// QUADPACK dqk15 nodes/weights on [-1, 1]
const double XGK[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
const double WGK[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double WG[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
} // namespace

QuadResult1D gk15(const Fun1D& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fv[15];
    // order: nodes -x7..x7 mapped so index 7 is the center
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * XGK[i]);
        fv[14 - i] = f(c + h * XGK[i]);
    }
    fv[7] = f(c);
    double ik = 0.0, ig = 0.0;
    for (int i = 0; i < 7; ++i) ik += WGK[i] * (fv[i] + fv[14 - i]);
    ik += WGK[7] * fv[7];
    // Gauss-7 uses the odd Kronrod nodes (indices 1,3,5 and center)
    for (int i = 0; i < 3; ++i) ig += WG[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    ig += WG[3] * fv[7];
    QuadResult1D r;
    r.value = ik * h;
    r.err = std::fabs((ik - ig) * h);
    r.panels = 1;
    r.converged = true;
    return r;
}

QuadResult1D adaptive_1d(const Fun1D& f, double a, double b,
                         double abs_tol, double rel_tol,
                         int max_panels, const std::vector<double>& breakpoints) {
    if (a == b) return {0.0, 0.0, 0, true};

    struct Panel {
        double a, b, value, err;
        long id;
    };
    // max-heap on (err, id): ids break ties so the pop order is deterministic
    auto cmp = [](const Panel& p, const Panel& q) {
        if (p.err != q.err) return p.err < q.err;
        return p.id > q.id;
    };
    std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> heap(cmp);

    std::vector<double> edges{a};
    for (double x : breakpoints)
        if (x > a && x < b) edges.push_back(x);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());

    long next_id = 0;
    double total = 0.0, total_err = 0.0;
    int panels = 0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const QuadResult1D g = gk15(f, edges[i], edges[i + 1]);
        heap.push({edges[i], edges[i + 1], g.value, g.err, next_id++});
        total += g.value;
        total_err += g.err;
        ++panels;
    }

    auto tol_met = [&]() {
        return total_err <= std::max(abs_tol, rel_tol * std::fabs(total));
    };
    while (!tol_met() && panels < max_panels && !heap.empty()) {
        const Panel p = heap.top();
        heap.pop();
        if (p.err == 0.0) break; // nothing left to gain
        const double m = 0.5 * (p.a + p.b);
        if (m <= p.a || m >= p.b) continue; // interval at rounding resolution
        const QuadResult1D l = gk15(f, p.a, m), r = gk15(f, m, p.b);
        total += l.value + r.value - p.value;
        total_err += l.err + r.err - p.err;
        heap.push({p.a, m, l.value, l.err, next_id++});
        heap.push({m, p.b, r.value, r.err, next_id++});
        ++panels;
    }

    // deterministic final sum: panels ordered by left endpoint
    std::vector<Panel> all;
    all.reserve(heap.size());
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(), [](const Panel& p, const Panel& q) { return p.a < q.a; });
    long double acc = 0.0L, acc_err = 0.0L;
    for (const auto& p : all) {
        acc += p.value;
        acc_err += p.err;
    }

    QuadResult1D out;
    out.value = static_cast<double>(acc);
    out.err = static_cast<double>(acc_err);
    out.panels = panels;
    out.converged = out.err <= std::max(abs_tol, rel_tol * std::fabs(out.value));
    return out;
}

ChunkResult integrate_left_tail(const Fun1D& f, double b, const ChunkPolicy& policy) {
    ChunkResult out;
    double width = policy.first_width;
    double right = b;
    double prev_mass = -1.0, last_ratio = 0.0, last_mass = 0.0;
    int small_run = 0, flat_run = 0;
    long double acc = 0.0L, acc_err = 0.0L;
    for (int k = 0; k < policy.max_chunks; ++k) {
        const double left = right - width;
        if (!std::isfinite(left)) break; // past representable range; tail is zero
        const QuadResult1D c =
            adaptive_1d(f, left, right, 0.0, policy.rel_tol, 400);
        acc += c.value;
        acc_err += c.err;
        ++out.chunks;
        const double total = static_cast<double>(acc);
        const double mass = std::fabs(c.value);
        last_mass = mass;

        if (mass <= policy.stop_rel * std::fabs(total) || mass == 0.0) {
            if (++small_run >= policy.stop_consecutive) {
                out.converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
        if (prev_mass > 0.0) last_ratio = mass / prev_mass;
        if (prev_mass > 0.0 && mass >= policy.decay_threshold * prev_mass &&
            mass > 1e-12 * std::fabs(total)) {
            if (++flat_run >= policy.decay_consecutive) {
                out.diverged = true;
                break;
            }
        } else {
            flat_run = 0;
        }
        prev_mass = mass;
        right = left;
        if (policy.doubling) width *= 2.0;
    }
    out.value = static_cast<double>(acc);
    out.err = static_cast<double>(acc_err);
    if (out.diverged) {
        out.converged = false;
    } else if (!out.converged && last_ratio > 0.0 && last_ratio < 0.995) {
        // budget ended mid-decay: geometric extrapolation bounds the dropped
        // tail; any ratio < 1 admits the bound, only the divergence flag is strict
        out.err += last_mass * last_ratio / (1.0 - last_ratio);
        out.converged = true;
    }
    return out;
}

} // namespace dbar2
