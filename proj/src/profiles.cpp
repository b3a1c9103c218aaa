#include "dbar2/profiles.hpp"
#include <algorithm>
#include <cmath>
#include "dbar2/config.hpp"
#include "dbar2/quad.hpp"

namespace dbar2 {
namespace {

double beta_of(const TypeProfile& p) { return 0.5 * p.alpha; }

// LogExp F = exp(w), w = -1/(sqrt(v) L^a), L = -ln sqrt(v). Derivatives of w.
struct LogExpW {
    double w, wp, wpp;
};

LogExpW logexp_w(double v, double a) {
    const double y = std::sqrt(v);
    const double L = -std::log(y);
    const double La = std::pow(L, a);
    LogExpW r;
    r.w = -1.0 / (y * La);
    const double A = 0.5 * std::pow(v, -1.5) / La;
    const double B = 1.0 - a / L;
    r.wp = A * B;
    const double Ap = 0.25 * std::pow(v, -2.5) / La * (a / L - 3.0);
    const double Bp = -a / (2.0 * v * L * L);
    r.wpp = Ap * B + A * Bp;
    return r;
}

// Largest v where LogExp is increasing, convex, and v w' >= 1 all hold.
double logexp_threshold(double a) {
    auto ok = [a](double v) {
        const double L = -0.5 * std::log(v);
        if (L <= a) return false; // increasing needs L > a
        const LogExpW d = logexp_w(v, a);
        if (v * d.wp < 1.0) return false;          // F/t nondecreasing
        if (d.wpp + d.wp * d.wp < 0.0) return false; // convexity
        return true;
    };
    double lo = std::log(1e-12), hi = std::log(std::min(0.1, std::exp(-2.0 * a)));
    if (!ok(std::exp(lo)))
        throw std::runtime_error("logexp threshold bracket failed");
    if (ok(std::exp(hi))) return 0.99 * std::exp(hi);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (ok(std::exp(mid)) ? lo : hi) = mid;
    }
    return 0.99 * std::exp(lo);
}

// Solve eta - a ln eta = lambda on the branch eta > a (the physical one:
// eta = -ln sqrt(F*) grows with lambda = ln(-ln rho)).
double eta_solve(double lambda, double a) {
    double eta = std::max(lambda + a * std::log(std::max(lambda, 2.0)), a + 1.5);
    for (int i = 0; i < 80; ++i) {
        const double g = eta - a * std::log(eta) - lambda;
        const double gp = 1.0 - a / eta;
        double next = eta - g / gp;
        if (!(next > a + 0.25)) next = 0.5 * (eta + a + 0.5);
        if (std::abs(next - eta) <= 1e-14 * eta) return next;
        eta = next;
    }
    return eta;
}

void check_range(const TypeProfile& p, double t) {
    if (!(t >= 0.0) || t > p.t_max * (1.0 + 1e-12))
        throw std::domain_error("profile argument outside [0, t_max]");
}

double custom_fprime(const TypeProfile& p, double t) {
    const double h = std::max(1e-8, 1e-6 * t);
    const double lo = std::max(0.0, t - h), hi = std::min(p.t_max, t + h);
    return (p.custom(hi) - p.custom(lo)) / (hi - lo);
}

// sqrt(F*(e^s)) without forming e^s (stays finite for s down to -1e9).
double sqrtFstar_ln(const TypeProfile& p, double s) {
    switch (p.kind) {
    case ProfileKind::Power: return std::exp(0.5 * s / p.m);
    case ProfileKind::Exp: {
        const double b = beta_of(p);
        return std::pow(std::log(p.scale) - s, -0.5 / b);
    }
    case ProfileKind::LogExp: {
        const double mu = -s; // -ln rho
        return std::exp(-eta_solve(std::log(std::max(mu, 1.05)), p.alpha));
    }
    case ProfileKind::Custom: {
        const double rho = std::exp(s);
        return rho == 0.0 ? 0.0 : std::sqrt(eval_Fstar(p, rho));
    }
    }
    return 0.0;
}

double absln_sqrtFstar_ln(const TypeProfile& p, double s) {
    switch (p.kind) {
    case ProfileKind::Power: return -0.5 * s / p.m;
    case ProfileKind::Exp: {
        const double b = beta_of(p);
        return 0.5 / b * std::log(std::log(p.scale) - s);
    }
    case ProfileKind::LogExp: {
        const double mu = -s;
        return eta_solve(std::log(std::max(mu, 1.05)), p.alpha);
    }
    case ProfileKind::Custom: {
        const double y = sqrtFstar_ln(p, s);
        return y > 0.0 ? std::abs(std::log(y)) : 0.0;
    }
    }
    return 0.0;
}

// t |ln F(t^2)| at t = e^s, overflow-free per kind (CaseII adds |ln t| = -s).
double hyp_integrand_ln(const TypeProfile& p, double s, bool case2) {
    double g = 0.0;
    switch (p.kind) {
    case ProfileKind::Power:
        g = std::exp(s) * 2.0 * p.m * (-s);
        break;
    case ProfileKind::Exp: {
        const double b = beta_of(p);
        g = std::abs(std::exp(s * (1.0 - 2.0 * b)) - std::log(p.scale) * std::exp(s));
        break;
    }
    case ProfileKind::LogExp:
        g = std::pow(-s, -p.alpha);
        break;
    case ProfileKind::Custom: {
        const double v = std::exp(2.0 * s);
        if (v == 0.0) return 0.0;
        const double Fv = p.custom(v);
        g = std::exp(s) * std::abs(std::log(std::max(Fv, 1e-308)));
        break;
    }
    }
    return case2 ? g * (-s) : g;
}

// CaseI/II integrand of the modulus integral in s = ln t coordinates.
double modulus_integrand_ln(const TypeProfile& p, double s, bool case2) {
    const double g = sqrtFstar_ln(p, s);
    return case2 ? g * absln_sqrtFstar_ln(p, s) : g;
}

// LogExp modulus in L = -ln sqrt(F*(t)) coordinates: the substitution turns
// int_0^d sqrt(F*)/t dt into int_{eta}^inf L^-a (1 - a/L) w dL, w = 1 or L.
double logexp_modulus_integral(double a, double eta, bool case2) {
    auto f = [a, case2](double x) {
        const double L = -x;
        const double g = std::pow(L, -a) * (1.0 - a / L);
        return case2 ? g * L : g;
    };
    ChunkPolicy pol;
    // start at the integrand's own length scale: with narrower chunks the
    // doubling widths make polynomial tails look non-decaying at first
    pol.first_width = std::max(4.0, 0.5 * eta);
    pol.doubling = true;
    pol.max_chunks = 400;
    pol.stop_rel = 1e-11;
    pol.rel_tol = 1e-10;
    const ChunkResult r = integrate_left_tail(f, -eta, pol);
    if (r.diverged) throw DivergenceError("logexp modulus integral diverged");
    if (!r.converged) throw ConvergenceError("logexp modulus integral stalled");
    return r.value;
}

struct DeepWindow {
    double lo, hi;
};

// Tabulation windows for asymptotic fits, frozen per kind/variant.
DeepWindow fit_window(const TypeProfile& p, ModulusVariant v) {
    if (p.kind == ProfileKind::Power)
        return v == ModulusVariant::CaseII ? DeepWindow{1e-300, 1e-30}
                                           : DeepWindow{1e-12, 1e-4};
    if (p.kind == ProfileKind::Exp) {
        if (v == ModulusVariant::CaseII) return {1e3, 1e5}; // lambda window
        return {1e-260, 1e-20};
    }
    return {5e2, 5e4}; // LogExp: lambda window
}

bool window_is_deep(const TypeProfile& p, ModulusVariant v) {
    return (p.kind == ProfileKind::Exp && v == ModulusVariant::CaseII) ||
           p.kind == ProfileKind::LogExp;
}

} // namespace

TypeProfile TypeProfile::power(double m, double t_max) {
    if (!(m >= 1.0)) throw std::domain_error("power profile needs m >= 1");
    TypeProfile p;
    p.kind = ProfileKind::Power;
    p.m = m;
    p.t_max = t_max;
    return p;
}

TypeProfile TypeProfile::exponential(double alpha, double scale) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::domain_error("exp profile needs alpha in (0,1]");
    if (!(scale >= 1.0)) throw std::domain_error("exp profile needs scale >= 1");
    TypeProfile p;
    p.kind = ProfileKind::Exp;
    p.alpha = alpha;
    p.scale = scale;
    const double b = 0.5 * alpha;
    p.t_max = std::pow(b / (1.0 + b), 1.0 / b); // convexity threshold
    return p;
}

TypeProfile TypeProfile::logexp(double alpha) {
    if (!(alpha > 1.0)) throw std::domain_error("logexp profile needs alpha > 1");
    TypeProfile p;
    p.kind = ProfileKind::LogExp;
    p.alpha = alpha;
    p.t_max = logexp_threshold(alpha);
    return p;
}

TypeProfile TypeProfile::custom_profile(std::function<double(double)> F, double t_max) {
    if (!F || !(t_max > 0.0)) throw std::domain_error("custom profile needs F and t_max > 0");
    TypeProfile p;
    p.kind = ProfileKind::Custom;
    p.custom = std::move(F);
    p.t_max = t_max;
    if (std::abs(p.custom(0.0)) > 1e-12)
        throw std::domain_error("custom profile must vanish at 0");
    return p;
}

std::string TypeProfile::name() const {
    char buf[64];
    switch (kind) {
    case ProfileKind::Power: std::snprintf(buf, sizeof buf, "power(m=%g)", m); break;
    case ProfileKind::Exp: std::snprintf(buf, sizeof buf, "exp(alpha=%g,scale=%g)", alpha, scale); break;
    case ProfileKind::LogExp: std::snprintf(buf, sizeof buf, "logexp(alpha=%g)", alpha); break;
    case ProfileKind::Custom: std::snprintf(buf, sizeof buf, "custom"); break;
    }
    return buf;
}

const char* variant_name(ModulusVariant v) {
    switch (v) {
    case ModulusVariant::CaseI: return "case1";
    case ModulusVariant::CaseII: return "case2";
    case ModulusVariant::Neumann: return "neumann";
    }
    return "?";
}

double eval_F(const TypeProfile& p, double t) {
    check_range(p, t);
    if (t == 0.0) return 0.0;
    switch (p.kind) {
    case ProfileKind::Power: return std::pow(t, p.m);
    case ProfileKind::Exp: return p.scale * std::exp(-std::pow(t, -beta_of(p)));
    case ProfileKind::LogExp: return std::exp(logexp_w(t, p.alpha).w);
    case ProfileKind::Custom: return p.custom(t);
    }
    return 0.0;
}

double eval_F_prime(const TypeProfile& p, double t) {
    check_range(p, t);
    switch (p.kind) {
    case ProfileKind::Power:
        return p.m == 1.0 ? 1.0 : p.m * std::pow(t, p.m - 1.0);
    case ProfileKind::Exp: {
        if (t == 0.0) return 0.0;
        const double b = beta_of(p);
        return eval_F(p, t) * b * std::pow(t, -b - 1.0);
    }
    case ProfileKind::LogExp: {
        if (t == 0.0) return 0.0;
        const LogExpW d = logexp_w(t, p.alpha);
        return std::exp(d.w) * d.wp;
    }
    case ProfileKind::Custom:
        return custom_fprime(p, t);
    }
    return 0.0;
}

double eval_F_second(const TypeProfile& p, double t) {
    check_range(p, t);
    switch (p.kind) {
    case ProfileKind::Power:
        // pow(0, m-2) is honest at t = 0: +inf for m < 2, 1 at m = 2
        if (p.m == 1.0) return 0.0;
        return p.m * (p.m - 1.0) * std::pow(t, p.m - 2.0);
    case ProfileKind::Exp: {
        if (t == 0.0) return 0.0;
        const double b = beta_of(p);
        const double wp = b * std::pow(t, -b - 1.0);
        const double wpp = -b * (b + 1.0) * std::pow(t, -b - 2.0);
        return eval_F(p, t) * (wpp + wp * wp);
    }
    case ProfileKind::LogExp: {
        if (t == 0.0) return 0.0;
        const LogExpW d = logexp_w(t, p.alpha);
        return std::exp(d.w) * (d.wpp + d.wp * d.wp);
    }
    case ProfileKind::Custom: {
        const double h = std::max(1e-6, 1e-4 * t);
        if (t - h < 0.0 || t + h > p.t_max) {
            const double t0 = std::min(std::max(t, h), p.t_max - h);
            return (p.custom(t0 + h) - 2.0 * p.custom(t0) + p.custom(t0 - h)) / (h * h);
        }
        return (p.custom(t + h) - 2.0 * p.custom(t) + p.custom(t - h)) / (h * h);
    }
    }
    return 0.0;
}

double eval_Fstar(const TypeProfile& p, double rho) {
    if (!(rho >= 0.0)) throw std::domain_error("F* needs rho >= 0");
    const double top = eval_F(p, p.t_max);
    if (rho > top * (1.0 + 1e-12))
        throw std::range_error("F* argument beyond F(t_max)");
    if (rho == 0.0) return 0.0;
    switch (p.kind) {
    case ProfileKind::Power:
        return std::pow(rho, 1.0 / p.m);
    case ProfileKind::Exp:
        return std::pow(std::log(p.scale) - std::log(rho), -1.0 / beta_of(p));
    case ProfileKind::LogExp: {
        const double mu = -std::log(rho);
        return std::exp(-2.0 * eta_solve(std::log(mu), p.alpha));
    }
    case ProfileKind::Custom: {
        // F increasing on [0, t_max]: bisection to relative 1e-12
        double lo = 0.0, hi = p.t_max;
        for (int i = 0; i < 200 && hi - lo > 1e-12 * hi + 1e-300; ++i) {
            const double mid = 0.5 * (lo + hi);
            (p.custom(mid) < rho ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
    }
    return 0.0;
}

HypResult hypothesis_integral(const TypeProfile& p, ModulusVariant variant, double delta) {
    const double dmax = std::sqrt(p.t_max);
    if (!(delta > 0.0) || delta > dmax * (1.0 + 1e-12))
        throw std::domain_error("hypothesis integral needs 0 < delta <= sqrt(t_max)");
    const bool case2 = variant == ModulusVariant::CaseII;
    auto f = [&p, case2](double s) { return hyp_integrand_ln(p, s, case2); };
    ChunkPolicy pol;
    pol.first_width = std::log(2.0); // dyadic shells t in [delta 2^{-k-1}, delta 2^{-k}]
    pol.doubling = false;
    pol.max_chunks = 48;
    pol.stop_rel = 1e-9;
    pol.stop_consecutive = 3;
    pol.decay_threshold = 0.95;
    pol.decay_consecutive = 3;
    pol.rel_tol = 1e-9;
    const ChunkResult r = integrate_left_tail(f, std::log(delta), pol);
    return {r.value, r.converged && !r.diverged};
}

double eval_modulus(const TypeProfile& p, const ModulusSpec& spec, double d) {
    if (!(d >= spec.d_min * (1.0 - 1e-12)) || d > spec.d_max * (1.0 + 1e-12))
        throw std::domain_error("d outside [d_min, d_max]");
    if (d > eval_F(p, p.t_max) * (1.0 + 1e-12))
        throw std::range_error("d beyond F(t_max)");
    if (spec.variant == ModulusVariant::Neumann)
        return 1.0 / std::sqrt(eval_Fstar(p, d));
    const bool case2 = spec.variant == ModulusVariant::CaseII;
    if (p.kind == ProfileKind::LogExp) {
        const double eta = eta_solve(std::log(-std::log(d)), p.alpha);
        return 1.0 / logexp_modulus_integral(p.alpha, eta, case2);
    }
    auto f = [&p, case2](double s) { return modulus_integrand_ln(p, s, case2); };
    ChunkPolicy pol;
    pol.first_width = std::max(8.0, 0.5 * std::fabs(std::log(d)));
    pol.doubling = true;
    pol.max_chunks = 1200;
    pol.stop_rel = 1e-11;
    pol.stop_consecutive = 2;
    pol.decay_threshold = 0.97;
    pol.decay_consecutive = 4;
    pol.rel_tol = 1e-10;
    const ChunkResult r = integrate_left_tail(f, std::log(d), pol);
    if (r.diverged) throw DivergenceError("modulus integral shells fail to decay");
    if (!r.converged) throw ConvergenceError("modulus integral stalled");
    return 1.0 / r.value;
}

double modulus_lnf_deep(const TypeProfile& p, ModulusVariant variant, double lambda) {
    if (!(lambda >= 50.0))
        throw std::domain_error("deep tabulation needs lambda = ln(-ln d) >= 50");
    const bool case2 = variant == ModulusVariant::CaseII;
    if (p.kind == ProfileKind::Exp) {
        const double b = beta_of(p);
        if (variant == ModulusVariant::Neumann)
            return 0.5 / b * (lambda + std::log1p(std::log(p.scale) * std::exp(-lambda)));
        // I = e^{-(1-2b) eta} J, J = int_0^inf 2b e^{-(1-2b)s} w(eta+s) ds
        const double eta = 0.5 / b * (lambda + std::log1p(std::log(p.scale) * std::exp(-lambda)));
        auto f = [b, eta, case2](double x) {
            const double s = -x;
            const double g = 2.0 * b * std::exp(-(1.0 - 2.0 * b) * s);
            return case2 ? g * (eta + s) : g;
        };
        ChunkPolicy pol;
        pol.first_width = 4.0;
        pol.doubling = true;
        pol.max_chunks = 200;
        pol.rel_tol = 1e-11;
        pol.stop_rel = 1e-12;
        const ChunkResult r = integrate_left_tail(f, 0.0, pol);
        if (r.diverged || !r.converged)
            throw ConvergenceError("deep exp modulus integral failed");
        return (1.0 - 2.0 * b) * eta - std::log(r.value);
    }
    if (p.kind == ProfileKind::LogExp) {
        const double eta = eta_solve(lambda, p.alpha);
        if (variant == ModulusVariant::Neumann) return eta;
        return -std::log(logexp_modulus_integral(p.alpha, eta, case2));
    }
    throw std::domain_error("deep tabulation covers Exp and LogExp kinds only");
}

AsymResult asymptotic_exponent(const TypeProfile& p, const ModulusSpec& spec) {
    if (p.kind == ProfileKind::Custom)
        throw std::domain_error("asymptotics need a closed-form kind");
    const int n = 24;
    const DeepWindow w = fit_window(p, spec.variant);
    const bool deep = window_is_deep(p, spec.variant);
    std::vector<double> lnf(n), x_d(n), x_log(n), x_loglog(n);
    for (int i = 0; i < n; ++i) {
        const double frac = double(i) / (n - 1);
        if (deep) {
            const double lam = w.lo * std::pow(w.hi / w.lo, frac);
            lnf[i] = modulus_lnf_deep(p, spec.variant, lam);
            x_log[i] = lam;
            x_loglog[i] = std::log(lam);
        } else {
            const double d = w.lo * std::pow(w.hi / w.lo, frac);
            const ModulusSpec s{spec.variant, w.lo, w.hi};
            lnf[i] = std::log(eval_modulus(p, s, d));
            const double mu = -std::log(d);
            x_d[i] = mu;
            x_log[i] = std::log(mu);
            x_loglog[i] = std::log(std::log(mu));
        }
    }
    std::vector<std::vector<double>> regs;
    std::vector<AsymModel> names;
    if (!deep) { // ln(1/d) overflows any deep window; f is sub-power there anyway
        regs.push_back(x_d);
        names.push_back(AsymModel::PowerOfD);
    }
    regs.push_back(x_log);
    names.push_back(AsymModel::PowerOfLog);
    regs.push_back(x_loglog);
    names.push_back(AsymModel::PowerOfLogLog);
    const ModelFit mf = select_model(regs, names, lnf);
    return {mf.model, mf.exponent, mf.residual_rms};
}

Asym2Result asymptotic_exponent2(const TypeProfile& p, ModulusVariant variant) {
    const int n = 24;
    const DeepWindow w = fit_window(p, variant);
    std::vector<double> lnf(n), x1(n), x2(n);
    for (int i = 0; i < n; ++i) {
        const double frac = double(i) / (n - 1);
        if (window_is_deep(p, variant)) {
            const double lam = w.lo * std::pow(w.hi / w.lo, frac);
            lnf[i] = modulus_lnf_deep(p, variant, lam);
            x1[i] = lam;
            x2[i] = std::log(lam);
        } else {
            const double d = w.lo * std::pow(w.hi / w.lo, frac);
            ModulusSpec s{variant, d, d};
            lnf[i] = std::log(eval_modulus(p, s, d));
            const double mu = -std::log(d);
            x1[i] = mu;
            x2[i] = std::log(mu);
        }
    }
    const PlaneFit pf = fit_plane(x1, x2, lnf);
    return {pf.a, pf.b, pf.residual_rms};
}

TypeProfile profile_from_config(const Config& cfg, const std::string& section) {
    const std::string kind = cfg.get(section + ".kind");
    if (kind == "power")
        return TypeProfile::power(cfg.get_double_or(section + ".m", 1.0));
    if (kind == "exp")
        return TypeProfile::exponential(cfg.get_double_or(section + ".alpha", 0.5),
                                        cfg.get_double_or(section + ".scale", 2.0));
    if (kind == "logexp")
        return TypeProfile::logexp(cfg.get_double_or(section + ".alpha", 3.0));
    throw std::domain_error("unknown profile kind: " + kind);
}

void profile_to_config(const TypeProfile& p, Config& cfg, const std::string& section) {
    switch (p.kind) {
    case ProfileKind::Power:
        cfg.set(section + ".kind", "power");
        cfg.set(section + ".m", std::to_string(p.m));
        break;
    case ProfileKind::Exp:
        cfg.set(section + ".kind", "exp");
        cfg.set(section + ".alpha", std::to_string(p.alpha));
        cfg.set(section + ".scale", std::to_string(p.scale));
        break;
    case ProfileKind::LogExp:
        cfg.set(section + ".kind", "logexp");
        cfg.set(section + ".alpha", std::to_string(p.alpha));
        break;
    case ProfileKind::Custom:
        throw std::domain_error("custom profiles are not serializable");
    }
}

} // namespace dbar2
