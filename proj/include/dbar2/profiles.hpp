#pragma once
// Type profiles F, their inverses F*, hypothesis integrals and Holder moduli.
//
// Conventions: F is a function of u = t^2 (so Power means F(u) = u^m, Exp
// means F(u) = scale * exp(-u^{-alpha/2}), LogExp means
// F(u) = exp(-1/(sqrt(u) * |ln sqrt(u)|^alpha))). t_max is the right end of
// the certified range where F is increasing, convex, and F(t)/t nondecreasing.
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>
#include "dbar2/fit.hpp"

namespace dbar2 {

struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ProfileKind { Power, Exp, LogExp, Custom };

struct TypeProfile {
    ProfileKind kind = ProfileKind::Power;
    double m = 1.0;       // Power exponent, m >= 1
    double alpha = 0.5;   // Exp: in (0,1] (1 is formal, classifier only); LogExp: > 2
    double scale = 2.0;   // Exp prefactor, >= 1
    double t_max = 1.0;
    std::function<double(double)> custom; // Custom F on [0, t_max]

    static TypeProfile power(double m, double t_max = 1.0);
    // t_max defaults to the convexity threshold (alpha/2 / (1 + alpha/2))^{2/alpha}
    static TypeProfile exponential(double alpha, double scale = 2.0);
    static TypeProfile logexp(double alpha); // t_max found numerically
    static TypeProfile custom_profile(std::function<double(double)> F, double t_max);

    std::string name() const;
};

enum class ModulusVariant { CaseI, CaseII, Neumann };

const char* variant_name(ModulusVariant v);

struct ModulusSpec {
    ModulusVariant variant = ModulusVariant::CaseI;
    double d_min = 1e-12;
    double d_max = 1e-1;
};

double eval_F(const TypeProfile& p, double t);
double eval_F_prime(const TypeProfile& p, double t);
double eval_F_second(const TypeProfile& p, double t);
double eval_Fstar(const TypeProfile& p, double rho);

struct HypResult {
    double value = 0.0;
    bool converged = false;
};

// Integral of |ln F(t^2)| (CaseI) or |ln t * ln F(t^2)| (CaseII) over (0, delta],
// via dyadic shells toward 0 with the geometric-decay convergence diagnosis.
HypResult hypothesis_integral(const TypeProfile& p, ModulusVariant variant, double delta);

// f(1/d): CaseI = 1 / int_0^d sqrt(F*(t))/t dt, CaseII adds |ln sqrt(F*(t))|,
// Neumann = 1/sqrt(F*(d)). Throws DivergenceError when shells fail to decay.
double eval_modulus(const TypeProfile& p, const ModulusSpec& spec, double d);

// Deep tabulation for asymptotics beyond double range: input lambda = ln(-ln d),
// output ln f. Supported for Exp and LogExp kinds (the only ones that need it).
double modulus_lnf_deep(const TypeProfile& p, ModulusVariant variant, double lambda);

struct AsymResult {
    AsymModel model = AsymModel::PowerOfD;
    double exponent = 0.0;
    double residual_rms = 0.0;
};

// Least-squares fit of ln f against ln(1/d), ln(-ln d) or ln(ln(-ln d));
// the model with the smallest residual wins. Tabulation windows are fixed
// per kind/variant (deep windows for Exp CaseII and LogExp).
AsymResult asymptotic_exponent(const TypeProfile& p, const ModulusSpec& spec);

struct Asym2Result {
    double a = 0.0; // coefficient on the kind's leading regressor
    double b = 0.0; // coefficient on the logarithmic correction regressor
    double residual_rms = 0.0;
};

// Two-regressor fit for the CaseII composite laws. Regressor pairs:
// Power: (ln(1/d), ln(-ln d)); Exp/LogExp: (ln(-ln d), ln(ln(-ln d))).
Asym2Result asymptotic_exponent2(const TypeProfile& p, ModulusVariant variant);

// Serialization to/from the flat config ("profile.kind", "profile.m", ...).
class Config;
TypeProfile profile_from_config(const Config& cfg, const std::string& section = "profile");
void profile_to_config(const TypeProfile& p, Config& cfg, const std::string& section = "profile");

} // namespace dbar2
