#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include "dbar2/config.hpp"
#include "dbar2/profiles.hpp"

using namespace dbar2;

namespace {

// Independent root of eta - a ln(eta) = lambda on the branch eta > a.
double eta_bisect(double lambda, double a) {
    double lo = a + 1.0, hi = std::max(lambda + a * std::log(lambda + 3.0) + 10.0, a + 20.0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        ((mid - a * std::log(mid) - lambda) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

void check_profile_invariants(const TypeProfile& p) {
    CHECK(eval_F(p, 0.0) == 0.0);
    const int n = 120;
    double prev = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = p.t_max * std::pow(1e-12, 1.0 - double(i + 1) / n);
        const double F = eval_F(p, t);
        CHECK(F >= prev); // increasing
        prev = F;
        // F(t)/t nondecreasing <=> t F' >= F
        CHECK(t * eval_F_prime(p, t) >= F * (1.0 - 1e-9) - 1e-300);
        if (i > 0) {
            const double a = p.t_max * std::pow(1e-12, 1.0 - double(i) / n);
            const double mid = 0.5 * (a + t);
            CHECK(eval_F(p, mid) <=
                  0.5 * (eval_F(p, a) + F) * (1.0 + 1e-12) + 1e-300);
        }
        // F* inverts F
        if (F > 1e-280)
            CHECK(eval_Fstar(p, F) == doctest::Approx(t).epsilon(1e-9));
    }
}

} // namespace

TEST_CASE("power profile closed forms") {
    const TypeProfile p1 = TypeProfile::power(1.0);
    CHECK(p1.t_max == 1.0);
    CHECK(eval_F(p1, 0.5) == doctest::Approx(0.5));
    CHECK(eval_F_prime(p1, 0.0) == doctest::Approx(1.0));
    CHECK(eval_Fstar(p1, 0.3) == doctest::Approx(0.3));

    const TypeProfile p2 = TypeProfile::power(2.0);
    CHECK(eval_F(p2, 0.1) == doctest::Approx(0.01));
    CHECK(eval_Fstar(p2, 0.01) == doctest::Approx(0.1));

    CHECK_THROWS_AS((void)eval_F(p1, 1.5), std::domain_error);
    CHECK_THROWS_AS(TypeProfile::power(0.5), std::domain_error);
}

TEST_CASE("exp profile closed forms and thresholds") {
    const TypeProfile p = TypeProfile::exponential(0.5, 2.0);
    // convexity threshold (beta/(1+beta))^{1/beta}, beta = 1/4
    CHECK(p.t_max == doctest::Approx(0.0016).epsilon(1e-12));
    CHECK(eval_F(p, 1e-4) == doctest::Approx(2.0 * std::exp(-10.0)).epsilon(1e-13));
    CHECK(eval_Fstar(p, 2.0 * std::exp(-10.0)) == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(eval_F(p, p.t_max) == doctest::Approx(2.0 * std::exp(-5.0)).epsilon(1e-12));

    // derivative against a central difference
    const double t = 1e-4, h = 1e-9;
    const double fd = (eval_F(p, t + h) - eval_F(p, t - h)) / (2.0 * h);
    CHECK(eval_F_prime(p, t) == doctest::Approx(fd).epsilon(1e-5));

    CHECK_THROWS_AS((void)eval_Fstar(p, 0.02), std::range_error);

    const TypeProfile q = TypeProfile::exponential(0.25, 2.0);
    CHECK(q.t_max == doctest::Approx(std::pow(1.0 / 9.0, 8.0)).epsilon(1e-12));
}

TEST_CASE("logexp profile threshold and invariants") {
    const TypeProfile p = TypeProfile::logexp(3.0);
    CHECK(p.t_max > 1e-8);
    CHECK(p.t_max < 1e-5);
    const double top = eval_F(p, p.t_max);
    CHECK(top > 1e-3);
    CHECK(top < 1e-1);
    check_profile_invariants(p);
}

TEST_CASE("profile invariants hold for every kind") {
    check_profile_invariants(TypeProfile::power(1.0));
    check_profile_invariants(TypeProfile::power(2.0));
    check_profile_invariants(TypeProfile::exponential(0.5, 2.0));
    check_profile_invariants(TypeProfile::exponential(0.25, 2.0));
    check_profile_invariants(TypeProfile::exponential(0.75, 1.0));
}

TEST_CASE("custom profile uses generic fallbacks") {
    const TypeProfile p =
        TypeProfile::custom_profile([](double t) { return t * t; }, 1.0);
    CHECK(eval_Fstar(p, 0.25) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(eval_F_prime(p, 0.3) == doctest::Approx(0.6).epsilon(1e-8));
    CHECK_THROWS_AS(
        TypeProfile::custom_profile([](double t) { return t + 0.5; }, 1.0),
        std::domain_error);
}

TEST_CASE("hypothesis integral against antiderivatives") {
    const TypeProfile p1 = TypeProfile::power(1.0);
    // int_0^δ 2m|ln t| dt = 2m δ (1 - ln δ)
    HypResult h = hypothesis_integral(p1, ModulusVariant::CaseI, 0.1);
    CHECK(h.converged);
    CHECK(h.value == doctest::Approx(0.2 * (1.0 - std::log(0.1))).epsilon(1e-5));

    // int_0^δ 2m (ln t)^2 dt = 2m δ ((ln δ)^2 - 2 ln δ + 2)
    h = hypothesis_integral(p1, ModulusVariant::CaseII, 0.1);
    const double l = std::log(0.1);
    CHECK(h.converged);
    CHECK(h.value == doctest::Approx(0.2 * (l * l - 2.0 * l + 2.0)).epsilon(1e-5));

    // Exp: int_0^δ (t^{α-2·(α/2)}... ) = δ^{1-α}/(1-α) - ln(scale) δ
    const TypeProfile pe = TypeProfile::exponential(0.5, 2.0);
    const double delta = std::sqrt(pe.t_max); // = 0.04
    h = hypothesis_integral(pe, ModulusVariant::CaseI, delta);
    const double oracle =
        std::pow(delta, 0.5) / 0.5 - std::log(2.0) * delta;
    CHECK(h.converged);
    CHECK(h.value == doctest::Approx(oracle).epsilon(1e-5));

    CHECK_THROWS_AS(hypothesis_integral(pe, ModulusVariant::CaseI, 0.1),
                    std::domain_error);
}

TEST_CASE("hypothesis integral flags the borderline profile divergent") {
    // alpha = 1: t |ln F(t^2)| tends to a constant, shells cannot decay
    const TypeProfile p = TypeProfile::exponential(1.0, 2.0);
    const HypResult h = hypothesis_integral(p, ModulusVariant::CaseI, 0.3);
    CHECK_FALSE(h.converged);
}

TEST_CASE("hypothesis integral converges for the logexp profile") {
    const TypeProfile p = TypeProfile::logexp(3.0);
    const double delta = 0.9 * std::sqrt(p.t_max);
    const HypResult h = hypothesis_integral(p, ModulusVariant::CaseI, delta);
    CHECK(h.converged);
    // int_0^δ dt/(t (-ln t)^3) = (-ln δ)^{-2}/2; 48 shells leave ~3% behind
    const double oracle = 0.5 * std::pow(-std::log(delta), -2.0);
    CHECK(h.value == doctest::Approx(oracle).epsilon(5e-2));
}

TEST_CASE("modulus against closed forms: power") {
    const TypeProfile p1 = TypeProfile::power(1.0);
    ModulusSpec s{ModulusVariant::CaseI, 1e-12, 0.1};
    CHECK(eval_modulus(p1, s, 0.01) == doctest::Approx(5.0).epsilon(1e-8));

    s.variant = ModulusVariant::CaseII;
    const double f2 = 1.0 / (0.1 * (-std::log(0.01) + 2.0));
    CHECK(eval_modulus(p1, s, 0.01) == doctest::Approx(f2).epsilon(1e-8));

    const TypeProfile p2 = TypeProfile::power(2.0);
    s.variant = ModulusVariant::CaseI;
    CHECK(eval_modulus(p2, s, 1e-8) == doctest::Approx(25.0).epsilon(1e-8));

    s.variant = ModulusVariant::Neumann;
    CHECK(eval_modulus(p1, s, 0.04) == doctest::Approx(5.0).epsilon(1e-12));

    CHECK_THROWS_AS((void)eval_modulus(p1, s, 1e-13), std::domain_error);
}

TEST_CASE("modulus against closed forms: exp") {
    const TypeProfile p = TypeProfile::exponential(0.5, 2.0);
    const double d = 1e-6;
    const double X = std::log(2.0) - std::log(d); // ln(scale/d)
    ModulusSpec s{ModulusVariant::CaseI, 1e-12, 0.01};
    CHECK(eval_modulus(p, s, d) == doctest::Approx(X).epsilon(1e-8));

    s.variant = ModulusVariant::CaseII;
    const double fII = X / (2.0 * (std::log(X) + 1.0));
    CHECK(eval_modulus(p, s, d) == doctest::Approx(fII).epsilon(1e-8));

    s.variant = ModulusVariant::Neumann;
    CHECK(eval_modulus(p, s, d) == doctest::Approx(X * X).epsilon(1e-12));
}

TEST_CASE("modulus diverges at the borderline exponent") {
    const TypeProfile p = TypeProfile::exponential(1.0, 2.0);
    const ModulusSpec s{ModulusVariant::CaseI, 1e-12, 0.05};
    CHECK_THROWS_AS((void)eval_modulus(p, s, 0.01), DivergenceError);
}

TEST_CASE("modulus against closed forms: logexp") {
    const TypeProfile p = TypeProfile::logexp(3.0);
    const double d = 0.5 * eval_F(p, p.t_max);
    const ModulusSpec s{ModulusVariant::CaseI, 1e-12, d};

    // round trip through the closed-form F validates the inversion
    const double ts = eval_Fstar(p, d);
    CHECK(eval_F(p, ts) == doctest::Approx(d).epsilon(1e-9));

    // L-substitution has an elementary antiderivative
    const double eta = eta_bisect(std::log(-std::log(d)), 3.0);
    const double I = 0.5 / (eta * eta) - std::pow(eta, -3.0);
    CHECK(eval_modulus(p, s, d) == doctest::Approx(1.0 / I).epsilon(1e-7));

    ModulusSpec s2{ModulusVariant::CaseII, 1e-12, d};
    const double III = 1.0 / eta - 1.5 / (eta * eta);
    CHECK(eval_modulus(p, s2, d) == doctest::Approx(1.0 / III).epsilon(1e-7));
}

TEST_CASE("deep tabulation matches closed forms far beyond double range") {
    const TypeProfile pe = TypeProfile::exponential(0.5, 2.0);
    // CaseI: ln f = (1-2b) eta - ln(2b/(1-2b)), eta = lambda/(2b)
    CHECK(modulus_lnf_deep(pe, ModulusVariant::CaseI, 100.0) ==
          doctest::Approx(100.0).epsilon(1e-9));
    // CaseII: ln f = (1-2b) eta - ln(2b) - ln(eta/(1-2b) + (1-2b)^{-2})
    const double expect2 = 100.0 - std::log(0.5) - std::log(200.0 / 0.5 + 4.0);
    CHECK(modulus_lnf_deep(pe, ModulusVariant::CaseII, 100.0) ==
          doctest::Approx(expect2).epsilon(1e-9));

    const TypeProfile pl = TypeProfile::logexp(3.0);
    const double eta = eta_bisect(1000.0, 3.0);
    const double I1 = 0.5 / (eta * eta) - std::pow(eta, -3.0);
    CHECK(modulus_lnf_deep(pl, ModulusVariant::CaseI, 1000.0) ==
          doctest::Approx(-std::log(I1)).epsilon(1e-7));

    CHECK_THROWS_AS((void)modulus_lnf_deep(TypeProfile::power(1.0),
                                           ModulusVariant::CaseI, 100.0),
                    std::domain_error);
}

TEST_CASE("asymptotic exponents identify the model and the rate") {
    const TypeProfile p1 = TypeProfile::power(1.0);
    AsymResult a = asymptotic_exponent(p1, {ModulusVariant::CaseI, 1e-12, 1e-4});
    CHECK(a.model == AsymModel::PowerOfD);
    CHECK(a.exponent == doctest::Approx(0.5).epsilon(1e-3));

    a = asymptotic_exponent(p1, {ModulusVariant::CaseII, 1e-300, 1e-30});
    CHECK(a.model == AsymModel::PowerOfD);
    CHECK(a.exponent == doctest::Approx(0.5).epsilon(0.02));

    const TypeProfile pe = TypeProfile::exponential(0.5, 2.0);
    a = asymptotic_exponent(pe, {ModulusVariant::CaseI, 1e-260, 1e-20});
    CHECK(a.model == AsymModel::PowerOfLog);
    CHECK(a.exponent == doctest::Approx(1.0).epsilon(0.05)); // 1/alpha - 1

    a = asymptotic_exponent(pe, {ModulusVariant::CaseII, 1e-12, 1e-4});
    CHECK(a.model == AsymModel::PowerOfLog);
    CHECK(a.exponent == doctest::Approx(1.0).epsilon(0.05));

    const TypeProfile pl = TypeProfile::logexp(3.0);
    a = asymptotic_exponent(pl, {ModulusVariant::CaseI, 1e-12, 1e-4});
    CHECK(a.model == AsymModel::PowerOfLogLog);
    CHECK(a.exponent == doctest::Approx(2.0).epsilon(0.10)); // alpha - 1

    const TypeProfile p2 = TypeProfile::power(2.0);
    a = asymptotic_exponent(p2, {ModulusVariant::Neumann, 1e-12, 1e-4});
    CHECK(a.model == AsymModel::PowerOfD);
    CHECK(a.exponent == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("two-term fits resolve the logarithmic corrections") {
    // power CaseII: f ~ d^{-1/(2m)} / (|ln d| + 2m)
    Asym2Result r = asymptotic_exponent2(TypeProfile::power(2.0), ModulusVariant::CaseII);
    CHECK(r.a == doctest::Approx(0.25).epsilon(0.02));
    CHECK(r.b == doctest::Approx(-1.0).epsilon(0.15));

    // exp CaseII: f ~ (-ln d)^{1/alpha - 1} / ln(-ln d)
    r = asymptotic_exponent2(TypeProfile::exponential(0.5, 2.0), ModulusVariant::CaseII);
    CHECK(r.a == doctest::Approx(1.0).epsilon(0.05));
    CHECK(r.b == doctest::Approx(-1.0).epsilon(0.10));

    // logexp CaseII: f ~ (ln(-ln d))^{alpha - 2}
    r = asymptotic_exponent2(TypeProfile::logexp(3.0), ModulusVariant::CaseII);
    CHECK(std::abs(r.a) <= 1e-3);
    CHECK(r.b == doctest::Approx(1.0).epsilon(0.10));
}

TEST_CASE("profile config round trip") {
    Config cfg;
    profile_to_config(TypeProfile::exponential(0.75, 1.5), cfg);
    const TypeProfile p = profile_from_config(cfg);
    CHECK(p.kind == ProfileKind::Exp);
    CHECK(p.alpha == doctest::Approx(0.75));
    CHECK(p.scale == doctest::Approx(1.5));

    Config bad;
    bad.set("profile.kind", "mystery");
    CHECK_THROWS_AS((void)profile_from_config(bad), std::domain_error);
}
