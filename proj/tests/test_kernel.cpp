#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include "dbar2/kernel.hpp"
#include "dbar2/rng.hpp"

using namespace dbar2;

namespace {

ComplexPoint draw_pair(Rng& rng, const DomainSpec& d, ComplexPoint& zeta_out) {
    const auto b = sample_boundary(d, 1, rng.next_u64()).front();
    zeta_out = b.point;
    for (;;) {
        const C u1(rng.normal(), rng.normal()), u2(rng.normal(), rng.normal());
        const double n = std::sqrt(std::norm(u1) + std::norm(u2));
        if (n < 1e-12) continue;
        const double r = 0.4 * rng.uniform();
        const ComplexPoint z{zeta_out.z1 + (r / n) * u1, zeta_out.z2 + (r / n) * u2};
        if (rho(d, z) <= 0.0) return z;
    }
}

} // namespace

TEST_CASE("cutoff: plateaus, midpoint, smooth joins") {
    const double eps = 0.25;
    CHECK(cutoff_chi(0.0, eps) == 1.0);
    CHECK(cutoff_chi(0.5 * eps, eps) == 1.0);
    CHECK(cutoff_chi(eps, eps) == 0.0);
    CHECK(cutoff_chi(2.0 * eps, eps) == 0.0);
    CHECK(cutoff_chi(0.75 * eps, eps) == doctest::Approx(0.5).epsilon(1e-14));
    double prev = 1.0;
    for (int i = 1; i <= 100; ++i) {
        const double v = cutoff_chi((0.5 + 0.005 * i) * eps, eps);
        CHECK(v <= prev + 1e-15);
        prev = v;
    }
    const double h = 1e-6;
    CHECK(std::abs(cutoff_chi(0.5 * eps + h, eps) - 1.0) <= 1e-11);
    CHECK(std::abs(cutoff_chi(eps - h, eps)) <= 1e-11);
}

TEST_CASE("bundle algebra: mixing identity and branch reductions") {
    Rng rng(31);
    const auto d = DomainSpec::make(DomainShape::Modulus, TypeProfile::exponential(0.5, 2.0));
    for (int i = 0; i < 200; ++i) {
        ComplexPoint zeta;
        const ComplexPoint z = draw_pair(rng, d, zeta);
        const KernelBundle k = eval_kernel(d, z, zeta);
        const C d1 = zeta.z1 - z.z1, d2 = zeta.z2 - z.z2;
        // Phi# = chi Phi/2 + (1-chi)|zeta-z|^2 for every pair
        const C mix = k.chi * 0.5 * k.phi + (1.0 - k.chi) * (std::norm(d1) + std::norm(d2));
        CHECK(std::abs(k.phi_sharp - mix) <= 1e-13 * (1.0 + std::abs(k.phi_sharp)));
        const double dist = std::sqrt(std::norm(d1) + std::norm(d2));
        if (dist >= d.epsilon) {
            CHECK(std::abs(k.phi1 - std::conj(d1)) == 0.0);
            CHECK(std::abs(k.phi2 - std::conj(d2)) == 0.0);
            CHECK(k.phi_sharp.real() == doctest::Approx(std::norm(d1) + std::norm(d2)));
            CHECK(std::abs(k.phi_sharp.imag()) <= 1e-15);
        }
        if (dist <= 0.5 * d.epsilon)
            CHECK(std::abs(k.phi_sharp - 0.5 * k.phi) <= 1e-14 * (1.0 + std::abs(k.phi)));
        // interior z keeps the support function away from zero
        const double lower =
            0.5 * k.chi * std::abs(rho(d, z)) + (1.0 - k.chi) * (std::norm(d1) + std::norm(d2));
        CHECK(k.phi_sharp.real() >= lower - 1e-12);
    }
    const auto b = sample_boundary(d, 1, 7).front();
    const KernelBundle k0 = eval_kernel(d, b.point, b);
    CHECK(std::abs(k0.phi) == 0.0);
    CHECK(std::abs(k0.phi_sharp) == 0.0);
}

TEST_CASE("support identity: Re Phi + rho splits into gap plus sphere term") {
    Rng rng(57);
    for (const auto& d :
         {DomainSpec::make(DomainShape::Modulus, TypeProfile::power(1.0)),
          DomainSpec::make(DomainShape::Modulus, TypeProfile::exponential(0.5, 2.0)),
          DomainSpec::make(DomainShape::RealPart, TypeProfile::exponential(0.5, 2.0))}) {
        for (int i = 0; i < 150; ++i) {
            ComplexPoint zeta;
            const ComplexPoint z = draw_pair(rng, d, zeta);
            const KernelBundle k = eval_kernel(d, z, zeta);
            const double lhs = k.phi.real() + rho(d, z);
            const double rhs = std::norm(zeta.z2 - z.z2) + taylor_gap(d, z.z1, zeta.z1);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        }
    }
    // half-space model drops the sphere term
    const auto dh =
        DomainSpec::make(DomainShape::Modulus, TypeProfile::power(2.0), RModel::HalfSpace);
    for (int i = 0; i < 150; ++i) {
        ComplexPoint zeta;
        const ComplexPoint z = draw_pair(rng, dh, zeta);
        const KernelBundle k = eval_kernel(dh, z, zeta);
        CHECK(k.phi.real() + rho(dh, z) ==
              doctest::Approx(taylor_gap(dh, z.z1, zeta.z1)).epsilon(1e-10));
    }
}

TEST_CASE("taylor gap: nonnegative, dominates the slope chain bound") {
    Rng rng(91);
    for (const auto& d :
         {DomainSpec::make(DomainShape::Modulus, TypeProfile::exponential(0.5, 2.0)),
          DomainSpec::make(DomainShape::RealPart, TypeProfile::power(2.0))}) {
        const double r = std::sqrt(d.rim_sq);
        for (int i = 0; i < 400; ++i) {
            const C z1(rng.uniform(-r, r), rng.uniform(-r, r));
            const C w1(rng.uniform(-r, r), rng.uniform(-r, r));
            const double gap = taylor_gap(d, z1, w1);
            double chain;
            if (d.shape == DomainShape::Modulus)
                chain = G_ext_prime(d, std::norm(w1)) * std::norm(z1 - w1);
            else
                chain = G_ext_prime(d, w1.real() * w1.real()) *
                        (z1.real() - w1.real()) * (z1.real() - w1.real());
            CHECK(gap >= chain - 1e-12 * (1.0 + gap));
            CHECK(gap >= -1e-14);
        }
    }
    // power m=1: the gap is exactly the squared step
    const auto d1 = DomainSpec::make(DomainShape::Modulus, TypeProfile::power(1.0));
    CHECK(taylor_gap(d1, C(0.3, 0.1), C(-0.2, 0.4)) ==
          doctest::Approx(std::norm(C(0.5, -0.3))).epsilon(1e-14));
}

TEST_CASE("support inequality report: strictly convex ball, unit constant") {
    const auto d = DomainSpec::make(DomainShape::Modulus, TypeProfile::power(1.0));
    const Report r = verify_lemma21(d, 2000, 11);
    CHECK(r.pass);
    CHECK(r.suite == "lemma21");
    CHECK((int)r.constants.at("halvings") == 0);
    CHECK((double)r.constants.at("epsilon") == doctest::Approx(0.25));
    // every pair of the unit-ball realization sits on c = 1; the ratio picks up
    // rounding noise of order eps_mach / separation^2 from the tightest pairs
    CHECK((double)r.constants.at("c_best") == doctest::Approx(1.0).epsilon(2e-5));
    CHECK((double)r.constants.at("worst_flat_margin") >= -1e-10);
    CHECK((double)r.constants.at("worst_positivity_margin") >= -1e-10);
    CHECK((double)r.constants.at("worst_sharp_half_margin") >= -1e-10);
    CHECK((int)r.constants.at("flat_pairs") > 100);
    CHECK((int)r.constants.at("convex_pairs") > 100);
    const auto j = r.to_json();
    CHECK(j.size() == 4);
    CHECK(j.contains("worst_case"));
}

TEST_CASE("support inequality report: infinite-type profiles and both shapes") {
    for (const auto& d :
         {DomainSpec::make(DomainShape::Modulus, TypeProfile::exponential(0.5, 2.0)),
          DomainSpec::make(DomainShape::Modulus, TypeProfile::logexp(3.0)),
          DomainSpec::make(DomainShape::RealPart, TypeProfile::exponential(0.25, 2.0)),
          DomainSpec::make(DomainShape::Modulus, TypeProfile::power(2.0), RModel::HalfSpace)}) {
        const Report r = verify_lemma21(d, 1500, 23);
        CHECK(r.pass);
        CHECK((int)r.constants.at("halvings") == 0);
        CHECK((double)r.constants.at("worst_chain_margin") >= -1e-10);
        if (d.shape == DomainShape::RealPart)
            CHECK((int)r.constants.at("convex_pairs") == 0);
    }
}

TEST_CASE("holomorphy report: plateau fields are dbar-flat, far numerator vanishes") {
    for (const auto& d :
         {DomainSpec::make(DomainShape::Modulus, TypeProfile::exponential(0.5, 2.0)),
          DomainSpec::make(DomainShape::RealPart, TypeProfile::power(1.0))}) {
        const Report r = verify_holomorphy(d, 80, 29);
        CHECK(r.pass);
        CHECK((double)r.constants.at("max_dbar_residual") <= 1e-6);
        CHECK((double)r.constants.at("far_numerator_max") <= 1e-13);
        // the identity is a chi = 0 effect, not an accident of the integrand
        CHECK((double)r.constants.at("mixed_numerator_max") > 1e-6);
    }
}
