#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "copop/diagnostics.hpp"
#include "corpus.hpp"

using namespace copop;
using corpus::rel_diff;

TEST_CASE("essential norm profile verdicts across reference maps") {
    const Weight w1 = Weight::standard(1.0);

    const auto compact = essential_norm_profile(corpus::dilation_half(), w1);
    CHECK(compact.verdict == CompactnessVerdict::Compact);
    for (double s : compact.sup_values) CHECK(s == 0.0);

    const auto id_prof = essential_norm_profile(SelfMap::identity(), w1);
    CHECK(id_prof.verdict == CompactnessVerdict::NotCompact);
    for (double s : id_prof.sup_values) CHECK(s == doctest::Approx(1.0));
    REQUIRE(id_prof.extrapolated_limsup.has_value());
    CHECK(*id_prof.extrapolated_limsup == doctest::Approx(1.0));

    const auto mb_prof = essential_norm_profile(corpus::moebius_half(), w1);
    CHECK(mb_prof.verdict == CompactnessVerdict::NotCompact);
    // closed form of the angular sup: (1-|a|^2)/(1-|a| r)^2
    for (std::size_t i = 0; i < mb_prof.radii.size(); ++i) {
        const double r = mb_prof.radii[i];
        const double expect = 0.75 / ((1.0 - 0.5 * r) * (1.0 - 0.5 * r));
        CHECK(rel_diff(mb_prof.sup_values[i], expect) < 1e-9);
        CHECK(mb_prof.sup_values[i] >= 1.0 / 3.0);
        CHECK(mb_prof.sup_values[i] <= 3.0);
    }
}

TEST_CASE("profile sup values recompute through tau at the stored angles") {
    const Weight w2 = Weight::standard(2.0);
    const auto prof = essential_norm_profile(corpus::blaschke2(), w2);
    for (std::size_t i = 0; i < prof.radii.size(); ++i) {
        const double th = prof.angular_argmax[i];
        const cplx z = prof.radii[i] * cplx(std::cos(th), std::sin(th));
        CHECK(tau(corpus::blaschke2(), w2, z) == prof.sup_values[i]);
    }
}

TEST_CASE("compactness verdict with an overriding tolerance") {
    const Weight w1 = Weight::standard(1.0);
    const auto prof = essential_norm_profile(SelfMap::identity(), w1);
    CHECK(compactness_verdict(prof, 2.0, 1e-3) == CompactnessVerdict::Compact);
    CHECK(compactness_verdict(prof, 1e-6, 1e-3) == CompactnessVerdict::NotCompact);
}

TEST_CASE("verdicts are invariant under rotations of the map") {
    const Weight w1 = Weight::standard(1.0);
    for (double theta : {0.0, M_PI / 3, M_PI}) {
        const cplx ph(std::cos(theta), std::sin(theta));
        // e^{i theta'} phi(e^{i theta} z) for the squaring map
        for (double theta2 : {0.0, M_PI / 3}) {
            const cplx ph2(std::cos(theta2), std::sin(theta2));
            const auto rotated = SelfMap::polynomial({0.0, 0.0, ph2 * ph * ph});
            const auto prof = essential_norm_profile(rotated, w1);
            const auto base = essential_norm_profile(corpus::square(), w1);
            CHECK(prof.verdict == base.verdict);
            for (std::size_t i = 0; i < prof.sup_values.size(); ++i)
                CHECK(rel_diff(prof.sup_values[i], base.sup_values[i]) < 1e-9);
        }
    }
}

TEST_CASE("Schatten integrals: compactly supported ratio is summable for every p") {
    const Weight w1 = Weight::standard(1.0);
    const std::vector<double> rseq = {0.6, 0.9, 0.99};
    const std::vector<double> ps = {0.5, 1.0, 2.0, 4.0};
    const auto reports = schatten_integral_multi(corpus::dilation_half(), w1, ps,
                                                 quad::QuadratureRule{128, 128}, rseq);
    for (const auto& rep : reports) {
        INFO("p = ", rep.p);
        CHECK(rep.verdict == SchattenVerdict::in_Sp);
        // stabilized after the support radius
        CHECK(std::abs(rep.integral_values[2] - rep.integral_values[0]) <= 1e-10);
    }
}

TEST_CASE("Schatten integrals: identity map diverges at the closed-form rate") {
    const Weight w1 = Weight::standard(1.0);
    const std::vector<double> rseq = {0.9, 0.99, 0.999};
    const auto rep = schatten_integral(SelfMap::identity(), w1, 2.0,
                                       quad::QuadratureRule{128, 64}, rseq);
    CHECK(rep.verdict == SchattenVerdict::not_in_Sp);
    // tau = 1, so the integral is R^2/(1-R^2) exactly
    for (std::size_t i = 0; i < rseq.size(); ++i) {
        const double R = rseq[i];
        CHECK(rel_diff(rep.integral_values[i], R * R / (1.0 - R * R)) < 1e-8);
    }
    CHECK(rep.growth_exponent == doctest::Approx(-1.0).epsilon(0.2));
}

TEST_CASE("Schatten integrals are monotone in R and in p on bounded ratios") {
    const Weight w1 = Weight::standard(1.0);
    const std::vector<double> rseq = {0.3, 0.45, 0.6, 0.9};
    // tau <= 1 on the support for the half dilation
    std::vector<double> ps = {1.0, 2.0, 4.0};
    const auto reports = schatten_integral_multi(corpus::dilation_half(), w1, ps,
                                                 quad::QuadratureRule{96, 96}, rseq);
    for (const auto& rep : reports)
        for (std::size_t i = 1; i < rep.integral_values.size(); ++i)
            CHECK(rep.integral_values[i] >= rep.integral_values[i - 1] - 1e-14);
    for (std::size_t i = 0; i < rseq.size(); ++i) {
        CHECK(reports[1].integral_values[i] <= reports[0].integral_values[i] + 1e-12);
        CHECK(reports[2].integral_values[i] <= reports[1].integral_values[i] + 1e-12);
    }
}

TEST_CASE("Berezin transform closed form for the identity map") {
    const Weight w1 = Weight::standard(1.0);
    const double got = berezin_transform(SelfMap::identity(), w1, cplx(0.0), 0.5);
    // integral of (1-|t|^2) over |t| < 1/2 equals R^2 - R^4/2 = 0.21875
    CHECK(rel_diff(got, 0.21875) < 1e-6);
    // vanishing counting data gives zero
    CHECK(berezin_transform(corpus::dilation_half(), w1, cplx(0.9), 0.2) == 0.0);
}

TEST_CASE("pointwise ratio is controlled by the Berezin transform") {
    std::mt19937 rng(123);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Weight w1 = Weight::standard(1.0);
    const double r = 0.4;
    for (const auto& phi : corpus::all_maps()) {
        for (int i = 0; i < 20; ++i) {
            const double rad = 0.1 + 0.8 * unit(rng);
            const double th = 2.0 * M_PI * unit(rng);
            const cplx z = rad * cplx(std::cos(th), std::sin(th));
            const double psi = tau(phi, w1, z);
            const double hat = berezin_transform(phi, w1, z, r, quad::QuadratureRule{32, 48});
            INFO(phi.describe(), " z=(", z.real(), ",", z.imag(), ")");
            CHECK(psi <= 2.0 / (r * r) * hat + 1e-9);
        }
    }
}

TEST_CASE("test function norms: exact at the origin, uniformly comparable to one") {
    const Weight w1 = Weight::standard(1.0);
    const auto t = compute_moments(w1, 8192);
    const auto at0 = test_function_norm(w1, t, cplx(0.0), 0.1, 64);
    CHECK(at0.value == 1.0);

    double lo = 1e300, hi = 0.0;
    for (double a : {0.0, 0.5, 0.9, 0.99}) {
        const auto r = test_function_norm(w1, t, cplx(a), 0.1, 8192);
        lo = std::min(lo, r.value);
        hi = std::max(hi, r.value);
    }
    CHECK(hi / lo <= 10.0);
    // a fixed nontrivial case stays within the comparability band
    const auto r9 = test_function_norm(w1, t, cplx(0.9), 1.0, 4096);
    CHECK(r9.value > 0.1);
    CHECK(r9.value < 10.0);
}

TEST_CASE("weight comparability under automorphisms") {
    const Weight w1 = Weight::standard(1.0);
    const auto trivial = weight_comparability(w1, cplx(0.0));
    CHECK(trivial.sup_ratio == doctest::Approx(1.0));
    CHECK(trivial.inf_ratio == doctest::Approx(1.0));

    const auto r = weight_comparability(w1, cplx(0.5));
    // closed form extremes (1-|b|)/(1+|b|) and its reciprocal
    CHECK(r.sup_ratio <= 3.0 + 1e-9);
    CHECK(r.inf_ratio >= 1.0 / 3.0 - 1e-9);
    CHECK(r.sup_ratio > 2.8);
    CHECK(r.inf_ratio < 0.36);
    CHECK(rel_diff(r.sup_ratio, 1.0 / r.inf_ratio) < 0.05);
}

TEST_CASE("closed range ratios: identity and rotations give exactly one") {
    const Weight w1 = Weight::standard(1.0);
    for (const auto& f : {RangeTestFn::monomial(1), RangeTestFn::monomial(17),
                          RangeTestFn::kernel(cplx(0.5), 1.0)}) {
        CHECK(std::abs(closed_range_ratio(SelfMap::identity(), w1, f) - 1.0) < 1e-9);
        CHECK(std::abs(closed_range_ratio(SelfMap::dilation(cplx(std::cos(1.0), std::sin(1.0))),
                                          w1, f) -
                       1.0) < 1e-9);
    }
}

TEST_CASE("closed range ratios: dilation decays geometrically over monomials") {
    const Weight w1 = Weight::standard(1.0);
    for (int n : {1, 3, 6, 10}) {
        const double got =
            closed_range_ratio(corpus::dilation_half(), w1, RangeTestFn::monomial(n));
        CHECK(rel_diff(got, std::pow(0.25, n)) < 1e-6);
    }
}

TEST_CASE("closed range probe verdicts") {
    const Weight w1 = Weight::standard(1.0);

    ClosedRangeOptions opt;
    opt.nmax_monomials = 40;
    const auto fail_rep = closed_range_probe(corpus::dilation_half(), w1, opt);
    CHECK(fail_rep.verdict == RangeVerdict::fails);
    CHECK(fail_rep.infimum < 1e-3);

    const auto id_rep = closed_range_probe(SelfMap::identity(), w1, opt);
    CHECK(id_rep.verdict == RangeVerdict::necessary_condition_passes);
    CHECK(std::abs(id_rep.infimum - 1.0) < 1e-9);

    // invertible automorphism: ratio bounded below by the comparability constant
    const auto mb_rep = closed_range_probe(corpus::moebius_half(), w1, opt);
    CHECK(mb_rep.verdict == RangeVerdict::necessary_condition_passes);
    CHECK(mb_rep.infimum >= 0.2);
}

TEST_CASE("closed range probe can renormalize the origin") {
    const Weight w1 = Weight::standard(1.0);
    ClosedRangeOptions opt;
    opt.nmax_monomials = 10;
    opt.normalize_origin = true;
    const auto rep = closed_range_probe(corpus::moebius_half(), w1, opt);
    CHECK(rep.normalized_origin);
    // sigma_{phi(0)} circ phi fixes the origin and stays invertible
    CHECK(rep.verdict == RangeVerdict::necessary_condition_passes);
}
