#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "copop/counting.hpp"
#include "corpus.hpp"

using namespace copop;
using corpus::rel_diff;

TEST_CASE("counting function closed forms") {
    const Weight w1 = Weight::standard(1.0);

    const auto id = SelfMap::identity();
    const auto s_id = counting_function(id, w1, cplx(0.6));
    CHECK(s_id.value == doctest::Approx(0.64));  // omega(0.6)
    CHECK(s_id.preimage_count == 1);

    // both square roots carry modulus sqrt(|z|)
    const auto sq = corpus::square();
    const cplx z49 = 0.49 * cplx(std::cos(0.7), std::sin(0.7));
    const auto s_sq = counting_function(sq, w1, z49);
    CHECK(s_sq.value == doctest::Approx(2.0 * (1.0 - 0.49)).epsilon(1e-10));

    // automorphisms: N(z) = omega(sigma_a(z))
    const auto mb = corpus::moebius_half();
    std::mt19937 rng(9);
    for (int i = 0; i < 25; ++i) {
        const cplx z = corpus::random_disk_point(rng);
        const auto s = counting_function(mb, w1, z);
        CHECK(rel_diff(s.value, w1(std::abs(sigma(cplx(0.5), z)))) < 1e-12);
    }

    // dilation misses most of the disk
    const auto dil = corpus::dilation_half();
    CHECK(counting_function(dil, w1, cplx(0.8)).value == 0.0);
    CHECK(counting_function(dil, w1, cplx(0.8)).preimage_count == 0);
}

TEST_CASE("the value at phi(0) is flagged") {
    const auto sq = corpus::square();
    const auto s = counting_function(sq, Weight::standard(1.0), cplx(0.0));
    CHECK(s.at_phi0);
    CHECK(s.value == doctest::Approx(2.0));  // double root at 0, omega(0) = 1
    CHECK_FALSE(counting_function(sq, Weight::standard(1.0), cplx(0.3)).at_phi0);
}

TEST_CASE("multiplicity flag changes degenerate counts only") {
    const auto sq = corpus::square();
    const Weight w1 = Weight::standard(1.0);
    CountingOptions no_mult;
    no_mult.with_multiplicity = false;
    CHECK(counting_function(sq, w1, cplx(0.0), no_mult).value == doctest::Approx(1.0));
    CHECK(counting_function(sq, w1, cplx(0.25), no_mult).value ==
          doctest::Approx(counting_function(sq, w1, cplx(0.25)).value));
}

TEST_CASE("tau closed forms") {
    const Weight w1 = Weight::standard(1.0);
    const auto id = SelfMap::identity();
    std::mt19937 rng(4);
    for (int i = 0; i < 10; ++i)
        CHECK(tau(id, w1, corpus::random_disk_point(rng)) == doctest::Approx(1.0));

    // rotation by pi preserves the modulus
    const auto rot = SelfMap::moebius(cplx(0.0), 0.0);  // z -> -z
    CHECK(tau(rot, w1, cplx(0.4, 0.2)) == doctest::Approx(1.0));

    // dilation: N/omega = omega(2 r) / omega(r)
    const auto dil = corpus::dilation_half();
    CHECK(rel_diff(tau(dil, w1, cplx(0.3)), 0.64 / 0.91) < 1e-12);
}

TEST_CASE("counting is rotation invariant for radial weights") {
    const Weight w2 = Weight::standard(2.0);
    std::mt19937 rng(31);
    const auto sq = corpus::square();
    // post-rotation: N_{rho circ phi}(z) = N_phi(e^{-i theta} z)
    for (double theta : {M_PI / 3, M_PI}) {
        const auto rotated =
            SelfMap::polynomial({0.0, 0.0, cplx(std::cos(theta), std::sin(theta))});
        for (int i = 0; i < 10; ++i) {
            const cplx z = corpus::random_disk_point(rng);
            const cplx back = cplx(std::cos(-theta), std::sin(-theta)) * z;
            CHECK(rel_diff(counting_function(rotated, w2, z).value,
                           counting_function(sq, w2, back).value) < 1e-10);
        }
    }
    // pre-rotation: N_{phi circ rho} = N_phi, here (e^{i theta} z)^2 = e^{2 i theta} z^2
    for (double theta : {M_PI / 3, M_PI}) {
        const cplx ph(std::cos(theta), std::sin(theta));
        const auto pre_rotated = SelfMap::polynomial({0.0, 0.0, ph * ph});
        for (int i = 0; i < 10; ++i) {
            const cplx z = corpus::random_disk_point(rng);
            CHECK(rel_diff(counting_function(pre_rotated, w2, z).value,
                           counting_function(sq, w2, z).value) < 1e-10);
        }
    }
}

TEST_CASE("change of variables: dilation closed form") {
    // lhs = rhs = lambda^2 / 2 for f = 1 on the first-order standard weight
    const auto check = verify_change_of_variables(corpus::dilation_half(),
                                                  Weight::standard(1.0),
                                                  [](cplx) { return 1.0; },
                                                  quad::QuadratureRule{96, 192});
    CHECK(rel_diff(check.lhs, 0.125) < 1e-6);
    CHECK(rel_diff(check.rhs, 0.125) < 1e-6);
    CHECK(check.rel_diff < 1e-6);
}

TEST_CASE("change of variables: identity map is exact") {
    const auto check = verify_change_of_variables(SelfMap::identity(), Weight::standard(1.0),
                                                  [](cplx z) { return std::norm(z); },
                                                  quad::QuadratureRule{64, 128});
    CHECK(check.rel_diff < 1e-12);
}

TEST_CASE("change of variables holds across the corpus") {
    const std::function<double(cplx)> fs[] = {
        [](cplx) { return 1.0; },
        [](cplx z) { return std::norm(z); },
        [](cplx z) { return z.real() + 1.0; },
    };
    for (const auto& phi : corpus::all_maps()) {
        for (double alpha : {1.0, 2.0}) {
            const Weight w = Weight::standard(alpha);
            for (const auto& f : fs) {
                const auto check =
                    verify_change_of_variables(phi, w, f, quad::QuadratureRule{128, 256});
                INFO(phi.describe(), " alpha=", alpha);
                CHECK(check.rel_diff <= 1e-3);
            }
        }
    }
}

TEST_CASE("change of variables rejects negative test integrands") {
    CHECK_THROWS_AS(verify_change_of_variables(corpus::square(), Weight::standard(1.0),
                                               [](cplx z) { return z.real(); },
                                               quad::QuadratureRule{16, 16}),
                    std::invalid_argument);
}

TEST_CASE("sub-mean value property") {
    const Weight w1 = Weight::standard(1.0);
    const auto id = SelfMap::identity();
    const auto c1 = check_submean(id, w1, cplx(0.7), 0.1);
    CHECK(c1.holds);
    CHECK(c1.lhs == doctest::Approx(w1(0.7)));

    CHECK_THROWS_AS(check_submean(id, w1, cplx(0.55), 0.1), GeometryError);

    const auto c2 = check_submean(corpus::square(), w1, cplx(0.7), 0.05);
    CHECK(c2.holds);
}

TEST_CASE("sub-mean inequality on random admissible samples") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Weight w1 = Weight::standard(1.0);
    for (const auto& phi : corpus::all_maps()) {
        int done = 0;
        while (done < 50) {
            const double r = 0.02 + 0.15 * unit(rng);
            const double lo = 0.5 + r + 0.02, hi = 1.0 - r - 0.02;
            if (lo >= hi) continue;
            const double rad = lo + (hi - lo) * unit(rng);
            const double th = 2.0 * M_PI * unit(rng);
            const auto c = check_submean(phi, w1, rad * cplx(std::cos(th), std::sin(th)), r,
                                         quad::QuadratureRule{24, 48});
            CHECK(c.holds);
            ++done;
        }
    }
}

TEST_CASE("counting grid: cumulative integration and support splits") {
    const Weight w0 = Weight::standard(0.0);
    CountingGrid grid(corpus::dilation_half(), {0.9, 0.99}, 64, 64);
    const auto N = grid.counting_values(w0);
    const auto cums = grid.cumulative(N, [](cplx, double n) { return n; });
    REQUIRE(cums.size() == 2);
    // integral of the indicator of |z| < 1/2 under the normalized area measure
    CHECK(rel_diff(cums[0], 0.25) < 1e-12);
    CHECK(rel_diff(cums[1], 0.25) < 1e-12);
}
