#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "copop/quadrature.hpp"
#include "corpus.hpp"

using namespace copop;
using namespace copop::quad;
using corpus::rel_diff;

TEST_CASE("area measure is normalized on the unit disk") {
    const auto res = integrate([](cplx) { return 1.0; }, Region::disk(1.0),
                               QuadratureRule{64, 128}, Measure::area());
    CHECK(std::abs(res.value - 1.0) < 1e-12);
}

TEST_CASE("second moment of the unit disk") {
    const auto res = integrate([](cplx z) { return std::norm(z); }, Region::disk(1.0),
                               QuadratureRule{64, 128}, Measure::area());
    CHECK(std::abs(res.value - 0.5) < 1e-12);
}

TEST_CASE("hyperbolic measure of centered disks") {
    const auto res = integrate([](cplx) { return 1.0; }, Region::disk(0.5),
                               QuadratureRule{64, 64}, Measure::hyperbolic());
    CHECK(rel_diff(res.value, 1.0 / 3.0) < 1e-12);
    for (double R : {0.9, 0.99}) {
        const auto r2 = integrate([](cplx) { return 1.0; }, Region::disk(R),
                                  QuadratureRule{128, 32}, Measure::hyperbolic());
        CHECK(rel_diff(r2.value, R * R / (1.0 - R * R)) < 1e-8);
    }
}

TEST_CASE("weighted measure agrees with the radial closed form") {
    const Weight w1 = Weight::standard(1.0);
    const auto res = integrate([](cplx) { return 1.0; }, Region::disk(1.0),
                               QuadratureRule{64, 64}, Measure::weighted(w1));
    CHECK(rel_diff(res.value, 0.5) < 1e-12);  // 2 int r (1-r^2) dr
}

TEST_CASE("pseudo-hyperbolic disks resolve to Euclidean ones") {
    const auto d0 = pseudo_hyperbolic_params(cplx(0.0), 0.5);
    CHECK(std::abs(d0.center) < 1e-15);
    CHECK(d0.radius == doctest::Approx(0.5));

    const auto d = pseudo_hyperbolic_params(cplx(0.5), 0.5);
    CHECK(d.center.real() == doctest::Approx(0.375 / 0.875));
    CHECK(d.radius == doctest::Approx(0.375 / 0.875));

    // radius collapses toward the boundary
    const auto near = pseudo_hyperbolic_params(cplx(0.999), 0.5);
    CHECK(near.radius < 2e-3);
}

TEST_CASE("area of pseudo-hyperbolic disks matches the squared radius") {
    for (double a : {0.2, 0.5, 0.8}) {
        for (double r : {0.3, 0.5}) {
            const auto reg = Region::pseudo_hyperbolic(cplx(a), r);
            const auto res = integrate([](cplx) { return 1.0; }, reg, QuadratureRule{48, 64},
                                       Measure::area());
            const auto d = pseudo_hyperbolic_params(cplx(a), r);
            CHECK(std::abs(res.value - d.radius * d.radius) <=
                  std::max(res.error_estimate, 1e-12));
        }
    }
}

TEST_CASE("annuli add up to the disk") {
    const auto f = [](cplx z) { return std::exp(z.real()) + std::norm(z); };
    const QuadratureRule rule{96, 128};
    const double whole = integrate(f, Region::disk(0.9), rule, Measure::area()).value;
    const double inner = integrate(f, Region::disk(0.4), rule, Measure::area()).value;
    const double ring = integrate(f, Region::annulus(0.4, 0.9), rule, Measure::area()).value;
    CHECK(rel_diff(whole, inner + ring) < 1e-12);
}

TEST_CASE("doubling stays within the reported error estimate") {
    const Weight w2 = Weight::standard(2.0);
    int idx = 0;
    const std::function<double(cplx)> integrands[] = {
        [](cplx z) { return std::cos(3.0 * z.real()) + 1.5; },
        [](cplx z) { return std::abs(z); },
        [](cplx z) { return 1.0 / (1.1 - z.real()); },
        [&w2](cplx z) { return w2(std::abs(z)); },
    };
    for (const auto& f : integrands) {
        ++idx;
        const auto coarse = integrate(f, Region::disk(0.95), QuadratureRule{32, 64},
                                      Measure::area());
        const auto fine = integrate(f, Region::disk(0.95), QuadratureRule{64, 128},
                                    Measure::area());
        INFO("integrand ", idx);
        CHECK(std::abs(fine.value - coarse.value) <= coarse.error_estimate + 1e-12);
    }
}

TEST_CASE("regions must stay inside the disk") {
    CHECK_THROWS_AS(Region::euclidean_disk(cplx(0.8), 0.3), std::invalid_argument);
    CHECK_THROWS_AS(Region::disk(1.5), std::invalid_argument);
    CHECK_THROWS_AS(Region::annulus(0.9, 0.4), std::invalid_argument);
}

TEST_CASE("non-finite samples are reported") {
    CHECK_THROWS_WITH_AS(
        integrate([](cplx z) { return z.real() > 0.2 ? std::nan("") : 1.0; }, Region::disk(0.5),
                  QuadratureRule{8, 9}, Measure::area()),
        doctest::Contains("non-finite"), std::runtime_error);
}
