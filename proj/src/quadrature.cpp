#include "copop/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "copop/numerics.hpp"

namespace copop {
namespace quad {

Region Region::disk(double R) {
    if (!(R > 0.0 && R <= 1.0))
        throw std::invalid_argument("Region::disk: R must lie in (0, 1]");
    Region reg;
    reg.kind_ = Kind::disk;
    reg.radius_ = R;
    return reg;
}

Region Region::annulus(double R1, double R2) {
    if (!(0.0 <= R1 && R1 < R2 && R2 <= 1.0))
        throw std::invalid_argument("Region::annulus: need 0 <= R1 < R2 <= 1");
    Region reg;
    reg.kind_ = Kind::annulus;
    reg.inner_ = R1;
    reg.radius_ = R2;
    return reg;
}

Region Region::euclidean_disk(cplx center, double radius) {
    if (!(radius > 0.0))
        throw std::invalid_argument("Region::euclidean_disk: radius must be positive");
    if (!(std::abs(center) + radius <= 1.0 - 1e-13))
        throw std::invalid_argument("Region::euclidean_disk: region must stay inside the disk");
    Region reg;
    reg.kind_ = Kind::euclidean_disk;
    reg.center_ = center;
    reg.radius_ = radius;
    return reg;
}

Region Region::pseudo_hyperbolic(cplx a, double r) {
    const EuclideanDisk d = pseudo_hyperbolic_params(a, r);
    Region reg;
    reg.kind_ = Kind::pseudo_hyperbolic;
    reg.center_ = d.center;
    reg.radius_ = d.radius;
    return reg;
}

EuclideanDisk pseudo_hyperbolic_params(cplx a, double r) {
    if (!(std::abs(a) < 1.0))
        throw std::invalid_argument("pseudo_hyperbolic_params: |a| < 1 required");
    if (!(r > 0.0 && r < 1.0))
        throw std::invalid_argument("pseudo_hyperbolic_params: r must lie in (0, 1)");
    const double a2 = std::norm(a);
    const double denom = 1.0 - r * r * a2;
    EuclideanDisk d;
    d.center = (1.0 - r * r) * a / denom;
    d.radius = (1.0 - a2) * r / denom;
    // sanity: |sigma_a| = r on 16 samples of the Euclidean boundary
    for (int k = 0; k < 16; ++k) {
        const double th = 2.0 * M_PI * k / 16;
        const cplx z = d.center + d.radius * cplx(std::cos(th), std::sin(th));
        const double v = std::abs((a - z) / (1.0 - std::conj(a) * z));
        if (std::abs(v - r) > 1e-10)
            throw std::logic_error("pseudo_hyperbolic_params: boundary check failed");
    }
    return d;
}

RadialNodes radial_segment(double lo, double hi, int n, bool allow_clustering) {
    if (!(0.0 <= lo && lo < hi)) throw std::invalid_argument("radial_segment: need 0 <= lo < hi");
    if (n < 1) throw std::invalid_argument("radial_segment: n must be >= 1");
    const auto rule = gauss_legendre(n);
    RadialNodes out;
    out.r.resize(n);
    out.w.resize(n);
    if (allow_clustering && hi > 0.9 && hi <= 1.0) {
        const double tlo = 1.0 - std::sqrt(1.0 - lo);
        const double thi = 1.0 - std::sqrt(1.0 - hi);
        for (int i = 0; i < n; ++i) {
            const double t = 0.5 * (rule->x[i] + 1.0) * (thi - tlo) + tlo;
            out.r[i] = 1.0 - (1.0 - t) * (1.0 - t);
            out.w[i] = 0.5 * rule->w[i] * (thi - tlo) * 2.0 * (1.0 - t);
        }
    } else {
        for (int i = 0; i < n; ++i) {
            out.r[i] = 0.5 * (rule->x[i] + 1.0) * (hi - lo) + lo;
            out.w[i] = 0.5 * rule->w[i] * (hi - lo);
        }
    }
    return out;
}

namespace {

double measure_density(const Measure& mu, cplx z) {
    switch (mu.kind) {
        case MeasureKind::area: return 1.0;
        case MeasureKind::weighted: return mu.weight->eval(std::abs(z), 0);
        case MeasureKind::hyperbolic: {
            const double u = 1.0 - std::norm(z);
            return 1.0 / (u * u);
        }
    }
    return 1.0;
}

double run_rule(const std::function<double(cplx)>& f, const Region& region,
                int nr, int na, const Measure& mu) {
    const bool origin_centered =
        region.kind() == Region::Kind::disk || region.kind() == Region::Kind::annulus;
    const double lo = origin_centered && region.kind() == Region::Kind::annulus
                          ? region.inner() : 0.0;
    const double hi = region.radius();
    const RadialNodes rad = radial_segment(lo, hi, nr, origin_centered);
    const double dth = 2.0 * M_PI / na;
    std::vector<double> radial_parts(nr, 0.0);
    for (int i = 0; i < nr; ++i) {
        const double s = rad.r[i];
        double ring = 0.0;
        for (int k = 0; k < na; ++k) {
            const double th = dth * k;
            const cplx z = origin_centered
                               ? cplx(s * std::cos(th), s * std::sin(th))
                               : region.center() + s * cplx(std::cos(th), std::sin(th));
            const double fv = f(z);
            const double dv = measure_density(mu, z);
            if (!std::isfinite(fv) || !std::isfinite(dv))
                throw std::runtime_error("integrate: non-finite sample at z = (" +
                                         std::to_string(z.real()) + ", " +
                                         std::to_string(z.imag()) + ")");
            ring += fv * dv;
        }
        radial_parts[i] = rad.w[i] * s * ring * dth / M_PI;
    }
    return pairwise_sum(radial_parts);
}

}  // namespace

IntegrationResult integrate(const std::function<double(cplx)>& f, const Region& region,
                            const QuadratureRule& rule, const Measure& measure) {
    if (measure.kind == MeasureKind::weighted && measure.weight == nullptr)
        throw std::invalid_argument("integrate: weighted measure needs a weight");
    const double coarse = run_rule(f, region, rule.radial_nodes, rule.angular_nodes, measure);
    const double fine = run_rule(f, region, 2 * rule.radial_nodes, 2 * rule.angular_nodes, measure);
    return {fine, std::abs(fine - coarse)};
}

}  // namespace quad
}  // namespace copop
