// Integration over disks, annuli, Euclidean sub-disks and pseudo-hyperbolic
// disks under the normalized area measure, a weighted measure, or the
// hyperbolic measure. Radial Gauss-Legendre (clustered toward the boundary
// where the region touches it) times a uniform angular rule.
#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "copop/weight.hpp"

namespace copop {
namespace quad {

using cplx = std::complex<double>;

struct QuadratureRule {
    int radial_nodes = 128;
    int angular_nodes = 256;
};

class Region {
public:
    enum class Kind { disk, annulus, euclidean_disk, pseudo_hyperbolic };

    static Region disk(double R);
    static Region annulus(double R1, double R2);
    static Region euclidean_disk(cplx center, double radius);
    static Region pseudo_hyperbolic(cplx a, double r);

    Kind kind() const { return kind_; }
    // resolved Euclidean geometry (pseudo-hyperbolic regions are converted)
    cplx center() const { return center_; }
    double radius() const { return radius_; }
    double inner() const { return inner_; }  // annulus only

private:
    Region() = default;
    Kind kind_ = Kind::disk;
    cplx center_{0.0};
    double radius_ = 1.0;
    double inner_ = 0.0;
};

enum class MeasureKind { area, weighted, hyperbolic };

struct Measure {
    MeasureKind kind = MeasureKind::area;
    const Weight* weight = nullptr;

    static Measure area() { return {MeasureKind::area, nullptr}; }
    static Measure weighted(const Weight& w) { return {MeasureKind::weighted, &w}; }
    static Measure hyperbolic() { return {MeasureKind::hyperbolic, nullptr}; }
};

struct IntegrationResult {
    double value = 0.0;
    double error_estimate = 0.0;  // one-refinement difference
};

/// Integral of f over the region under the chosen measure. Total mass of the
/// unit disk under the area measure is 1. Throws when a sample is non-finite.
IntegrationResult integrate(const std::function<double(cplx)>& f, const Region& region,
                            const QuadratureRule& rule, const Measure& measure);

struct EuclideanDisk {
    cplx center;
    double radius;
};

/// Euclidean center and radius of the pseudo-hyperbolic disk {|sigma_a| < r};
/// the conversion is verified on 16 boundary samples.
EuclideanDisk pseudo_hyperbolic_params(cplx a, double r);

/// Radial Gauss-Legendre nodes/weights for int_lo^hi g(r) dr. Segments ending
/// above 0.9 are mapped through r = 1 - (1-t)^2 to cluster near the boundary.
struct RadialNodes {
    std::vector<double> r;
    std::vector<double> w;
};
RadialNodes radial_segment(double lo, double hi, int n, bool allow_clustering = true);

}  // namespace quad
}  // namespace copop
