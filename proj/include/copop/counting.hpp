// The generalized counting function N(z) = sum of omega over the preimages of
// z under phi, its ratio tau = N / omega, the change-of-variables identity,
// and the sub-mean value inequality.
#pragma once

#include <functional>
#include <span>
#include <vector>

#include "copop/quadrature.hpp"
#include "copop/selfmap.hpp"
#include "copop/weight.hpp"

namespace copop {

struct GeometryError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct CountingOptions {
    bool with_multiplicity = true;  // drop to probe sensitivity to the convention
};

struct CountingSample {
    cplx z;
    double value = 0.0;      // N(z)
    int preimage_count = 0;  // total multiplicity found
    bool at_phi0 = false;    // z within 1e-12 of phi(0)
};

CountingSample counting_function(const SelfMap& phi, const Weight& w, cplx z,
                                 const CountingOptions& opt = {});

double tau(const SelfMap& phi, const Weight& w, cplx z, const CountingOptions& opt = {});

/// Polar node set over 0 < |z| < breaks.back() with radial splits at every
/// break and at the map's support radius; preimage lists are solved once and
/// reused across weights. Nodes landing within 1e-10 of a critical value are
/// jittered radially by 1e-8.
class CountingGrid {
public:
    CountingGrid(const SelfMap& phi, std::vector<double> breaks, int radial_per_segment,
                 int angular);

    std::size_t radial_count() const { return r_.size(); }
    int angular() const { return angular_; }
    cplx node(std::size_t i, std::size_t k) const;
    double radial_node(std::size_t i) const { return r_[i]; }
    double radial_weight(std::size_t i) const { return wr_[i]; }

    /// N at every node for the given weight (row-major: radial index major).
    std::vector<double> counting_values(const Weight& w, const CountingOptions& opt = {}) const;

    /// Cumulative area integrals of h(z, N) over |z| < b for each original break b.
    std::vector<double> cumulative(std::span<const double> N,
                                   const std::function<double(cplx, double)>& h) const;

    const std::vector<double>& breaks() const { return user_breaks_; }

private:
    const SelfMap phi_;
    std::vector<double> user_breaks_;
    std::vector<double> r_, wr_;          // all radial nodes with weights
    std::vector<std::size_t> break_end_;  // radial index (exclusive) per user break
    int angular_ = 256;
    std::vector<std::vector<Preimage>> pre_;  // per node, row-major
};

struct CovCheck {
    double lhs = 0.0;  // integral of f(phi) |phi'|^2 omega dA
    double rhs = 0.0;  // integral of f N dA
    double rel_diff = 0.0;
};

/// Two-sided check of the change-of-variables identity for a non-negative f.
CovCheck verify_change_of_variables(const SelfMap& phi, const Weight& w,
                                    const std::function<double(cplx)>& f,
                                    const quad::QuadratureRule& rule = {});

struct SubmeanCheck {
    double lhs = 0.0;  // N(z)
    double rhs = 0.0;  // (2/r^2) integral of N over |zeta - z| < r
    bool holds = false;
};

/// Sub-mean value inequality on the disk D(z, r); requires |z| - r > 1/2 and
/// |z| + r < 1 (GeometryError otherwise).
SubmeanCheck check_submean(const SelfMap& phi, const Weight& w, cplx z, double r,
                           const quad::QuadratureRule& rule = {32, 64});

}  // namespace copop
