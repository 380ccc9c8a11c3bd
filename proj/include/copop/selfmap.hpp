// Analytic self-maps of the unit disk by family: polynomials, dilations,
// disk automorphisms, finite Blaschke products, and automorphism-composed
// variants. Supports exact evaluation, differentiation, preimage solving and
// truncated power expansion.
#pragma once

#include <complex>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "copop/roots.hpp"

namespace copop {

struct ConstantMapError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Preimage {
    cplx point;
    int multiplicity;
};

struct MapValidation {
    double max_boundary_modulus = 0.0;
    cplx argmax;        // boundary point attaining the maximum
    bool passes = false;
    bool structural = false;  // automorphism/Blaschke families pass by construction
};

struct PowerCoefficients {
    std::vector<cplx> c;    // Taylor coefficients of phi^n, degrees 0..M
    double tail_sq = 0.0;   // bound on sum_{k>M} |c_k|^2
    double tail_k2 = 0.0;   // bound on sum_{k>M} k^2 |c_k|^2
};

class SelfMap {
public:
    enum class Family { polynomial, dilation, moebius, blaschke, composed };

    static SelfMap polynomial(std::vector<cplx> coeffs);  // c0 + c1 z + ...
    static SelfMap dilation(cplx lambda);                 // lambda z
    static SelfMap moebius(cplx a, double theta);         // e^{i theta} (a-z)/(1-conj(a) z)
    static SelfMap blaschke(std::vector<cplx> zeros, double theta);
    static SelfMap identity() { return polynomial({cplx(0.0), cplx(1.0)}); }

    /// sigma_b composed on the left: z -> (b - base(z)) / (1 - conj(b) base(z)).
    static SelfMap compose_sigma(cplx b, const SelfMap& base);

    Family family() const { return family_; }
    std::string describe() const;

    /// phi(z) (order 0) or phi'(z) (order 1); domain error when |z| >= 1.
    cplx eval(cplx z, int order = 0) const;
    cplx operator()(cplx z) const { return eval_anywhere(z, 0); }

    /// Evaluation without the domain check (boundary sampling, growth probes).
    cplx eval_anywhere(cplx z, int order = 0) const;

    bool is_constant() const;
    int degree() const;  // valence bound
    cplx phi0() const { return eval_anywhere(cplx(0.0)); }

    /// Boundary-sample validation (2048 samples); automorphism and Blaschke
    /// families pass structurally.
    MapValidation validate() const;

    /// min(1, sup over the boundary samples of |phi|), exact per family where
    /// a closed form exists. Counting integrands vanish beyond this radius.
    double support_radius() const;

    /// All solutions of phi(a) = z inside the disk, with multiplicity.
    /// Residual |phi(a) - z| <= 1e-10 is enforced after polishing.
    std::vector<Preimage> preimages(cplx z) const;

    /// Taylor coefficients of phi at 0 up to degree M.
    std::vector<cplx> taylor(int M) const;

    /// Taylor coefficients of phi^n up to degree M with tail bounds
    /// (exact tails for polynomial-type maps, Cauchy-type bounds otherwise).
    PowerCoefficients power_coefficients(int n, int M) const;

    /// Images of the critical points inside the disk (empty for degree-1 maps).
    std::vector<cplx> critical_values() const;

private:
    SelfMap() = default;
    std::vector<cplx> preimage_polynomial(cplx z) const;  // polynomial whose roots are preimages
    void refresh_boundary_stats();

    Family family_ = Family::polynomial;
    std::vector<cplx> coeffs_;   // polynomial
    cplx lambda_{0.0};           // dilation
    cplx a_{0.0};                // moebius parameter / composed offset b
    double theta_ = 0.0;         // moebius/blaschke unimodular phase
    std::vector<cplx> zeros_;    // blaschke
    std::shared_ptr<const SelfMap> base_;  // composed
    double boundary_sup_ = 1.0;  // sampled sup of |phi| on the circle
    cplx boundary_argmax_{1.0};
    // blaschke numerator/denominator coefficients, cached for preimages
    std::vector<cplx> num_, den_;
};

/// Elementary factor sigma_a(z) = (a - z) / (1 - conj(a) z).
cplx sigma(cplx a, cplx z);
cplx sigma_deriv(cplx a, cplx z);

/// Truncated Cauchy product of Taylor series (degrees above M dropped).
std::vector<cplx> series_mul(std::span<const cplx> a, std::span<const cplx> b, int M);

}  // namespace copop
