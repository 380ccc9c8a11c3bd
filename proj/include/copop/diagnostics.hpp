// Numerical diagnostics built on the counting function: essential-norm
// profile and compactness verdict, Schatten-membership integrals, the
// Berezin-type transform, kernel-type test function norms, weight
// comparability under automorphisms, and closed-range probing.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "copop/moments.hpp"
#include "copop/operators.hpp"

namespace copop {

enum class CompactnessVerdict { Compact, NotCompact, UnboundedIndicator, Inconclusive };
const char* to_string(CompactnessVerdict v);

struct EssentialNormProfile {
    std::vector<double> radii;
    std::vector<double> sup_values;       // per-radius angular sup of tau
    std::vector<double> angular_argmax;   // attaining angle per radius
    std::optional<double> extrapolated_limsup;  // empty when diverging
    CompactnessVerdict verdict = CompactnessVerdict::Inconclusive;
    int angles_used = 0;
};

struct ProfileOptions {
    std::vector<double> radii = {0.9, 0.99, 0.999, 0.9999};
    int angles = 512;          // doubled (up to 8x) until the sup stabilizes
    double compact_tol = 1e-6;
    double notcompact_tol = 1e-3;
};

EssentialNormProfile essential_norm_profile(const SelfMap& phi, const Weight& w,
                                            const ProfileOptions& opt = {});

/// Re-derives the verdict of a computed profile with an overriding tolerance.
CompactnessVerdict compactness_verdict(const EssentialNormProfile& profile, double compact_tol,
                                       double notcompact_tol = 1e-3);

enum class SchattenVerdict { in_Sp, not_in_Sp, inconclusive };
const char* to_string(SchattenVerdict v);

struct SchattenReport {
    double p = 2.0;
    std::vector<double> R_sequence;
    std::vector<double> integral_values;  // integral over |z| < R of (N/omega)^{p/2} d(hyperbolic)
    SchattenVerdict verdict = SchattenVerdict::inconclusive;
    double growth_exponent = 0.0;  // slope of log-increments vs log(1 - R)
};

SchattenReport schatten_integral(const SelfMap& phi, const Weight& w, double p,
                                 const quad::QuadratureRule& rule,
                                 std::span<const double> R_sequence);

/// Shared-grid variant: evaluates the counting ratio once for several p.
std::vector<SchattenReport> schatten_integral_multi(const SelfMap& phi, const Weight& w,
                                                    std::span<const double> ps,
                                                    const quad::QuadratureRule& rule,
                                                    std::span<const double> R_sequence);

/// Berezin-type transform of psi = N/omega at z with aperture r:
/// (1-|z|^2)^{-2} omega(z)^{-1} * integral of N over the pseudo-hyperbolic disk.
double berezin_transform(const SelfMap& phi, const Weight& w, cplx z, double r,
                         const quad::QuadratureRule& rule = {64, 128});

struct TestFnNorm {
    double value = 0.0;  // ||f_a|| in the derivative norm
    double tail = 0.0;   // estimated mass beyond the truncation
    int terms_used = 0;
};

/// Norm of the kernel-type test function
/// f_a(z) = omega(a)^{-1/2} (1-|a|^2)^{1+delta} (1 - conj(a) z)^{-(1+delta)}.
TestFnNorm test_function_norm(const Weight& w, const MomentTable& moments, cplx a, double delta,
                              int M);

struct ComparabilityResult {
    double sup_ratio = 0.0;
    double inf_ratio = 0.0;
};

/// Extremes of omega(|sigma_b(z)|) / omega(|z|) over a boundary-clustered grid.
ComparabilityResult weight_comparability(const Weight& w, cplx b, int radial = 64,
                                         int angular = 256);

/// Test function descriptors for the closed-range inequality.
struct RangeTestFn {
    enum class Kind { monomial, kernel } kind = Kind::monomial;
    int n = 1;          // monomial degree
    cplx a{0.0};        // kernel parameter
    double delta = 1.0; // kernel exponent
    std::string label() const;

    static RangeTestFn monomial(int n);
    static RangeTestFn kernel(cplx a, double delta);
};

/// Quotient of int |f'|^2 N dA by int |f'|^2 omega dA (both on the same grid).
double closed_range_ratio(const SelfMap& phi, const Weight& w, const RangeTestFn& f,
                          const quad::QuadratureRule& rule = {160, 256});

enum class RangeVerdict { necessary_condition_passes, fails, inconclusive };
const char* to_string(RangeVerdict v);

struct ClosedRangeReport {
    std::vector<RangeTestFn> family;
    std::vector<double> ratios;
    double infimum = 0.0;
    RangeVerdict verdict = RangeVerdict::inconclusive;
    bool normalized_origin = false;  // probed sigma_{phi(0)} composed with phi
};

struct ClosedRangeOptions {
    int nmax_monomials = 40;
    std::vector<cplx> a_grid = {cplx(0.0), cplx(0.5), cplx(0.9)};
    double delta = 1.0;
    bool normalize_origin = false;
    double fail_threshold = 1e-4;
    quad::QuadratureRule rule = {160, 256};
};

/// Finite-family probe of the closed-range inequality: a small infimum refutes
/// the inequality; a positive one can only report that no witness was found.
ClosedRangeReport closed_range_probe(const SelfMap& phi, const Weight& w,
                                     const ClosedRangeOptions& opt = {});

}  // namespace copop
