// Radial weights on [0, 1): the standard family (1-r^2)^alpha, custom callables
// and spline-smoothed sample tables, together with the admissibility and
// dyadic boundary-ratio checks.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace copop {

class Weight {
public:
    enum class Family { standard, custom };
    enum class DerivScheme { analytic, user_supplied, central_diff, spline };

    /// (1 - r^2)^alpha with analytic derivatives; requires alpha > -1.
    static Weight standard(double alpha);

    /// Custom positive weight; derivatives by central differences at h = 1e-5
    /// (step shrunk near the endpoints, even extension at 0).
    static Weight custom(std::string name, std::function<double(double)> eval);

    /// Custom weight with user-supplied derivatives. Consistency with central
    /// differences (relative 1e-4 on a sample grid) is enforced.
    static Weight custom(std::string name, std::function<double(double)> eval,
                         std::function<double(double)> deriv1,
                         std::function<double(double)> deriv2);

    /// Natural cubic spline through [r, w] samples; flagged spline_smoothed.
    static Weight from_samples(const std::vector<std::array<double, 2>>& samples);

    /// omega (order 0), omega' (1) or omega'' (2); domain error outside [0, 1).
    double eval(double r, int order = 0) const;
    double operator()(double r) const { return eval(r, 0); }

    Family family() const { return family_; }
    double alpha() const;  // standard family only
    DerivScheme deriv_scheme() const { return scheme_; }
    bool spline_smoothed() const { return spline_smoothed_; }
    const std::string& name() const { return name_; }

private:
    Weight() = default;

    Family family_ = Family::custom;
    DerivScheme scheme_ = DerivScheme::central_diff;
    bool spline_smoothed_ = false;
    double alpha_ = 0.0;
    std::string name_;
    std::function<double(double)> f_, d1_, d2_;
};

/// Per-condition verdicts with worst-case slack margins. A margin >= -slack_tol
/// means the sampled check passed; the magnitude tells how much room was left.
struct AdmissibilityReport {
    bool w1 = false;
    bool w2 = false;
    bool w3 = false;
    bool l1 = false;
    double w2_delta = std::nan("");  // witnessing exponent, NaN when none passed

    enum class W4 { type_I, type_II, fails };
    W4 w4 = W4::fails;
    double w4_r0 = 0.0;

    double w1_margin = 0.0;
    double w2_margin = 0.0;
    double w3_margin = 0.0;
    double w4_margin = 0.0;

    double l1_infimum = 0.0;
    int l1_usable_kmax = 0;

    bool admissible() const { return w1 && w2 && w3 && w4 != W4::fails; }
};

struct AdmissibilityOptions {
    int grid_size = 10000;                                  // clustered toward r = 1
    std::vector<double> delta_candidates = {0.1, 0.25, 0.5, 1.0, 2.0};
    double r0 = 0.0;                                        // left end of the w4 window
    double slack_tol = 1e-9;
    double w3_tol = 1e-2;       // omega(r_last)/omega(0) must fall below this
    double w4_deriv_tol = 1e-4; // |omega'| tail bound for the convex branch
    int l1_kmax = 20;
    double l1_threshold = 1e-3;
};

AdmissibilityReport check_admissible(const Weight& w, const AdmissibilityOptions& opt = {});

struct L1Result {
    double infimum = 0.0;        // min over usable k of omega(1-2^{-k-1})/omega(1-2^{-k})
    int usable_kmax = 0;         // largest k before omega underflows
    std::vector<double> ratios;  // ratios for k = 1..usable_kmax
};

/// Dyadic boundary-ratio scan; kmax in [10, 50].
L1Result check_L1(const Weight& w, int kmax = 20);

}  // namespace copop
