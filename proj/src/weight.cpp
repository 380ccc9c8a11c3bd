#include "copop/weight.hpp"

#include <algorithm>
#include <cfloat>
#include <limits>
#include <memory>
#include <stdexcept>

#include "copop/numerics.hpp"

namespace copop {

namespace {

constexpr double kDiffStep = 1e-5;

// Central differences with even extension through 0 (the weight is radial).
double central_d1(const std::function<double(double)>& f, double r) {
    const double h = std::min(kDiffStep, (1.0 - r) / 2.0);
    const double up = f(r + h);
    const double dn = (r - h >= 0.0) ? f(r - h) : f(h - r);
    return (up - dn) / (2.0 * h);
}

double central_d2(const std::function<double(double)>& f, double r) {
    const double h = std::min(kDiffStep, (1.0 - r) / 2.0);
    const double up = f(r + h);
    const double dn = (r - h >= 0.0) ? f(r - h) : f(h - r);
    return (up - 2.0 * f(r) + dn) / (h * h);
}

}  // namespace

Weight Weight::standard(double alpha) {
    if (!(alpha > -1.0)) throw std::invalid_argument("Weight::standard: alpha must be > -1");
    Weight w;
    w.family_ = Family::standard;
    w.scheme_ = DerivScheme::analytic;
    w.alpha_ = alpha;
    w.name_ = "standard(alpha=" + std::to_string(alpha) + ")";
    return w;
}

Weight Weight::custom(std::string name, std::function<double(double)> eval) {
    if (!eval) throw std::invalid_argument("Weight::custom: eval required");
    Weight w;
    w.family_ = Family::custom;
    w.scheme_ = DerivScheme::central_diff;
    w.name_ = std::move(name);
    w.f_ = std::move(eval);
    return w;
}

Weight Weight::custom(std::string name, std::function<double(double)> eval,
                      std::function<double(double)> deriv1,
                      std::function<double(double)> deriv2) {
    if (!eval || !deriv1 || !deriv2)
        throw std::invalid_argument("Weight::custom: eval and both derivatives required");
    // consistency of the supplied derivatives with central differences
    for (int i = 0; i <= 63; ++i) {
        const double r = 0.01 + (0.94 - 0.01) * i / 63.0;
        const double fd1 = central_d1(eval, r), fd2 = central_d2(eval, r);
        const double g1 = deriv1(r), g2 = deriv2(r);
        const double s1 = std::max({std::abs(fd1), std::abs(g1), 1e-8});
        const double s2 = std::max({std::abs(fd2), std::abs(g2), 1e-6});
        if (std::abs(fd1 - g1) > 1e-4 * s1 || std::abs(fd2 - g2) > 1e-4 * s2)
            throw std::invalid_argument(
                "Weight::custom: supplied derivatives inconsistent with finite differences");
    }
    Weight w;
    w.family_ = Family::custom;
    w.scheme_ = DerivScheme::user_supplied;
    w.name_ = std::move(name);
    w.f_ = std::move(eval);
    w.d1_ = std::move(deriv1);
    w.d2_ = std::move(deriv2);
    return w;
}

Weight Weight::from_samples(const std::vector<std::array<double, 2>>& samples) {
    if (samples.size() < 4)
        throw std::invalid_argument("Weight::from_samples: need at least 4 samples");
    std::vector<double> x, y;
    for (const auto& s : samples) {
        if (!(s[0] >= 0.0 && s[0] < 1.0))
            throw std::invalid_argument("Weight::from_samples: abscissae must lie in [0,1)");
        if (!(s[1] > 0.0))
            throw std::invalid_argument("Weight::from_samples: weight values must be positive");
        x.push_back(s[0]);
        y.push_back(s[1]);
    }
    auto spline = std::make_shared<CubicSpline>(std::move(x), std::move(y));
    for (int i = 0; i < 2000; ++i) {
        const double r = i / 2000.0;
        if (!(spline->eval(r) > 0.0))
            throw std::invalid_argument("Weight::from_samples: interpolant not positive on [0,1)");
    }
    Weight w;
    w.family_ = Family::custom;
    w.scheme_ = DerivScheme::spline;
    w.spline_smoothed_ = true;
    w.name_ = "custom-table(" + std::to_string(samples.size()) + " samples)";
    w.f_ = [spline](double r) { return spline->eval(r, 0); };
    w.d1_ = [spline](double r) { return spline->eval(r, 1); };
    w.d2_ = [spline](double r) { return spline->eval(r, 2); };
    return w;
}

double Weight::alpha() const {
    if (family_ != Family::standard)
        throw std::logic_error("Weight::alpha: not a standard-family weight");
    return alpha_;
}

double Weight::eval(double r, int order) const {
    if (!(r >= 0.0 && r < 1.0))
        throw std::domain_error("Weight::eval: r must lie in [0, 1)");
    if (order < 0 || order > 2)
        throw std::invalid_argument("Weight::eval: order must be 0, 1 or 2");
    if (family_ == Family::standard) {
        const double u = 1.0 - r * r;
        switch (order) {
            case 0: return std::pow(u, alpha_);
            case 1: return -2.0 * alpha_ * r * std::pow(u, alpha_ - 1.0);
            default:
                return -2.0 * alpha_ * std::pow(u, alpha_ - 1.0) +
                       4.0 * alpha_ * (alpha_ - 1.0) * r * r * std::pow(u, alpha_ - 2.0);
        }
    }
    switch (order) {
        case 0: return f_(r);
        case 1: return d1_ ? d1_(r) : central_d1(f_, r);
        default: return d2_ ? d2_(r) : central_d2(f_, r);
    }
}

namespace {

// relative slack of "a >= b" scaled by magnitude
double rel_slack(double a, double b) {
    const double s = std::max({std::abs(a), std::abs(b), 1e-300});
    return (a - b) / s;
}

}  // namespace

L1Result check_L1(const Weight& w, int kmax) {
    if (kmax < 10) throw std::invalid_argument("check_L1: kmax must be >= 10");
    if (kmax > 50) throw std::invalid_argument("check_L1: kmax above 50 is not representable");
    L1Result res;
    res.infimum = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= kmax; ++k) {
        const double rk = 1.0 - std::ldexp(1.0, -k);
        const double rk1 = 1.0 - std::ldexp(1.0, -k - 1);
        const double denom = w(rk);
        const double numer = w(rk1);
        if (!(denom >= DBL_MIN) || !std::isfinite(numer)) break;  // underflow guard
        res.ratios.push_back(numer / denom);
        res.usable_kmax = k;
        res.infimum = std::min(res.infimum, numer / denom);
    }
    if (res.ratios.empty()) res.infimum = 0.0;
    return res;
}

AdmissibilityReport check_admissible(const Weight& w, const AdmissibilityOptions& opt) {
    if (opt.grid_size < 100)
        throw std::invalid_argument("check_admissible: grid_size must be >= 100");
    if (!(opt.r0 >= 0.0 && opt.r0 < 1.0))
        throw std::invalid_argument("check_admissible: r0 must lie in [0, 1)");

    const int n = opt.grid_size;
    std::vector<double> r(n), val(n);
    for (int i = 0; i < n; ++i) {
        const double u = double(i) / (n - 1);
        r[i] = 1.0 - std::pow(10.0, -8.0 * u);  // geometric clustering toward 1
        val[i] = w(r[i]);
    }

    AdmissibilityReport rep;
    rep.w4_r0 = opt.r0;

    // W1: non-increasing
    double m1 = std::numeric_limits<double>::infinity();
    for (int i = 0; i + 1 < n; ++i) m1 = std::min(m1, rel_slack(val[i], val[i + 1]));
    rep.w1_margin = m1;
    rep.w1 = m1 >= -opt.slack_tol;

    // W2: omega(r) (1-r)^{-(1+delta)} non-decreasing for some candidate delta
    rep.w2_margin = -std::numeric_limits<double>::infinity();
    for (double delta : opt.delta_candidates) {
        double m2 = std::numeric_limits<double>::infinity();
        double prev = val[0] * std::pow(1.0 - r[0], -(1.0 + delta));
        for (int i = 1; i < n; ++i) {
            const double cur = val[i] * std::pow(1.0 - r[i], -(1.0 + delta));
            m2 = std::min(m2, rel_slack(cur, prev));
            prev = cur;
        }
        if (m2 > rep.w2_margin) rep.w2_margin = m2;
        if (m2 >= -opt.slack_tol) {
            rep.w2 = true;
            rep.w2_delta = delta;
            rep.w2_margin = m2;
            break;
        }
    }

    // W3: samples decay to zero along the tail
    const int tail_start = n - std::max(2, n / 20);
    double tail_m = std::numeric_limits<double>::infinity();
    for (int i = tail_start; i + 1 < n; ++i) tail_m = std::min(tail_m, rel_slack(val[i], val[i + 1]));
    const double w0 = val[0];
    const double decay_margin = opt.w3_tol - val[n - 1] / std::max(w0, 1e-300);
    rep.w3_margin = std::min(tail_m, decay_margin);
    rep.w3 = tail_m >= -opt.slack_tol && decay_margin >= 0.0;

    // W4 on [r0, 1): convex with vanishing slope, or concave
    std::vector<double> d2s, d1tail;
    for (int i = 0; i < n; ++i) {
        if (r[i] < opt.r0) continue;
        d2s.push_back(w.eval(r[i], 2));
        if (i >= tail_start) d1tail.push_back(std::abs(w.eval(r[i], 1)));
    }
    if (d2s.size() < 50) {
        // make sure the window has enough points even for r0 near 1
        d2s.clear();
        d1tail.clear();
        for (int i = 0; i < 200; ++i) {
            const double rr = opt.r0 + (1.0 - 1e-8 - opt.r0) * i / 199.0;
            d2s.push_back(w.eval(rr, 2));
            if (i >= 180) d1tail.push_back(std::abs(w.eval(rr, 1)));
        }
    }
    double convex_m = std::numeric_limits<double>::infinity();
    double concave_m = std::numeric_limits<double>::infinity();
    for (double d2 : d2s) {
        convex_m = std::min(convex_m, d2);
        concave_m = std::min(concave_m, -d2);
    }
    double slope_m = std::numeric_limits<double>::infinity();
    for (double d1 : d1tail) slope_m = std::min(slope_m, opt.w4_deriv_tol - d1);
    const double type1_m = std::min(convex_m, slope_m);
    if (type1_m >= -opt.slack_tol) {
        rep.w4 = AdmissibilityReport::W4::type_I;
        rep.w4_margin = type1_m;
    } else if (concave_m >= -opt.slack_tol) {
        rep.w4 = AdmissibilityReport::W4::type_II;
        rep.w4_margin = concave_m;
    } else {
        rep.w4 = AdmissibilityReport::W4::fails;
        rep.w4_margin = std::max(type1_m, concave_m);
    }

    // (L1) dyadic boundary ratios
    const L1Result l1 = check_L1(w, opt.l1_kmax);
    rep.l1_infimum = l1.infimum;
    rep.l1_usable_kmax = l1.usable_kmax;
    rep.l1 = l1.usable_kmax >= 1 && l1.infimum >= opt.l1_threshold;

    return rep;
}

}  // namespace copop
