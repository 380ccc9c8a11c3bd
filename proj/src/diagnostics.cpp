#include "copop/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "copop/numerics.hpp"

namespace copop {

const char* to_string(CompactnessVerdict v) {
    switch (v) {
        case CompactnessVerdict::Compact: return "Compact";
        case CompactnessVerdict::NotCompact: return "NotCompact";
        case CompactnessVerdict::UnboundedIndicator: return "Unbounded-indicator";
        default: return "Inconclusive";
    }
}

const char* to_string(SchattenVerdict v) {
    switch (v) {
        case SchattenVerdict::in_Sp: return "in-Sp";
        case SchattenVerdict::not_in_Sp: return "not-in-Sp";
        default: return "inconclusive";
    }
}

const char* to_string(RangeVerdict v) {
    switch (v) {
        case RangeVerdict::necessary_condition_passes: return "necessary-condition-passes";
        case RangeVerdict::fails: return "fails";
        default: return "inconclusive";
    }
}

namespace {

// angular sup of tau at fixed radius, refined by doubling until stable
std::pair<double, double> angular_sup(const SelfMap& phi, const Weight& w, double radius,
                                      int angles_start, int angles_cap) {
    double best = -1.0, best_theta = 0.0;
    int na = angles_start;
    double prev = -1.0;
    while (true) {
        std::vector<double> vals(na);
        parallel_for(na, [&](std::size_t k) {
            const double th = 2.0 * M_PI * double(k) / na;
            vals[k] = tau(phi, w, radius * cplx(std::cos(th), std::sin(th)));
        });
        best = -1.0;
        for (int k = 0; k < na; ++k)
            if (vals[k] > best) {
                best = vals[k];
                best_theta = 2.0 * M_PI * double(k) / na;
            }
        if (prev >= 0.0 && std::abs(best - prev) <= 1e-3 * std::max(best, 1e-30)) break;
        if (na >= angles_cap) break;
        prev = best;
        na *= 2;
    }
    return {best, best_theta};
}

CompactnessVerdict verdict_from_sups(std::span<const double> sups, double compact_tol,
                                     double notcompact_tol) {
    const std::size_t m = sups.size();
    if (m < 3) return CompactnessVerdict::Inconclusive;
    const double s1 = sups[m - 3], s2 = sups[m - 2], s3 = sups[m - 1];
    if (s1 < compact_tol && s2 < compact_tol && s3 < compact_tol)
        return CompactnessVerdict::Compact;
    if (s3 > s2 && s2 > s1 && s3 > 4.0 * s1) return CompactnessVerdict::UnboundedIndicator;
    if (s1 >= notcompact_tol && s2 >= notcompact_tol && s3 >= notcompact_tol)
        return CompactnessVerdict::NotCompact;
    return CompactnessVerdict::Inconclusive;
}

std::optional<double> geometric_extrapolation(std::span<const double> sups) {
    const std::size_t m = sups.size();
    if (m < 3) return std::nullopt;
    const double s1 = sups[m - 3], s2 = sups[m - 2], s3 = sups[m - 1];
    const double d1 = s2 - s1, d2 = s3 - s2;
    if (std::abs(d2) <= 1e-12 * std::max(1.0, std::abs(s3))) return s3;
    if (std::abs(d1) <= 0.0) return s3;
    const double q = d2 / d1;
    if (std::abs(q) >= 1.0) return std::nullopt;  // not settling
    return s3 + d2 * q / (1.0 - q);
}

}  // namespace

EssentialNormProfile essential_norm_profile(const SelfMap& phi, const Weight& w,
                                            const ProfileOptions& opt) {
    if (phi.is_constant()) throw ConstantMapError("essential_norm_profile: constant map");
    if (opt.radii.size() < 3)
        throw std::invalid_argument("essential_norm_profile: need at least 3 radii");
    EssentialNormProfile prof;
    prof.radii = opt.radii;
    prof.angles_used = opt.angles;
    for (double r : opt.radii) {
        if (!(r > 0.0 && r < 1.0))
            throw std::invalid_argument("essential_norm_profile: radii must lie in (0, 1)");
        const auto [sup, theta] = angular_sup(phi, w, r, opt.angles, 8 * opt.angles);
        prof.sup_values.push_back(sup);
        prof.angular_argmax.push_back(theta);
    }
    prof.verdict = verdict_from_sups(prof.sup_values, opt.compact_tol, opt.notcompact_tol);
    prof.extrapolated_limsup = geometric_extrapolation(prof.sup_values);
    return prof;
}

CompactnessVerdict compactness_verdict(const EssentialNormProfile& profile, double compact_tol,
                                       double notcompact_tol) {
    return verdict_from_sups(profile.sup_values, compact_tol, notcompact_tol);
}

namespace {

struct SchattenCore {
    std::vector<double> R;
    std::vector<double> cums;
    SchattenVerdict verdict;
    double growth;
};

SchattenCore schatten_from_tau_grid(const CountingGrid& grid, std::span<const double> tau_nodes,
                                    std::span<const double> hyper_density, double p) {
    std::vector<double> weighted(tau_nodes.size());
    for (std::size_t i = 0; i < tau_nodes.size(); ++i)
        weighted[i] = std::pow(tau_nodes[i], 0.5 * p) * hyper_density[i];
    const auto cums = grid.cumulative(weighted, [](cplx, double v) { return v; });

    SchattenCore out;
    out.R = grid.breaks();
    out.cums = cums;
    // same increment diagnosis as the Hilbert-Schmidt integral route
    const std::size_t m = cums.size();
    out.growth = 0.0;
    std::vector<double> inc(m, 0.0);
    if (m > 0) inc[0] = cums[0];
    for (std::size_t j = 1; j < m; ++j) inc[j] = cums[j] - cums[j - 1];
    {
        std::vector<double> xs, ys;
        for (std::size_t j = 1; j < m; ++j)
            if (inc[j] > 0.0 && out.R[j] < 1.0) {
                xs.push_back(std::log(1.0 - out.R[j]));
                ys.push_back(std::log(inc[j]));
            }
        if (xs.size() >= 2) {
            double mx = 0, my = 0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                mx += xs[i];
                my += ys[i];
            }
            mx /= xs.size();
            my /= ys.size();
            double sxy = 0, sxx = 0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                sxy += (xs[i] - mx) * (ys[i] - my);
                sxx += (xs[i] - mx) * (xs[i] - mx);
            }
            if (sxx > 0) out.growth = sxy / sxx;
        }
    }
    if (m <= 1) {
        out.verdict = SchattenVerdict::inconclusive;
        return out;
    }
    const double scale = std::max(std::abs(cums.back()), 1e-300);
    bool stabilized = true;
    for (std::size_t j = 1; j < m; ++j)
        if (std::abs(inc[j]) > 1e-10 * scale) stabilized = false;
    if (stabilized) {
        out.verdict = SchattenVerdict::in_Sp;
        return out;
    }
    const double last = inc[m - 1], prev = inc[m - 2];
    if (prev > 0.0 && last > 0.0) {
        const double gamma = last / prev;
        if (gamma < 0.9)
            out.verdict = SchattenVerdict::in_Sp;
        else if (gamma > 1.1)
            out.verdict = SchattenVerdict::not_in_Sp;
        else
            out.verdict = SchattenVerdict::inconclusive;
    } else {
        out.verdict = SchattenVerdict::inconclusive;
    }
    return out;
}

}  // namespace

std::vector<SchattenReport> schatten_integral_multi(const SelfMap& phi, const Weight& w,
                                                    std::span<const double> ps,
                                                    const quad::QuadratureRule& rule,
                                                    std::span<const double> R_sequence) {
    for (double p : ps)
        if (!(p > 0.0)) throw std::invalid_argument("schatten_integral: p must be positive");
    if (R_sequence.empty())
        throw std::invalid_argument("schatten_integral: empty R sequence");
    CountingGrid grid(phi, std::vector<double>(R_sequence.begin(), R_sequence.end()),
                      rule.radial_nodes, rule.angular_nodes);
    const auto N = grid.counting_values(w);
    std::vector<double> tau_nodes(N.size()), hyper(N.size());
    for (std::size_t i = 0; i < grid.radial_count(); ++i) {
        const double r = grid.radial_node(i);
        const double omega_r = w(r);
        const double u = 1.0 - r * r;
        for (int k = 0; k < grid.angular(); ++k) {
            const std::size_t idx = i * grid.angular() + k;
            tau_nodes[idx] = N[idx] / omega_r;
            hyper[idx] = 1.0 / (u * u);
        }
    }
    std::vector<SchattenReport> out;
    for (double p : ps) {
        const SchattenCore core = schatten_from_tau_grid(grid, tau_nodes, hyper, p);
        SchattenReport rep;
        rep.p = p;
        rep.R_sequence = core.R;
        rep.integral_values = core.cums;
        rep.verdict = core.verdict;
        rep.growth_exponent = core.growth;
        out.push_back(std::move(rep));
    }
    return out;
}

SchattenReport schatten_integral(const SelfMap& phi, const Weight& w, double p,
                                 const quad::QuadratureRule& rule,
                                 std::span<const double> R_sequence) {
    return schatten_integral_multi(phi, w, std::span<const double>(&p, 1), rule, R_sequence)[0];
}

double berezin_transform(const SelfMap& phi, const Weight& w, cplx z, double r,
                         const quad::QuadratureRule& rule) {
    if (!(std::abs(z) < 1.0)) throw std::domain_error("berezin_transform: |z| < 1 required");
    if (!(r > 0.0 && r < 1.0))
        throw std::invalid_argument("berezin_transform: r must lie in (0, 1)");
    const auto region = quad::Region::pseudo_hyperbolic(z, r);
    const auto integral = quad::integrate(
        [&](cplx t) { return counting_function(phi, w, t).value; }, region,
        rule, quad::Measure::area());
    const double u = 1.0 - std::norm(z);
    return integral.value / (u * u * w(std::abs(z)));
}

TestFnNorm test_function_norm(const Weight& w, const MomentTable& moments, cplx a, double delta,
                              int M) {
    if (!(std::abs(a) < 1.0)) throw std::domain_error("test_function_norm: |a| < 1 required");
    if (!(delta > 0.0)) throw std::invalid_argument("test_function_norm: delta must be positive");
    if (M < 1 || M > moments.nmax)
        throw std::invalid_argument("test_function_norm: M must lie in [1, moments.nmax]");
    const double scale = std::pow(1.0 - std::norm(a), 1.0 + delta) / std::sqrt(w(std::abs(a)));
    // Taylor coefficients of (1 - conj(a) z)^{-(1+delta)}: binomial recurrence
    double norm_sq = scale * scale;  // k = 0 term, |f_a(0)|^2
    double coef = 1.0;               // |C_k conj(a)^k|
    const double aa = std::abs(a);
    double last_term = 0.0;
    int used = 1;
    for (int k = 1; k <= M; ++k) {
        coef *= (double(k) + delta) / double(k) * aa;
        const double bk2 = scale * scale * coef * coef;
        last_term = bk2 * moments.omega[k];
        norm_sq += last_term;
        used = k;
        if (k > 50 && last_term <= 1e-17 * norm_sq) break;
    }
    TestFnNorm out;
    // crude geometric tail from the final term (ratio bounded by |a|^2 asymptotically)
    const double rho = aa * aa;
    out.tail = rho < 1.0 ? last_term * rho / (1.0 - rho) : std::nan("");
    out.value = std::sqrt(norm_sq);
    out.terms_used = used;
    return out;
}

ComparabilityResult weight_comparability(const Weight& w, cplx b, int radial, int angular) {
    if (!(std::abs(b) < 1.0)) throw std::domain_error("weight_comparability: |b| < 1 required");
    ComparabilityResult res;
    res.sup_ratio = 0.0;
    res.inf_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < radial; ++i) {
        const double u = double(i) / (radial - 1);
        const double r = 1.0 - std::pow(10.0, -6.0 * u);  // clustered toward the boundary
        const double wr = w(r);
        for (int k = 0; k < angular; ++k) {
            const double th = 2.0 * M_PI * double(k) / angular;
            const cplx z = r * cplx(std::cos(th), std::sin(th));
            const double ratio = w(std::abs(sigma(b, z))) / wr;
            res.sup_ratio = std::max(res.sup_ratio, ratio);
            res.inf_ratio = std::min(res.inf_ratio, ratio);
        }
    }
    return res;
}

RangeTestFn RangeTestFn::monomial(int n) {
    RangeTestFn f;
    f.kind = Kind::monomial;
    f.n = n;
    return f;
}

RangeTestFn RangeTestFn::kernel(cplx a, double delta) {
    RangeTestFn f;
    f.kind = Kind::kernel;
    f.a = a;
    f.delta = delta;
    return f;
}

std::string RangeTestFn::label() const {
    std::ostringstream os;
    if (kind == Kind::monomial) {
        os << "z^" << n;
    } else {
        os << "f_a(" << a.real() << (a.imag() < 0 ? "-" : "+") << std::abs(a.imag())
           << "i;delta=" << delta << ")";
    }
    return os.str();
}

namespace {

// |f'|^2 for the closed-range test family
double deriv_abs2(const RangeTestFn& f, const Weight& w, cplx z) {
    if (f.kind == RangeTestFn::Kind::monomial) {
        const double n = f.n;
        return n * n * std::pow(std::norm(z), f.n - 1);
    }
    const double a2 = std::norm(f.a);
    const double front = (1.0 + f.delta) * (1.0 + f.delta) * a2 *
                         std::pow(1.0 - a2, 2.0 * (1.0 + f.delta)) / w(std::abs(f.a));
    const double denom = std::norm(1.0 - std::conj(f.a) * z);
    return front * std::pow(denom, -(2.0 + f.delta));
}

double ratio_from_grid(const CountingGrid& grid, std::span<const double> N, const Weight& w,
                       const RangeTestFn& f) {
    // numerator and denominator accumulated in the same node order
    const int na = grid.angular();
    const double dth = 2.0 * M_PI / na;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < grid.radial_count(); ++i) {
        const double r = grid.radial_node(i);
        const double wr = w(r);
        double ring_num = 0.0, ring_den = 0.0;
        for (int k = 0; k < na; ++k) {
            const std::size_t idx = i * na + k;
            const double d2 = deriv_abs2(f, w, grid.node(i, k));
            ring_num += d2 * N[idx];
            ring_den += d2 * wr;
        }
        // identical radial weights on both sides
        const double scale = dth / M_PI * r * grid.radial_weight(i);
        num += ring_num * scale;
        den += ring_den * scale;
    }
    return num / den;
}

}  // namespace

double closed_range_ratio(const SelfMap& phi, const Weight& w, const RangeTestFn& f,
                          const quad::QuadratureRule& rule) {
    if (phi.is_constant()) throw ConstantMapError("closed_range_ratio: constant map");
    CountingGrid grid(phi, {1.0}, rule.radial_nodes, rule.angular_nodes);
    const auto N = grid.counting_values(w);
    return ratio_from_grid(grid, N, w, f);
}

ClosedRangeReport closed_range_probe(const SelfMap& phi, const Weight& w,
                                     const ClosedRangeOptions& opt) {
    if (phi.is_constant()) throw ConstantMapError("closed_range_probe: constant map");
    ClosedRangeReport rep;
    SelfMap probe = phi;
    if (opt.normalize_origin && std::abs(phi.phi0()) > 1e-15) {
        probe = SelfMap::compose_sigma(phi.phi0(), phi);
        rep.normalized_origin = true;
    }
    CountingGrid grid(probe, {1.0}, opt.rule.radial_nodes, opt.rule.angular_nodes);
    const auto N = grid.counting_values(w);

    for (int n = 1; n <= opt.nmax_monomials; ++n)
        rep.family.push_back(RangeTestFn::monomial(n));
    for (const cplx& a : opt.a_grid) rep.family.push_back(RangeTestFn::kernel(a, opt.delta));

    rep.infimum = std::numeric_limits<double>::infinity();
    for (const RangeTestFn& f : rep.family) {
        const double ratio = ratio_from_grid(grid, N, w, f);
        rep.ratios.push_back(ratio);
        rep.infimum = std::min(rep.infimum, ratio);
    }
    rep.verdict = rep.infimum < opt.fail_threshold ? RangeVerdict::fails
                                                   : RangeVerdict::necessary_condition_passes;
    return rep;
}

}  // namespace copop
