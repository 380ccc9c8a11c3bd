#include "copop/selfmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace copop {

cplx sigma(cplx a, cplx z) { return (a - z) / (1.0 - std::conj(a) * z); }

cplx sigma_deriv(cplx a, cplx z) {
    const cplx d = 1.0 - std::conj(a) * z;
    return (std::norm(a) - 1.0) / (d * d);
}

std::vector<cplx> series_mul(std::span<const cplx> a, std::span<const cplx> b, int M) {
    return polymul(a, b, M);
}

namespace {

constexpr int kBoundarySamples = 2048;
constexpr double kInteriorCut = 1.0 - 1e-14;  // preimages at or beyond this are discarded
constexpr double kResidualTol = 1e-10;

std::vector<cplx> convolve(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    return polymul(a, b, -1);
}

}  // namespace

SelfMap SelfMap::polynomial(std::vector<cplx> coeffs) {
    while (coeffs.size() > 1 && std::abs(coeffs.back()) == 0.0) coeffs.pop_back();
    if (coeffs.empty()) coeffs.push_back(cplx(0.0));
    SelfMap m;
    m.family_ = Family::polynomial;
    m.coeffs_ = std::move(coeffs);
    m.refresh_boundary_stats();
    return m;
}

SelfMap SelfMap::dilation(cplx lambda) {
    SelfMap m;
    m.family_ = Family::dilation;
    m.lambda_ = lambda;
    m.boundary_sup_ = std::abs(lambda);
    m.boundary_argmax_ = cplx(1.0);
    return m;
}

SelfMap SelfMap::moebius(cplx a, double theta) {
    if (!(std::abs(a) < 1.0))
        throw std::invalid_argument("SelfMap::moebius: parameter must satisfy |a| < 1");
    SelfMap m;
    m.family_ = Family::moebius;
    m.a_ = a;
    m.theta_ = theta;
    m.boundary_sup_ = 1.0;
    m.boundary_argmax_ = cplx(1.0);
    return m;
}

SelfMap SelfMap::blaschke(std::vector<cplx> zeros, double theta) {
    if (zeros.empty())
        throw std::invalid_argument("SelfMap::blaschke: at least one zero required");
    for (const cplx& z : zeros)
        if (!(std::abs(z) < 1.0))
            throw std::invalid_argument("SelfMap::blaschke: all zeros must satisfy |a| < 1");
    SelfMap m;
    m.family_ = Family::blaschke;
    m.zeros_ = std::move(zeros);
    m.theta_ = theta;
    m.boundary_sup_ = 1.0;
    m.boundary_argmax_ = cplx(1.0);
    // cache numerator and denominator coefficients
    m.num_ = {cplx(std::cos(theta), std::sin(theta))};
    m.den_ = {cplx(1.0)};
    for (const cplx& a : m.zeros_) {
        m.num_ = convolve(m.num_, {a, cplx(-1.0)});
        m.den_ = convolve(m.den_, {cplx(1.0), -std::conj(a)});
    }
    return m;
}

SelfMap SelfMap::compose_sigma(cplx b, const SelfMap& base) {
    if (!(std::abs(b) < 1.0))
        throw std::invalid_argument("SelfMap::compose_sigma: |b| < 1 required");
    SelfMap m;
    m.family_ = Family::composed;
    m.a_ = b;
    m.base_ = std::make_shared<SelfMap>(base);
    m.refresh_boundary_stats();
    return m;
}

void SelfMap::refresh_boundary_stats() {
    double sup = 0.0;
    cplx arg = cplx(1.0);
    for (int k = 0; k < kBoundarySamples; ++k) {
        const double th = 2.0 * M_PI * k / kBoundarySamples;
        const cplx z(std::cos(th), std::sin(th));
        const double v = std::abs(eval_anywhere(z, 0));
        if (v > sup) {
            sup = v;
            arg = z;
        }
    }
    boundary_sup_ = sup;
    boundary_argmax_ = arg;
}

std::string SelfMap::describe() const {
    switch (family_) {
        case Family::polynomial: {
            std::string s = "polynomial(deg " + std::to_string(degree()) + ")";
            return s;
        }
        case Family::dilation: return "dilation";
        case Family::moebius: return "moebius";
        case Family::blaschke: return "blaschke(deg " + std::to_string(zeros_.size()) + ")";
        case Family::composed: return "sigma∘" + base_->describe();
    }
    return "?";
}

cplx SelfMap::eval_anywhere(cplx z, int order) const {
    switch (family_) {
        case Family::polynomial:
            if (order == 0) return polyval(coeffs_, z);
            return polyval(polyder(coeffs_), z);
        case Family::dilation:
            return order == 0 ? lambda_ * z : lambda_;
        case Family::moebius: {
            const cplx ph(std::cos(theta_), std::sin(theta_));
            return order == 0 ? ph * sigma(a_, z) : ph * sigma_deriv(a_, z);
        }
        case Family::blaschke: {
            const cplx ph(std::cos(theta_), std::sin(theta_));
            if (order == 0) {
                cplx v = ph;
                for (const cplx& a : zeros_) v *= sigma(a, z);
                return v;
            }
            cplx total = 0.0;
            for (std::size_t j = 0; j < zeros_.size(); ++j) {
                cplx term = sigma_deriv(zeros_[j], z);
                for (std::size_t k = 0; k < zeros_.size(); ++k)
                    if (k != j) term *= sigma(zeros_[k], z);
                total += term;
            }
            return ph * total;
        }
        case Family::composed: {
            const cplx w = base_->eval_anywhere(z, 0);
            if (order == 0) return sigma(a_, w);
            return sigma_deriv(a_, w) * base_->eval_anywhere(z, 1);
        }
    }
    throw std::logic_error("SelfMap: unknown family");
}

cplx SelfMap::eval(cplx z, int order) const {
    if (!(std::abs(z) < 1.0))
        throw std::domain_error("SelfMap::eval: |z| < 1 required");
    if (order < 0 || order > 1)
        throw std::invalid_argument("SelfMap::eval: order must be 0 or 1");
    return eval_anywhere(z, order);
}

bool SelfMap::is_constant() const {
    switch (family_) {
        case Family::polynomial: return coeffs_.size() <= 1;
        case Family::dilation: return lambda_ == cplx(0.0);
        case Family::composed: return base_->is_constant();
        default: return false;
    }
}

int SelfMap::degree() const {
    switch (family_) {
        case Family::polynomial: return static_cast<int>(coeffs_.size()) - 1;
        case Family::dilation: return is_constant() ? 0 : 1;
        case Family::moebius: return 1;
        case Family::blaschke: return static_cast<int>(zeros_.size());
        case Family::composed: return base_->degree();
    }
    return 0;
}

MapValidation SelfMap::validate() const {
    MapValidation v;
    v.structural = family_ == Family::moebius || family_ == Family::blaschke;
    double sup = 0.0;
    cplx arg(1.0);
    for (int k = 0; k < kBoundarySamples; ++k) {
        const double th = 2.0 * M_PI * k / kBoundarySamples;
        const cplx z(std::cos(th), std::sin(th));
        const double m = std::abs(eval_anywhere(z, 0));
        if (m > sup) {
            sup = m;
            arg = z;
        }
    }
    v.max_boundary_modulus = sup;
    v.argmax = arg;
    v.passes = v.structural || sup <= 1.0 + 1e-12;
    return v;
}

double SelfMap::support_radius() const {
    switch (family_) {
        case Family::dilation: return std::min(1.0, std::abs(lambda_));
        case Family::moebius:
        case Family::blaschke: return 1.0;
        default: return std::min(1.0, boundary_sup_);
    }
}

std::vector<cplx> SelfMap::preimage_polynomial(cplx z) const {
    switch (family_) {
        case Family::polynomial: {
            std::vector<cplx> c = coeffs_;
            c[0] -= z;
            return c;
        }
        case Family::blaschke: {
            std::vector<cplx> c(den_.size());
            for (std::size_t i = 0; i < den_.size(); ++i) {
                const cplx n = i < num_.size() ? num_[i] : cplx(0.0);
                c[i] = n - z * den_[i];
            }
            return c;
        }
        default:
            throw std::logic_error("preimage_polynomial: closed-form family");
    }
}

std::vector<Preimage> SelfMap::preimages(cplx z) const {
    if (!(std::abs(z) < 1.0))
        throw std::domain_error("SelfMap::preimages: |z| < 1 required");
    if (is_constant())
        throw ConstantMapError("SelfMap::preimages: constant map has no counting data");

    switch (family_) {
        case Family::dilation: {
            const cplx a = z / lambda_;
            if (std::abs(a) < kInteriorCut) return {{a, 1}};
            return {};
        }
        case Family::moebius: {
            const cplx ph(std::cos(-theta_), std::sin(-theta_));
            return {{sigma(a_, ph * z), 1}};
        }
        case Family::composed:
            return base_->preimages(sigma(a_, z));
        default: break;
    }

    const auto poly = preimage_polynomial(z);
    auto clusters = polynomial_roots(poly);
    std::vector<Preimage> out;
    for (auto& cl : clusters) {
        if (!(std::abs(cl.root) < kInteriorCut)) continue;
        double res = std::abs(eval_anywhere(cl.root, 0) - z);
        if (res > kResidualTol) {
            // one multiplicity-aware Newton pass directly on phi
            cplx x = cl.root;
            for (int it = 0; it < 30; ++it) {
                const cplx dp = eval_anywhere(x, 1);
                if (std::abs(dp) < 1e-280) break;
                const cplx step = double(cl.multiplicity) * (eval_anywhere(x, 0) - z) / dp;
                x -= step;
                if (std::abs(step) <= 1e-15 * (1.0 + std::abs(x))) break;
            }
            const double res2 = std::abs(eval_anywhere(x, 0) - z);
            if (res2 < res && std::abs(x) < kInteriorCut) {
                cl.root = x;
                res = res2;
            }
            if (res > kResidualTol)
                throw RootFindingError("SelfMap::preimages: residual above 1e-10 after polish");
        }
        out.push_back({cl.root, cl.multiplicity});
    }
    return out;
}

std::vector<cplx> SelfMap::taylor(int M) const {
    if (M < 0) throw std::invalid_argument("SelfMap::taylor: M must be >= 0");
    std::vector<cplx> out(static_cast<std::size_t>(M) + 1, cplx(0.0));
    switch (family_) {
        case Family::polynomial:
            for (std::size_t k = 0; k < coeffs_.size() && k <= std::size_t(M); ++k)
                out[k] = coeffs_[k];
            return out;
        case Family::dilation:
            if (M >= 1) out[1] = lambda_;
            return out;
        case Family::moebius: {
            // e^{i theta} [a - (1-|a|^2) sum_{k>=1} conj(a)^{k-1} z^k]
            const cplx ph(std::cos(theta_), std::sin(theta_));
            out[0] = ph * a_;
            const double c = 1.0 - std::norm(a_);
            cplx pw = 1.0;
            for (int k = 1; k <= M; ++k) {
                out[k] = -ph * c * pw;
                pw *= std::conj(a_);
            }
            return out;
        }
        case Family::blaschke: {
            std::vector<cplx> acc = {cplx(std::cos(theta_), std::sin(theta_))};
            for (const cplx& a : zeros_) {
                std::vector<cplx> factor(static_cast<std::size_t>(M) + 1, cplx(0.0));
                factor[0] = a;
                const double c = 1.0 - std::norm(a);
                cplx pw = 1.0;
                for (int k = 1; k <= M; ++k) {
                    factor[k] = -c * pw;
                    pw *= std::conj(a);
                }
                acc = series_mul(acc, factor, M);
            }
            acc.resize(static_cast<std::size_t>(M) + 1, cplx(0.0));
            return acc;
        }
        case Family::composed: {
            // sigma_b(w) = b - (1-|b|^2) sum_{k>=1} conj(b)^{k-1} w^k, substituted
            // with the base series. Coefficients of base^k stay bounded by 1 for a
            // self-map, so the outer sum may stop once c |b|^{k-1} is negligible.
            const auto base = base_->taylor(M);
            std::vector<cplx> acc(static_cast<std::size_t>(M) + 1, cplx(0.0));
            acc[0] = a_;
            const double c = 1.0 - std::norm(a_);
            std::vector<cplx> basepow = {cplx(1.0)};
            cplx pw = 1.0;
            const int kmax = std::max(M, 20000);
            for (int k = 1; k <= kmax; ++k) {
                basepow = series_mul(basepow, base, M);
                for (std::size_t j = 0; j < basepow.size(); ++j)
                    acc[j] += -c * pw * basepow[j];
                pw *= std::conj(a_);
                if (c * std::abs(pw) <= 1e-18) break;
            }
            return acc;
        }
    }
    throw std::logic_error("SelfMap: unknown family");
}

namespace {

// closed form sum_{k>M} k^2 x^k (x in (0,1)) by direct accumulation
double tail_k2_sum(double x, int M) {
    double sum = 0.0;
    double pw = std::pow(x, M + 1);
    for (int k = M + 1; k < M + 4000; ++k) {
        const double term = double(k) * double(k) * pw;
        sum += term;
        pw *= x;
        if (term < 1e-18 * (sum + 1e-300)) break;
    }
    return sum;
}

}  // namespace

PowerCoefficients SelfMap::power_coefficients(int n, int M) const {
    if (n < 1) throw std::invalid_argument("power_coefficients: n must be >= 1");
    if (M < 0) throw std::invalid_argument("power_coefficients: M must be >= 0");

    PowerCoefficients out;
    const bool exact_family =
        family_ == Family::polynomial || family_ == Family::dilation;

    if (exact_family) {
        // full product, then truncate; dropped coefficients give exact tails
        std::vector<cplx> full = {cplx(1.0)};
        const auto base =
            family_ == Family::dilation ? std::vector<cplx>{cplx(0.0), lambda_} : coeffs_;
        for (int k = 0; k < n; ++k) full = convolve(full, base);
        out.c.assign(static_cast<std::size_t>(M) + 1, cplx(0.0));
        for (std::size_t k = 0; k < full.size(); ++k) {
            if (k <= std::size_t(M)) {
                out.c[k] = full[k];
            } else {
                const double a2 = std::norm(full[k]);
                out.tail_sq += a2;
                out.tail_k2 += double(k) * double(k) * a2;
            }
        }
        return out;
    }

    // geometric-series families: truncated power with a Cauchy-type tail bound
    const auto base = taylor(M);
    std::vector<cplx> acc = base;
    for (int k = 1; k < n; ++k) acc = series_mul(acc, base, M);
    acc.resize(static_cast<std::size_t>(M) + 1, cplx(0.0));
    out.c = std::move(acc);

    // radius s > 1 where phi is still analytic, and the max modulus there
    double pole = std::numeric_limits<double>::infinity();
    if (family_ == Family::moebius) {
        if (std::abs(a_) > 0.0) pole = 1.0 / std::abs(a_);
    } else if (family_ == Family::blaschke) {
        for (const cplx& a : zeros_)
            if (std::abs(a) > 0.0) pole = std::min(pole, 1.0 / std::abs(a));
    } else {  // composed: |base| must stay below 1/|b|
        const double cap = std::abs(a_) > 0.0 ? 1.0 / std::abs(a_) :
                                                std::numeric_limits<double>::infinity();
        double s = 1.3;
        while (s > 1.001) {
            double sup = 0.0;
            for (int k = 0; k < 256; ++k) {
                const double th = 2.0 * M_PI * k / 256;
                sup = std::max(sup, std::abs(base_->eval_anywhere(s * cplx(std::cos(th), std::sin(th)))));
            }
            if (sup < 0.98 * cap) break;
            s = 1.0 + (s - 1.0) * 0.7;
        }
        pole = s * s;  // so that sqrt(pole) = s below
    }
    if (!std::isfinite(pole)) pole = 4.0;  // entire in the relevant range
    const double s = std::sqrt(pole);
    double Ms = 0.0;
    for (int k = 0; k < 256; ++k) {
        const double th = 2.0 * M_PI * k / 256;
        Ms = std::max(Ms, std::abs(eval_anywhere(s * cplx(std::cos(th), std::sin(th)))));
    }
    const double x = 1.0 / (s * s);
    // log-space guard against overflow of Ms^{2n}
    const double log_scale = 2.0 * n * std::log(std::max(Ms, 1e-300));
    const double log_tail_sq = log_scale + (M + 1) * std::log(x) - std::log1p(-x);
    out.tail_sq = log_tail_sq < 700.0 ? std::exp(log_tail_sq)
                                      : std::numeric_limits<double>::infinity();
    const double k2 = tail_k2_sum(x, M);
    const double log_tail_k2 = log_scale + std::log(std::max(k2, 1e-300));
    out.tail_k2 = log_tail_k2 < 700.0 ? std::exp(log_tail_k2)
                                      : std::numeric_limits<double>::infinity();
    return out;
}

std::vector<cplx> SelfMap::critical_values() const {
    switch (family_) {
        case Family::dilation:
        case Family::moebius:
            return {};
        case Family::polynomial: {
            if (degree() <= 1) return {};
            const auto dp = polyder(coeffs_);
            std::vector<cplx> vals;
            for (const auto& cl : polynomial_roots(dp))
                if (std::abs(cl.root) < 1.0) vals.push_back(eval_anywhere(cl.root));
            return vals;
        }
        case Family::blaschke: {
            if (degree() <= 1) return {};
            // numerator of B' is N'D - ND'
            const auto nd = polymul(polyder(num_), den_, -1);
            const auto dn = polymul(num_, polyder(den_), -1);
            std::vector<cplx> c(std::max(nd.size(), dn.size()), cplx(0.0));
            for (std::size_t i = 0; i < nd.size(); ++i) c[i] += nd[i];
            for (std::size_t i = 0; i < dn.size(); ++i) c[i] -= dn[i];
            std::vector<cplx> vals;
            for (const auto& cl : polynomial_roots(c))
                if (std::abs(cl.root) < 1.0) vals.push_back(eval_anywhere(cl.root));
            return vals;
        }
        case Family::composed: {
            std::vector<cplx> vals;
            for (const cplx& v : base_->critical_values()) vals.push_back(sigma(a_, v));
            return vals;
        }
    }
    return {};
}

}  // namespace copop
