#include "copop/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "copop/numerics.hpp"

namespace copop {

const char* to_string(SeriesVerdict v) {
    switch (v) {
        case SeriesVerdict::finite: return "finite";
        case SeriesVerdict::diverging: return "diverging";
        default: return "inconclusive";
    }
}

double kernel_diag_radial(const MomentTable& moments, double abs_z) {
    if (!(abs_z >= 0.0 && abs_z < 1.0))
        throw std::domain_error("kernel_diag: |z| < 1 required");
    const double x = abs_z * abs_z;
    double sum = 0.0, comp = 0.0, pw = 1.0;
    for (int n = 0; n <= moments.nmax; ++n) {
        const double y = pw / moments.p[n] - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        pw *= x;
    }
    if (x > 0.0) {
        const double tail = pw / ((1.0 - x) * moments.p[moments.nmax]);
        if (tail > 1e-10 * sum) {
            const double target = 1e-10 * sum * (1.0 - x) * moments.p[moments.nmax];
            const int required =
                static_cast<int>(std::ceil(std::log(std::max(target, 1e-290)) / std::log(x)));
            throw InsufficientMomentsError(static_cast<int>(1.2 * required) + 64);
        }
    }
    return sum;
}

double kernel_diag(const MomentTable& moments, cplx z) {
    return kernel_diag_radial(moments, std::abs(z));
}

ImageNorm image_norm(const SelfMap& phi, const MomentTable& moments, int n, int M,
                     bool derivative_only) {
    if (n < 1) throw std::invalid_argument("image_norm: n must be >= 1");
    if (M > moments.nmax)
        throw std::invalid_argument("image_norm: moment table shorter than M");
    if (n > moments.nmax)
        throw std::invalid_argument("image_norm: moment table shorter than n");
    const PowerCoefficients pc = phi.power_coefficients(n, M);
    const double omega_n = moments.omega[n];
    double sum = 0.0;
    for (int k = 1; k <= M; ++k) sum += std::norm(pc.c[k]) * moments.omega[k];
    ImageNorm out;
    out.value = sum / omega_n;
    if (!derivative_only) out.value += std::norm(pc.c[0]) / omega_n;
    // omega_k = k^2 p_{k-1} <= k^2 p_0, so the weighted tail is bounded through tail_k2
    out.tail = pc.tail_k2 * moments.p[0] / omega_n;
    return out;
}

namespace {

struct TermsAnalysis {
    SeriesVerdict verdict = SeriesVerdict::inconclusive;
    double ratio = 0.0;
    double tail = 0.0;
};

// geometric diagnosis of a positive term sequence
TermsAnalysis analyze_terms(const std::vector<double>& terms) {
    TermsAnalysis out;
    if (terms.empty()) {
        out.verdict = SeriesVerdict::finite;
        return out;
    }
    const std::size_t look = std::max<std::size_t>(10, terms.size() / 10);
    const std::size_t begin = terms.size() > look ? terms.size() - look : 0;
    double maxrec = 0.0;
    for (std::size_t i = begin; i < terms.size(); ++i) maxrec = std::max(maxrec, terms[i]);
    if (maxrec <= 1e-280) {
        out.verdict = SeriesVerdict::finite;
        return out;
    }
    std::vector<double> ratios;
    for (std::size_t i = std::max<std::size_t>(begin, 1); i < terms.size(); ++i)
        if (terms[i - 1] > 0.0) ratios.push_back(terms[i] / terms[i - 1]);
    if (ratios.empty()) {
        out.verdict = SeriesVerdict::inconclusive;
        return out;
    }
    std::sort(ratios.begin(), ratios.end());
    const double rho = ratios[ratios.size() / 2];
    out.ratio = rho;
    if (rho < 0.99) {
        out.verdict = SeriesVerdict::finite;
        out.tail = terms.back() * rho / (1.0 - rho);
    } else {
        out.verdict = SeriesVerdict::diverging;
        out.tail = std::numeric_limits<double>::infinity();
    }
    return out;
}

}  // namespace

BasisRoute hs_norm_basis(const SelfMap& phi, const MomentTable& moments, int nmax_terms,
                         int M) {
    if (nmax_terms < 1) throw std::invalid_argument("hs_norm_basis: nmax must be >= 1");
    if (phi.is_constant()) throw ConstantMapError("hs_norm_basis: constant map");
    const int deg = std::max(phi.degree(), 1);
    if (M <= 0) M = nmax_terms * std::max(deg, 4);
    if (M > moments.nmax)
        throw std::invalid_argument("hs_norm_basis: moment table shorter than M = " +
                                    std::to_string(M));

    BasisRoute out;
    out.terms.reserve(nmax_terms);
    // incremental powers of the Taylor series of phi
    const auto base = phi.taylor(M);
    std::vector<cplx> pw = base;
    for (int n = 1; n <= nmax_terms; ++n) {
        double sum = 0.0;
        const std::size_t kmax = std::min<std::size_t>(pw.size() - 1, M);
        for (std::size_t k = 1; k <= kmax; ++k) sum += std::norm(pw[k]) * moments.omega[k];
        out.terms.push_back(sum / moments.omega[n]);
        if (n < nmax_terms) pw = series_mul(pw, base, M);
    }
    double partial = pairwise_sum(out.terms);
    const TermsAnalysis an = analyze_terms(out.terms);
    out.verdict = an.verdict;
    out.tail_ratio = an.ratio;
    out.tail = an.tail;
    out.value = an.verdict == SeriesVerdict::finite && std::isfinite(an.tail)
                    ? partial + an.tail
                    : partial;
    return out;
}

namespace {

struct IncrementAnalysis {
    SeriesVerdict verdict = SeriesVerdict::inconclusive;
    double value = 0.0;
    double growth_exponent = 0.0;
};

IncrementAnalysis analyze_increments(std::span<const double> R,
                                     std::span<const double> cumulative) {
    IncrementAnalysis out;
    const std::size_t m = cumulative.size();
    out.value = cumulative.empty() ? 0.0 : cumulative.back();
    if (m <= 1) {
        out.verdict = SeriesVerdict::inconclusive;
        return out;
    }
    std::vector<double> inc(m, 0.0);
    inc[0] = cumulative[0];
    for (std::size_t j = 1; j < m; ++j) inc[j] = cumulative[j] - cumulative[j - 1];

    // growth exponent: least squares of log(increment) against log(1 - R)
    {
        std::vector<double> xs, ys;
        for (std::size_t j = 1; j < m; ++j)
            if (inc[j] > 0.0 && R[j] < 1.0) {
                xs.push_back(std::log(1.0 - R[j]));
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
            if (sxx > 0) out.growth_exponent = sxy / sxx;
        }
    }

    const double scale = std::max(std::abs(out.value), 1e-300);
    bool stabilized = true;
    for (std::size_t j = 1; j < m; ++j)
        if (std::abs(inc[j]) > 1e-10 * scale) stabilized = false;
    if (stabilized) {
        out.verdict = SeriesVerdict::finite;
        return out;
    }
    const double last = inc[m - 1], prev = inc[m - 2];
    if (prev > 0.0 && last > 0.0) {
        const double gamma = last / prev;
        if (gamma < 0.9) {
            out.verdict = SeriesVerdict::finite;
            out.value += last * gamma / (1.0 - gamma);
        } else if (gamma > 1.1) {
            out.verdict = SeriesVerdict::diverging;
        } else {
            out.verdict = SeriesVerdict::inconclusive;
        }
    } else {
        out.verdict = SeriesVerdict::inconclusive;
    }
    return out;
}

}  // namespace

IntegralRoute hs_norm_integral(const SelfMap& phi, const Weight& w, const MomentTable& moments,
                               std::span<const double> R_sequence, int radial_per_segment,
                               int angular) {
    if (R_sequence.empty()) throw std::invalid_argument("hs_norm_integral: empty R sequence");
    CountingGrid grid(phi, std::vector<double>(R_sequence.begin(), R_sequence.end()),
                      radial_per_segment, angular);
    const auto N = grid.counting_values(w);
    // kernel diagonal is radial: precompute per radial node
    std::vector<double> kd(grid.radial_count());
    for (std::size_t i = 0; i < kd.size(); ++i)
        kd[i] = kernel_diag_radial(moments, grid.radial_node(i));
    std::size_t row = 0;
    std::vector<double> kernel_of_node(N.size());
    for (std::size_t i = 0; i < kd.size(); ++i)
        for (int k = 0; k < grid.angular(); ++k) kernel_of_node[row++] = kd[i];
    // pack kernel through the N argument of the cumulative helper
    std::vector<double> weighted(N.size());
    for (std::size_t i = 0; i < N.size(); ++i) weighted[i] = N[i] * kernel_of_node[i];
    const auto cums = grid.cumulative(weighted, [](cplx, double v) { return v; });

    IntegralRoute out;
    out.R.assign(R_sequence.begin(), R_sequence.end());
    out.cumulative = cums;
    const IncrementAnalysis an = analyze_increments(out.R, cums);
    out.value = an.value;
    out.verdict = an.verdict;
    out.growth_exponent = an.growth_exponent;
    return out;
}

HSReport hs_report(const SelfMap& phi, const Weight& w, const MomentTable& moments,
                   std::span<const double> R_sequence, int nmax_terms, int radial_per_segment,
                   int angular) {
    const BasisRoute basis = hs_norm_basis(phi, moments, nmax_terms);
    const IntegralRoute integral =
        hs_norm_integral(phi, w, moments, R_sequence, radial_per_segment, angular);
    HSReport rep;
    rep.basis_value = basis.value;
    rep.integral_value = integral.value;
    rep.basis_verdict = basis.verdict;
    rep.integral_verdict = integral.verdict;
    rep.integral_growth_exponent = integral.growth_exponent;
    rep.relative_gap = std::abs(basis.value - integral.value) /
                       std::max({basis.value, integral.value, 1e-300});
    if (basis.verdict == SeriesVerdict::finite && integral.verdict == SeriesVerdict::finite)
        rep.verdict = SeriesVerdict::finite;
    else if (basis.verdict == SeriesVerdict::diverging &&
             integral.verdict == SeriesVerdict::diverging)
        rep.verdict = SeriesVerdict::diverging;
    else
        rep.verdict = SeriesVerdict::inconclusive;
    return rep;
}

OperatorMatrix build_matrix(const SelfMap& phi, const MomentTable& moments, int M) {
    if (M < 1) throw std::invalid_argument("build_matrix: M must be >= 1");
    if (M > moments.nmax)
        throw std::invalid_argument("build_matrix: moment table shorter than M");
    OperatorMatrix mat;
    mat.size = M + 1;
    mat.entries.assign(std::size_t(M + 1) * (M + 1), cplx(0.0));
    mat.at(0, 0) = 1.0;  // constants map to constants
    for (int n = 1; n <= M; ++n) {
        const PowerCoefficients pc = phi.power_coefficients(n, M);
        const double inv = 1.0 / std::sqrt(moments.omega[n]);
        for (int m = 0; m <= M; ++m) {
            const double sm = m == 0 ? 1.0 : std::sqrt(moments.omega[m]);
            mat.at(m, n) = pc.c[m] * sm * inv;
        }
        mat.truncation_tail =
            std::max(mat.truncation_tail, pc.tail_k2 * moments.p[0] / moments.omega[n]);
    }
    return mat;
}

std::vector<double> singular_values(const OperatorMatrix& mat, bool drop_first) {
    const int off = drop_first ? 1 : 0;
    const int n = mat.size - off;
    if (n < 1) return {};
    // columns of the working matrix
    std::vector<std::vector<cplx>> col(n, std::vector<cplx>(n));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) col[j][i] = mat.at(i + off, j + off);

    const double tol = 1e-10;
    bool converged = false;
    for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
        converged = true;
        for (int i = 0; i < n - 1; ++i) {
            for (int j = i + 1; j < n; ++j) {
                cplx g = 0.0;
                double aii = 0.0, ajj = 0.0;
                for (int k = 0; k < n; ++k) {
                    g += std::conj(col[i][k]) * col[j][k];
                    aii += std::norm(col[i][k]);
                    ajj += std::norm(col[j][k]);
                }
                const double ag = std::abs(g);
                if (ag <= tol * std::sqrt(aii * ajj) || ag == 0.0) continue;
                converged = false;
                const cplx phase = g / ag;
                const double tau_ = (ajj - aii) / (2.0 * ag);
                const double t = (tau_ >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau_) + std::sqrt(1.0 + tau_ * tau_));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int k = 0; k < n; ++k) {
                    const cplx u = col[i][k];
                    const cplx v = std::conj(phase) * col[j][k];
                    col[i][k] = c * u - s * v;
                    col[j][k] = s * u + c * v;
                }
            }
        }
    }
    if (!converged)
        throw std::runtime_error("singular_values: Jacobi sweeps did not converge");
    std::vector<double> sv(n);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += std::norm(col[j][k]);
        sv[j] = std::sqrt(s);
    }
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

double schatten_from_matrix(const OperatorMatrix& mat, double p, bool drop_first) {
    if (!(p > 0.0)) throw std::invalid_argument("schatten_from_matrix: p must be positive");
    const auto sv = singular_values(mat, drop_first);
    double sum = 0.0;
    for (double s : sv) sum += std::pow(s, p);
    return std::pow(sum, 1.0 / p);
}

}  // namespace copop
