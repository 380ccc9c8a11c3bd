#include "copop/roots.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace copop {

cplx polyval(std::span<const cplx> coeffs, cplx z) {
    cplx r = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) r = r * z + coeffs[i];
    return r;
}

std::vector<cplx> polyder(std::span<const cplx> coeffs) {
    std::vector<cplx> d;
    for (std::size_t k = 1; k < coeffs.size(); ++k) d.push_back(double(k) * coeffs[k]);
    return d;
}

std::vector<cplx> polymul(std::span<const cplx> a, std::span<const cplx> b, int max_degree) {
    if (a.empty() || b.empty()) return {};
    std::size_t len = a.size() + b.size() - 1;
    if (max_degree >= 0) len = std::min<std::size_t>(len, max_degree + 1);
    std::vector<cplx> out(len, cplx(0.0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i >= len) break;
        const cplx ai = a[i];
        const std::size_t jmax = std::min(b.size(), len - i);
        for (std::size_t j = 0; j < jmax; ++j) out[i + j] += ai * b[j];
    }
    return out;
}

namespace {

struct Givens {
    double c;
    cplx s;
};

Givens make_givens(cplx f, cplx g) {
    const double af = std::abs(f), ag = std::abs(g);
    if (ag == 0.0) return {1.0, cplx(0.0)};
    if (af == 0.0) return {0.0, cplx(1.0)};
    const double t = std::hypot(af, ag);
    return {af / t, f * std::conj(g) / (af * t)};
}

// Eigenvalue of [[a, b], [c, d]] closer to d (Wilkinson shift).
cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
    const cplx tr = a + d;
    const cplx det = a * d - b * c;
    const cplx disc = std::sqrt(tr * tr - 4.0 * det);
    const cplx l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
    return (std::abs(l1 - d) < std::abs(l2 - d)) ? l1 : l2;
}

}  // namespace

std::vector<cplx> companion_eigenvalues(std::span<const cplx> tail) {
    const int d = static_cast<int>(tail.size());
    if (d == 0) return {};
    if (d > 30) throw RootFindingError("companion_eigenvalues: degree above 30");
    // upper Hessenberg companion matrix, column-major indexing H[i][j]
    std::vector<std::vector<cplx>> H(d, std::vector<cplx>(d, cplx(0.0)));
    for (int i = 1; i < d; ++i) H[i][i - 1] = 1.0;
    for (int i = 0; i < d; ++i) H[i][d - 1] = -tail[i];

    std::vector<cplx> eigs;
    eigs.reserve(d);
    int hi = d - 1;
    int iter = 0;
    const int max_iter = 60 * d + 100;
    const double eps = std::numeric_limits<double>::epsilon();
    while (hi >= 0) {
        if (++iter > max_iter)
            throw RootFindingError("companion_eigenvalues: QR iteration did not converge");
        // deflate
        if (hi == 0) {
            eigs.push_back(H[0][0]);
            --hi;
            continue;
        }
        if (std::abs(H[hi][hi - 1]) <=
            eps * (std::abs(H[hi][hi]) + std::abs(H[hi - 1][hi - 1])) + 1e-300) {
            eigs.push_back(H[hi][hi]);
            --hi;
            continue;
        }
        // active block [lo, hi]
        int lo = hi;
        while (lo > 0 && std::abs(H[lo][lo - 1]) >
                             eps * (std::abs(H[lo][lo]) + std::abs(H[lo - 1][lo - 1])) + 1e-300)
            --lo;
        const cplx mu =
            wilkinson_shift(H[hi - 1][hi - 1], H[hi - 1][hi], H[hi][hi - 1], H[hi][hi]);
        for (int k = lo; k <= hi; ++k) H[k][k] -= mu;
        // QR by Givens on the subdiagonal, then RQ
        std::vector<Givens> rot(hi);
        for (int k = lo; k < hi; ++k) {
            const Givens g = make_givens(H[k][k], H[k + 1][k]);
            rot[k] = g;
            for (int j = k; j <= hi; ++j) {
                const cplx a = H[k][j], b = H[k + 1][j];
                H[k][j] = g.c * a + g.s * b;
                H[k + 1][j] = -std::conj(g.s) * a + g.c * b;
            }
        }
        for (int k = lo; k < hi; ++k) {
            const Givens g = rot[k];
            const int rmax = std::min(k + 2, hi);
            for (int i = lo; i <= rmax; ++i) {
                const cplx a = H[i][k], b = H[i][k + 1];
                H[i][k] = g.c * a + std::conj(g.s) * b;
                H[i][k + 1] = -g.s * a + g.c * b;
            }
        }
        for (int k = lo; k <= hi; ++k) H[k][k] += mu;
    }
    return eigs;
}

namespace {

// Durand-Kerner simultaneous iteration on a monic polynomial.
// Returns true when the iteration converged.
bool durand_kerner(const std::vector<cplx>& monic, std::vector<cplx>& w, double radius,
                   double angle_offset) {
    const int d = static_cast<int>(monic.size()) - 1;
    w.resize(d);
    for (int i = 0; i < d; ++i) {
        const double th = 2.0 * M_PI * i / d + angle_offset;
        w[i] = radius * cplx(std::cos(th), std::sin(th));
    }
    int stable = 0;
    for (int it = 0; it < 400; ++it) {
        double max_step = 0.0, max_abs = 0.0;
        for (int i = 0; i < d; ++i) {
            cplx denom = 1.0;
            for (int j = 0; j < d; ++j)
                if (j != i) denom *= (w[i] - w[j]);
            if (std::abs(denom) < 1e-280) {
                w[i] += cplx(1e-8, 1e-8);
                max_step = 1.0;
                continue;
            }
            const cplx step = polyval(monic, w[i]) / denom;
            w[i] -= step;
            max_step = std::max(max_step, std::abs(step));
            max_abs = std::max(max_abs, std::abs(w[i]));
        }
        if (max_step <= 1e-14 * (1.0 + max_abs)) {
            if (++stable >= 2) return true;
        } else {
            stable = 0;
        }
    }
    return false;
}

std::vector<RootCluster> cluster_roots(std::vector<cplx> roots) {
    const std::size_t d = roots.size();
    double scale = 1.0;
    for (const cplx& r : roots) scale = std::max(scale, std::abs(r));
    const double tol = 1e-6 * scale;

    std::vector<std::size_t> parent(d);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            if (std::abs(roots[i] - roots[j]) <= tol) parent[find(i)] = find(j);

    std::vector<RootCluster> out;
    std::vector<bool> done(d, false);
    for (std::size_t i = 0; i < d; ++i) {
        const std::size_t rep = find(i);
        if (done[rep]) continue;
        done[rep] = true;
        cplx centroid = 0.0;
        int mult = 0;
        for (std::size_t j = 0; j < d; ++j)
            if (find(j) == rep) {
                centroid += roots[j];
                ++mult;
            }
        out.push_back({centroid / double(mult), mult});
    }
    std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
        if (a.root.real() != b.root.real()) return a.root.real() < b.root.real();
        return a.root.imag() < b.root.imag();
    });
    return out;
}

void polish_cluster(const std::vector<cplx>& monic, const std::vector<cplx>& deriv,
                    RootCluster& c) {
    cplx x = c.root;
    cplx best = x;
    double best_res = std::abs(polyval(monic, x));
    for (int it = 0; it < 60; ++it) {
        const cplx p = polyval(monic, x);
        const cplx dp = polyval(deriv, x);
        if (std::abs(dp) < 1e-280) break;
        const cplx step = double(c.multiplicity) * p / dp;
        x -= step;
        const double res = std::abs(polyval(monic, x));
        if (res < best_res) {
            best_res = res;
            best = x;
        }
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(x))) break;
    }
    c.root = best;
}

}  // namespace

std::vector<RootCluster> polynomial_roots(std::span<const cplx> coeffs) {
    // trim exact (and denormal) zero leading coefficients
    std::size_t n = coeffs.size();
    while (n > 0 && std::abs(coeffs[n - 1]) < 1e-300) --n;
    if (n == 0) throw RootFindingError("polynomial_roots: zero polynomial");
    if (n == 1) return {};  // nonzero constant, no roots

    const int d = static_cast<int>(n) - 1;
    std::vector<cplx> monic(coeffs.begin(), coeffs.begin() + n);
    const cplx lead = monic.back();
    for (cplx& c : monic) c /= lead;

    if (d == 1) return {{-monic[0], 1}};
    if (d == 2) {
        // stable complex quadratic
        const cplx b = monic[1], c0 = monic[0];
        const cplx disc = std::sqrt(b * b - 4.0 * c0);
        const cplx q = (std::real(std::conj(b) * disc) >= 0.0) ? -0.5 * (b + disc)
                                                               : -0.5 * (b - disc);
        std::vector<cplx> roots;
        if (std::abs(q) > 1e-300) {
            roots = {q, c0 / q};
        } else {
            roots = {cplx(0.0), -b};
        }
        auto clusters = cluster_roots(roots);
        const auto deriv = polyder(monic);
        for (auto& cl : clusters) polish_cluster(monic, deriv, cl);
        return clusters;
    }

    double cauchy = 0.0;
    for (int i = 0; i < d; ++i) cauchy = std::max(cauchy, std::abs(monic[i]));
    const double radius = 1.2 * (1.0 + cauchy);

    std::vector<cplx> w;
    bool ok = durand_kerner(monic, w, radius, 0.4);
    if (!ok) ok = durand_kerner(monic, w, radius * 1.7, 1.1);
    if (!ok) ok = durand_kerner(monic, w, std::max(0.5, radius * 0.6), 2.3);
    if (!ok) {
        if (d <= 30) {
            w = companion_eigenvalues(std::span<const cplx>(monic.data(), d));
        } else {
            throw RootFindingError("polynomial_roots: iteration failed to converge");
        }
    }

    auto clusters = cluster_roots(std::move(w));
    const auto deriv = polyder(monic);
    for (auto& cl : clusters) polish_cluster(monic, deriv, cl);
    return clusters;
}

}  // namespace copop
