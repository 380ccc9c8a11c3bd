#include "copop/moments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "copop/numerics.hpp"

namespace copop {

namespace {

constexpr int kNodeCap = 1 << 14;

int ceil_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

// S_m = int_0^1 r^{2m+1} omega(r) dr for m = 0..nmax, all from the same rule.
// The substitution r = 1 - (1-t)^2 clusters nodes where the integrand peaks
// and removes the endpoint singularity of half-integer standard weights.
std::vector<double> moment_sweep(const Weight& w, int nmax, int nodes) {
    const auto rule = gauss_legendre(nodes);
    std::vector<double> base(nodes), r2(nodes);
    for (int i = 0; i < nodes; ++i) {
        const double t = 0.5 * (rule->x[i] + 1.0);
        const double r = 1.0 - (1.0 - t) * (1.0 - t);
        const double jac = 2.0 * (1.0 - t);
        base[i] = 0.5 * rule->w[i] * jac * r * w(r);  // carries one power of r
        r2[i] = r * r;
    }
    std::vector<double> S(nmax + 1);
    std::vector<double> cur = base;
    for (int m = 0; m <= nmax; ++m) {
        double sum = 0.0, comp = 0.0;  // Kahan
        for (int i = 0; i < nodes; ++i) {
            const double y = cur[i] - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        S[m] = sum;
        if (m < nmax)
            for (int i = 0; i < nodes; ++i) cur[i] *= r2[i];
    }
    return S;
}

}  // namespace

MomentTable compute_moments(const Weight& w, int nmax, int radial_nodes) {
    if (nmax < 1) throw std::invalid_argument("compute_moments: nmax must be >= 1");
    int start = radial_nodes > 0 ? ceil_pow2(radial_nodes)
                                 : std::max(256, ceil_pow2(nmax / 8));
    start = std::min(start, kNodeCap);

    std::vector<double> S = moment_sweep(w, nmax, start);
    double err = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (int n = 2 * start; n <= kNodeCap; n *= 2) {
        std::vector<double> S2 = moment_sweep(w, nmax, n);
        const double a = S2[nmax], b = S[nmax];
        err = std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
        S = std::move(S2);
        if (err <= 1e-12) {
            converged = true;
            break;
        }
    }

    MomentTable table;
    table.nmax = nmax;
    table.quadrature_error = err;
    table.converged = converged;
    table.p.resize(nmax + 1);
    table.omega.resize(nmax + 1);
    table.omega[0] = 1.0;
    for (int m = 0; m <= nmax; ++m) {
        table.p[m] = 2.0 * S[m];
        if (!(table.p[m] > 0.0))
            throw std::runtime_error("compute_moments: non-positive moment encountered");
    }
    for (int n = 1; n <= nmax; ++n) table.omega[n] = 2.0 * double(n) * double(n) * S[n - 1];

    if (w.family() == Weight::Family::standard) {
        const double alpha = w.alpha();
        double worst = 0.0;
        for (int n = 1; n <= nmax; ++n) {
            const double p_exact = beta_fn(n + 1, alpha + 1);
            const double o_exact = double(n) * double(n) * beta_fn(n, alpha + 1);
            worst = std::max(worst, std::abs(table.p[n] - p_exact) / p_exact);
            worst = std::max(worst, std::abs(table.omega[n] - o_exact) / o_exact);
        }
        const double p0_exact = beta_fn(1, alpha + 1);
        worst = std::max(worst, std::abs(table.p[0] - p0_exact) / p0_exact);
        table.beta_check_max_reldiff = worst;
    }
    return table;
}

}  // namespace copop
