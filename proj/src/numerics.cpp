#include "copop/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace copop {

namespace {

// Legendre P_n and derivative at x via the three-term recurrence.
void legendre_pair(int n, double x, double& pn, double& dpn) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
    }
    // after the loop p1 = P_n, p0 = P_{n-1} (for n >= 1)
    pn = (n == 0) ? p0 : p1;
    dpn = (n >= 1) ? n * (x * p1 - p0) / (x * x - 1.0) : 0.0;
}

std::shared_ptr<const GaussRule> build_rule(int n) {
    auto rule = std::make_shared<GaussRule>();
    rule->x.assign(n, 0.0);
    rule->w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // i-th root counted from +1
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pn = 0, dpn = 1;
        for (int it = 0; it < 100; ++it) {
            legendre_pair(n, x, pn, dpn);
            double dx = pn / dpn;
            x -= dx;
            if (std::abs(dx) <= 1e-15 * (1.0 + std::abs(x))) {
                legendre_pair(n, x, pn, dpn);
                x -= pn / dpn;
                break;
            }
        }
        legendre_pair(n, x, pn, dpn);
        double w = 2.0 / ((1.0 - x * x) * dpn * dpn);
        rule->x[n - 1 - i] = x;
        rule->w[n - 1 - i] = w;
        rule->x[i] = -x;
        rule->w[i] = w;
    }
    if (n % 2 == 1) {
        // middle node is exactly 0
        rule->x[n / 2] = 0.0;
        double pn, dpn;
        legendre_pair(n, 0.0, pn, dpn);
        rule->w[n / 2] = 2.0 / (dpn * dpn);
    }
    return rule;
}

}  // namespace

std::shared_ptr<const GaussRule> gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const GaussRule>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    auto rule = build_rule(n);
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.emplace(n, rule);
    return it->second;
}

double lbeta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double beta_fn(double a, double b) { return std::exp(lbeta(a, b)); }

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 32) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 3 || y_.size() != n)
        throw std::invalid_argument("CubicSpline: need >= 3 matching samples");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw std::invalid_argument("CubicSpline: abscissae must increase");

    // natural boundary: second derivative zero at both ends
    m_.assign(n, 0.0);
    std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
    diag[0] = diag[n - 1] = 1.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
        diag[i] = 2.0 * (h0 + h1);
        upper[i] = h1;
        rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
    }
    // Thomas solve (lower entry for row i is h0, zero on boundary rows)
    std::vector<double> c(n, 0.0);
    c[0] = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        double h0 = x_[i] - x_[i - 1];
        double denom = diag[i] - h0 * c[i - 1];
        c[i] = upper[i] / denom;
        rhs[i] = (rhs[i] - h0 * rhs[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 1;) m_[i] = rhs[i] - c[i] * m_[i + 1];
}

double CubicSpline::eval(double t, int order) const {
    const std::size_t n = x_.size();
    std::size_t hi = std::upper_bound(x_.begin(), x_.end(), t) - x_.begin();
    hi = std::clamp<std::size_t>(hi, 1, n - 1);
    const std::size_t lo = hi - 1;
    const double h = x_[hi] - x_[lo];
    const double a = (x_[hi] - t) / h, b = (t - x_[lo]) / h;
    switch (order) {
        case 0:
            return a * y_[lo] + b * y_[hi] +
                   ((a * a * a - a) * m_[lo] + (b * b * b - b) * m_[hi]) * h * h / 6.0;
        case 1:
            return (y_[hi] - y_[lo]) / h +
                   (-(3.0 * a * a - 1.0) * m_[lo] + (3.0 * b * b - 1.0) * m_[hi]) * h / 6.0;
        case 2:
            return a * m_[lo] + b * m_[hi];
        default:
            throw std::invalid_argument("CubicSpline::eval: order must be 0, 1 or 2");
    }
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    unsigned threads = std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
    if (const char* env = std::getenv("COPOP_THREADS")) {
        long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) threads = std::min<unsigned>(threads, static_cast<unsigned>(cap));
    }
    threads = std::min<unsigned>(threads, static_cast<unsigned>(n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::exception_ptr error;
    std::mutex error_mu;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (std::size_t i = t; i < n; i += threads) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace copop
