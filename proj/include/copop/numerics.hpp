// Low-level numerical utilities: Gauss-Legendre rules, log-Beta, summation,
// cubic splines, and a deterministic parallel loop.
#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace copop {

/// Gauss-Legendre rule on [-1, 1], nodes ascending.
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

/// Cached n-point Gauss-Legendre rule. Thread safe; nodes computed by Newton
/// iteration on the Legendre recurrence to machine precision.
std::shared_ptr<const GaussRule> gauss_legendre(int n);

/// log Beta(a, b) = lgamma(a) + lgamma(b) - lgamma(a + b)
double lbeta(double a, double b);
double beta_fn(double a, double b);

/// Fixed-order pairwise summation (deterministic, cancellation friendly).
double pairwise_sum(std::span<const double> v);

/// Natural cubic spline through strictly increasing abscissae.
/// Evaluation outside [x_front, x_back] extrapolates the end cubic.
class CubicSpline {
public:
    CubicSpline(std::vector<double> x, std::vector<double> y);

    /// value (order 0), first (1) or second (2) derivative
    double eval(double t, int order = 0) const;

    double min_x() const { return x_.front(); }
    double max_x() const { return x_.back(); }

private:
    std::vector<double> x_, y_, m_;  // m_ = second derivatives at the knots
};

/// Runs fn(i) for i in [0, n). Deterministic: each index owns its output slot.
/// Thread count = min(hardware, COPOP_THREADS env var when set).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace copop
