// Finite-dimensional realizations of the composition operator: its matrix in
// the orthonormal monomial basis, the Bergman-kernel diagonal, and the
// Hilbert-Schmidt norm by two independent routes (basis sum vs counting
// integral).
#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "copop/counting.hpp"
#include "copop/moments.hpp"
#include "copop/selfmap.hpp"

namespace copop {

struct InsufficientMomentsError : std::runtime_error {
    explicit InsufficientMomentsError(int required)
        : std::runtime_error("kernel_diag: moment table too short, need nmax >= " +
                             std::to_string(required)),
          required_nmax(required) {}
    int required_nmax;
};

/// Kernel diagonal sum_{n>=0} |z|^{2n} / p_n with a certified geometric tail
/// bound below 1e-10 of the partial sum; throws InsufficientMomentsError when
/// the table cannot certify the requested |z|.
double kernel_diag(const MomentTable& moments, cplx z);
double kernel_diag_radial(const MomentTable& moments, double abs_z);

enum class SeriesVerdict { finite, diverging, inconclusive };

const char* to_string(SeriesVerdict v);

struct ImageNorm {
    double value = 0.0;  // squared norm of the normalized monomial image
    double tail = 0.0;   // bound on the weighted mass beyond degree M
};

/// Squared norm of C_phi applied to z^n / ||z^n||. Derivative-only mode keeps
/// the first-derivative part of the norm; full mode adds |phi(0)^n|^2 / omega_n.
ImageNorm image_norm(const SelfMap& phi, const MomentTable& moments, int n, int M,
                     bool derivative_only = true);

struct BasisRoute {
    double value = 0.0;
    double tail = 0.0;
    SeriesVerdict verdict = SeriesVerdict::inconclusive;
    double tail_ratio = 0.0;     // fitted geometric ratio of the last terms
    std::vector<double> terms;   // image norms for n = 1..nmax
};

/// Basis-sum route: sum over n >= 1 of derivative-only image norms with a
/// geometric tail estimate; non-decaying terms yield "diverging".
BasisRoute hs_norm_basis(const SelfMap& phi, const MomentTable& moments, int nmax_terms,
                         int M = 0 /* 0 = nmax * max(degree, 4) */);

struct IntegralRoute {
    double value = 0.0;
    SeriesVerdict verdict = SeriesVerdict::inconclusive;
    double growth_exponent = 0.0;       // slope of log-increments vs log(1 - R)
    std::vector<double> R;              // evaluation radii
    std::vector<double> cumulative;     // integral over |z| < R
};

/// Integral route: integral over |z| < R of kernel_diag * N dA per R, with
/// radial splits at the support radius; geometric extrapolation or divergence
/// diagnosis from the increments.
IntegralRoute hs_norm_integral(const SelfMap& phi, const Weight& w, const MomentTable& moments,
                               std::span<const double> R_sequence, int radial_per_segment = 160,
                               int angular = 256);

struct HSReport {
    double basis_value = 0.0;
    double integral_value = 0.0;
    double relative_gap = 0.0;  // |basis - integral| / max(basis, integral, tiny)
    SeriesVerdict verdict = SeriesVerdict::inconclusive;
    SeriesVerdict basis_verdict = SeriesVerdict::inconclusive;
    SeriesVerdict integral_verdict = SeriesVerdict::inconclusive;
    double integral_growth_exponent = 0.0;
};

HSReport hs_report(const SelfMap& phi, const Weight& w, const MomentTable& moments,
                   std::span<const double> R_sequence, int nmax_terms = 192,
                   int radial_per_segment = 160, int angular = 256);

struct OperatorMatrix {
    int size = 0;  // (M+1) x (M+1)
    std::vector<cplx> entries;  // row-major
    double truncation_tail = 0.0;

    cplx at(int m, int n) const { return entries[std::size_t(m) * size + n]; }
    cplx& at(int m, int n) { return entries[std::size_t(m) * size + n]; }
};

/// Matrix entries <C_phi e_n, e_m> in the orthonormal basis e_n = z^n / sqrt(omega_n).
OperatorMatrix build_matrix(const SelfMap& phi, const MomentTable& moments, int M);

/// Singular values by one-sided Jacobi iteration (tolerance 1e-10, at most 100
/// sweeps); drop_first removes the constant basis direction before the sweep.
std::vector<double> singular_values(const OperatorMatrix& mat, bool drop_first = false);

/// Schatten p-quasi-norm (sum sigma_i^p)^{1/p} of the truncated matrix.
double schatten_from_matrix(const OperatorMatrix& mat, double p, bool drop_first = false);

}  // namespace copop
