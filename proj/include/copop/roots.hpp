// Complex polynomial root finding: simultaneous (Durand-Kerner) iteration with
// a companion-matrix QR fallback, multiplicity detection by clustering, and
// multiplicity-aware Newton polish.
#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

namespace copop {

using cplx = std::complex<double>;

struct RootFindingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RootCluster {
    cplx root;
    int multiplicity;
};

/// All roots of c[0] + c[1] z + ... + c[d] z^d with multiplicities.
/// Exact trailing zero coefficients are trimmed; throws if the polynomial is
/// identically zero or constant.
std::vector<RootCluster> polynomial_roots(std::span<const cplx> coeffs);

/// Eigenvalues of the companion matrix of z^d + tail[d-1] z^{d-1} + ... + tail[0]
/// by shifted Hessenberg QR. Degree capped at 30. Exposed for testing.
std::vector<cplx> companion_eigenvalues(std::span<const cplx> tail);

/// Horner evaluation of c[0] + c[1] z + ...
cplx polyval(std::span<const cplx> coeffs, cplx z);

/// Coefficients of the derivative polynomial.
std::vector<cplx> polyder(std::span<const cplx> coeffs);

/// Truncated product: degrees above max_degree are dropped.
std::vector<cplx> polymul(std::span<const cplx> a, std::span<const cplx> b,
                          int max_degree = -1);

}  // namespace copop
