// Moment sequences of a radial weight: omega_n (first-derivative norm weights)
// and p_n (Bergman-type weights), computed from one shared radial rule so that
// omega_n = n^2 p_{n-1} holds to machine precision.
#pragma once

#include <vector>

#include "copop/weight.hpp"

namespace copop {

struct MomentTable {
    int nmax = 0;
    std::vector<double> omega;  // omega[0] = 1 by convention
    std::vector<double> p;      // p[0..nmax]
    double quadrature_error = 0.0;  // relative change of the highest moment on the last refinement
    bool converged = false;         // refinement reached the 1e-12 agreement target
    double beta_check_max_reldiff = std::nan("");  // standard weights: deviation from closed forms
};

/// Both moment sequences up to nmax. Gauss-Legendre in the clustered variable
/// (r = 1 - (1-t)^2) with doubling refinement until successive values of the
/// highest moment agree to 1e-12 relative, capped at 2^14 nodes; the achieved
/// agreement is reported either way. radial_nodes = 0 picks the start size.
MomentTable compute_moments(const Weight& w, int nmax, int radial_nodes = 0);

}  // namespace copop
