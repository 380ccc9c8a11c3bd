// Run configuration: JSON descriptors for the weight, the self-map, grids and
// tolerances, with strict validation (unknown keys rejected, field paths in
// error messages).
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "copop/selfmap.hpp"
#include "copop/weight.hpp"

namespace copop {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& field, const std::string& what)
        : std::runtime_error(field + ": " + what) {}
};

struct RunConfig {
    Weight weight = Weight::standard(1.0);
    SelfMap map = SelfMap::dilation(0.5);

    struct Moments {
        int nmax = 2048;
        int radial_nodes = 256;
    } moments;

    struct Grids {
        std::vector<double> radii = {0.9, 0.99, 0.999, 0.9999};
        int angles = 512;
        std::vector<double> R_sequence = {0.9, 0.99, 0.999};
    } grids;

    struct Tolerances {
        double compact_tol = 1e-6;
        double notcompact_tol = 1e-3;
        double hs_gap_tol = 0.01;
    } tolerances;

    struct Schatten {
        std::vector<double> p = {0.5, 1.0, 2.0, 4.0};
        double berezin_r = 0.5;
    } schatten;

    struct ClosedRange {
        int nmax_monomials = 40;
        std::vector<cplx> a_grid = {cplx(0.0), cplx(0.5), cplx(0.9)};
    } closed_range;

    struct Output {
        std::string directory = "out";
        std::vector<std::string> formats = {"json", "csv"};
    } output;

    std::string digest;  // of the raw config text
};

/// Parses and validates a JSON configuration document.
RunConfig parse_config(const std::string& text);

/// Convenience: load from a file, recording the digest of the raw bytes.
RunConfig load_config(const std::string& path);

}  // namespace copop
