#include "copop/runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include <json.hpp>

#include "copop/diagnostics.hpp"
#include "copop/io.hpp"
#include "copop/moments.hpp"
#include "copop/operators.hpp"

namespace copop {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

constexpr int kSchema = 1;
constexpr int kMatrixSize = 48;
constexpr int kBasisTerms = 192;
constexpr int kMomentCap = 1 << 14;

struct Context {
    RunConfig cfg;
    RunOptions opt;
    std::string outdir;
    std::vector<std::string> written;

    std::optional<AdmissibilityReport> adm;
    std::optional<MomentTable> table;

    quad::QuadratureRule rule() const {
        quad::QuadratureRule r;
        r.radial_nodes = opt.radial_nodes.value_or(160);
        r.angular_nodes = opt.angular_nodes.value_or(256);
        return r;
    }
    std::vector<double> r_sequence() const {
        return opt.r_sequence.value_or(cfg.grids.R_sequence);
    }
    std::vector<double> p_list() const { return opt.p_list.value_or(cfg.schatten.p); }

    const AdmissibilityReport& admissibility() {
        if (!adm) adm = check_admissible(cfg.weight);
        return *adm;
    }

    double delta_used() {
        if (opt.delta) return *opt.delta;
        const auto& a = admissibility();
        return a.w2 && std::isfinite(a.w2_delta) ? a.w2_delta : 1.0;
    }

    // moment table sized for the basis sum and the kernel diagonal at the
    // largest requested radius
    const MomentTable& moments() {
        if (table) return *table;
        const int deg = std::max(cfg.map.degree(), 1);
        int nmax = std::max(cfg.moments.nmax, kBasisTerms * std::max(deg, 4));
        const double rmax = r_sequence().back();
        for (;;) {
            table = compute_moments(cfg.weight, nmax, cfg.moments.radial_nodes);
            try {
                kernel_diag_radial(*table, rmax);
                break;
            } catch (const InsufficientMomentsError& e) {
                if (nmax >= kMomentCap) throw;
                nmax = std::min(std::max(2 * nmax, e.required_nmax), kMomentCap);
            }
        }
        return *table;
    }

    std::string path(const std::string& name) {
        const std::string p = (fs::path(outdir) / name).string();
        written.push_back(p);
        return p;
    }

    ojson stamp(const std::string& subcommand) {
        const auto& a = admissibility();
        ojson j;
        j["schema"] = kSchema;
        j["subcommand"] = subcommand;
        j["config_digest"] = cfg.digest;
        ojson am;
        am["w1"] = a.w1;
        am["w2"] = a.w2;
        if (a.w2) am["w2_delta"] = a.w2_delta;
        am["w3"] = a.w3;
        am["w4"] = a.w4 == AdmissibilityReport::W4::type_I
                       ? "type-I"
                       : (a.w4 == AdmissibilityReport::W4::type_II ? "type-II" : "fails");
        am["l1"] = a.l1;
        am["l1_infimum"] = a.l1_infimum;
        am["admissible"] = a.admissible();
        j["admissibility"] = am;
        ojson ov = ojson::object();
        if (opt.radial_nodes) ov["radial_nodes"] = *opt.radial_nodes;
        if (opt.angular_nodes) ov["angular_nodes"] = *opt.angular_nodes;
        if (opt.r_sequence) ov["rseq"] = *opt.r_sequence;
        if (opt.p_list) ov["p"] = *opt.p_list;
        if (opt.delta) ov["delta"] = *opt.delta;
        if (opt.normalize_origin) ov["normalize_origin"] = true;
        if (!ov.empty()) j["overrides"] = ov;
        return j;
    }

    void write_json(const std::string& name, const ojson& j) {
        write_file(path(name), j.dump(2) + "\n");
    }
};

std::string fmt_cplx_label(cplx v) {
    return format_double(v.real()) + (v.imag() < 0 ? "-" : "+") +
           format_double(std::abs(v.imag())) + "i";
}

void run_admissible(Context& ctx) {
    const auto& a = ctx.admissibility();
    ojson j = ctx.stamp("admissible");
    ojson m;
    m["w1_margin"] = a.w1_margin;
    m["w2_margin"] = a.w2_margin;
    m["w3_margin"] = a.w3_margin;
    m["w4_margin"] = a.w4_margin;
    j["margins"] = m;
    j["w4_r0"] = a.w4_r0;
    j["l1_usable_kmax"] = a.l1_usable_kmax;
    j["weight"] = ctx.cfg.weight.name();
    j["spline_smoothed"] = ctx.cfg.weight.spline_smoothed();
    ctx.write_json("admissible.json", j);
}

void run_moments(Context& ctx) {
    const MomentTable& t = ctx.moments();
    CsvWriter csv(ctx.path("moments.csv"), "n,omega_n,p_n");
    for (int n = 0; n <= t.nmax; ++n)
        csv.row({std::to_string(n), format_double(t.omega[n]), format_double(t.p[n])});
    csv.close();
    ojson j = ctx.stamp("moments");
    j["nmax"] = t.nmax;
    j["quadrature_error"] = t.quadrature_error;
    j["converged"] = t.converged;
    if (std::isfinite(t.beta_check_max_reldiff))
        j["beta_check_max_reldiff"] = t.beta_check_max_reldiff;
    ctx.write_json("moments.json", j);
}

void run_counting(Context& ctx) {
    const int nr = 48, na = 128;
    CsvWriter csv(ctx.path("counting.csv"), "re,im,N,tau");
    for (int i = 0; i < nr; ++i) {
        const double r = (i + 0.5) / nr;
        const double wr = ctx.cfg.weight(r);
        for (int k = 0; k < na; ++k) {
            const double th = 2.0 * M_PI * k / na;
            const cplx z = r * cplx(std::cos(th), std::sin(th));
            const auto s = counting_function(ctx.cfg.map, ctx.cfg.weight, z);
            csv.row({format_double(z.real()), format_double(z.imag()),
                     format_double(s.value), format_double(s.value / wr)});
        }
    }
    csv.close();
    ojson j = ctx.stamp("counting");
    j["grid"] = {{"radial", nr}, {"angular", na}};
    j["map"] = ctx.cfg.map.describe();
    ctx.write_json("counting.json", j);
}

void run_verify_cov(Context& ctx) {
    const auto rule = ctx.rule();
    struct Probe {
        const char* name;
        std::function<double(cplx)> f;
    };
    const Probe probes[] = {
        {"one", [](cplx) { return 1.0; }},
        {"abs2", [](cplx z) { return std::norm(z); }},
        {"re_plus_1", [](cplx z) { return z.real() + 1.0; }},
    };
    ojson j = ctx.stamp("verify-cov");
    ojson arr = ojson::array();
    for (const auto& pr : probes) {
        const CovCheck c = verify_change_of_variables(ctx.cfg.map, ctx.cfg.weight, pr.f, rule);
        ojson e;
        e["f"] = pr.name;
        e["lhs"] = c.lhs;
        e["rhs"] = c.rhs;
        e["reldiff"] = c.rel_diff;
        arr.push_back(e);
    }
    j["checks"] = arr;
    ctx.write_json("change_of_variables.json", j);
}

void run_hs(Context& ctx) {
    const auto rule = ctx.rule();
    const auto rseq = ctx.r_sequence();
    const HSReport rep = hs_report(ctx.cfg.map, ctx.cfg.weight, ctx.moments(), rseq,
                                   kBasisTerms, rule.radial_nodes, rule.angular_nodes);
    ojson j = ctx.stamp("hs");
    j["basis"] = rep.basis_value;
    j["integral"] = rep.integral_value;
    j["gap"] = rep.relative_gap;
    j["verdict"] = to_string(rep.verdict);
    j["basis_verdict"] = to_string(rep.basis_verdict);
    j["integral_verdict"] = to_string(rep.integral_verdict);
    j["integral_growth_exponent"] = rep.integral_growth_exponent;
    j["gap_tol"] = ctx.cfg.tolerances.hs_gap_tol;
    j["R_sequence"] = rseq;
    ctx.write_json("hs.json", j);
}

void run_essnorm(Context& ctx) {
    ProfileOptions popt;
    popt.radii = ctx.cfg.grids.radii;
    popt.angles = ctx.cfg.grids.angles;
    popt.compact_tol = ctx.cfg.tolerances.compact_tol;
    popt.notcompact_tol = ctx.cfg.tolerances.notcompact_tol;
    const EssentialNormProfile prof = essential_norm_profile(ctx.cfg.map, ctx.cfg.weight, popt);
    CsvWriter csv(ctx.path("essnorm.csv"), "r,sup_tau");
    for (std::size_t i = 0; i < prof.radii.size(); ++i)
        csv.row({format_double(prof.radii[i]), format_double(prof.sup_values[i])});
    csv.close();
    ojson j = ctx.stamp("essnorm");
    j["verdict"] = to_string(prof.verdict);
    if (prof.extrapolated_limsup)
        j["extrapolated_limsup"] = *prof.extrapolated_limsup;
    else
        j["extrapolated_limsup"] = "diverging";
    j["radii"] = prof.radii;
    j["sup_values"] = prof.sup_values;
    j["angular_argmax"] = prof.angular_argmax;
    ctx.write_json("essnorm.json", j);
}

void run_schatten(Context& ctx) {
    const auto rule = ctx.rule();
    const auto rseq = ctx.r_sequence();
    const auto ps = ctx.p_list();
    const auto reports =
        schatten_integral_multi(ctx.cfg.map, ctx.cfg.weight, ps, rule, rseq);
    ojson j = ctx.stamp("schatten");
    ojson arr = ojson::array();
    for (const auto& rep : reports) {
        ojson e;
        e["p"] = rep.p;
        e["verdict"] = to_string(rep.verdict);
        e["growth_exponent"] = rep.growth_exponent;
        e["R"] = rep.R_sequence;
        e["integral"] = rep.integral_values;
        arr.push_back(e);
        CsvWriter csv(ctx.path("schatten_p_" + format_double(rep.p) + ".csv"), "R,integral");
        for (std::size_t i = 0; i < rep.R_sequence.size(); ++i)
            csv.row({format_double(rep.R_sequence[i]), format_double(rep.integral_values[i])});
        csv.close();
    }
    j["reports"] = arr;
    // Berezin-type transform spot checks along a deterministic ray
    const double br = ctx.cfg.schatten.berezin_r;
    ojson bz = ojson::array();
    for (double rr : {0.0, 0.3, 0.6, 0.8}) {
        const cplx z(rr, 0.0);
        const double psi_val = tau(ctx.cfg.map, ctx.cfg.weight, z);
        const double hat = berezin_transform(ctx.cfg.map, ctx.cfg.weight, z, br);
        ojson e;
        e["z"] = {z.real(), z.imag()};
        e["psi"] = psi_val;
        e["berezin"] = hat;
        e["submean_bound_holds"] = psi_val <= 2.0 / (br * br) * hat + 1e-9;
        bz.push_back(e);
    }
    j["berezin_r"] = br;
    j["berezin_samples"] = bz;
    ctx.write_json("schatten.json", j);
}

void run_closed_range(Context& ctx) {
    ClosedRangeOptions copt;
    copt.nmax_monomials = ctx.cfg.closed_range.nmax_monomials;
    copt.a_grid = ctx.cfg.closed_range.a_grid;
    copt.delta = ctx.delta_used();
    copt.normalize_origin = ctx.opt.normalize_origin;
    copt.rule = ctx.rule();
    const ClosedRangeReport rep = closed_range_probe(ctx.cfg.map, ctx.cfg.weight, copt);
    CsvWriter csv(ctx.path("closed_range.csv"), "test_fn,ratio");
    for (std::size_t i = 0; i < rep.family.size(); ++i)
        csv.row({rep.family[i].label(), format_double(rep.ratios[i])});
    csv.close();
    ojson j = ctx.stamp("closed-range");
    j["verdict"] = to_string(rep.verdict);
    j["infimum"] = rep.infimum;
    j["normalized_origin"] = rep.normalized_origin;
    j["delta"] = copt.delta;
    j["family_size"] = rep.family.size();
    ctx.write_json("closed_range.json", j);
}

void run_matrix(Context& ctx) {
    const int M = std::min(kMatrixSize, ctx.moments().nmax);
    const OperatorMatrix mat = build_matrix(ctx.cfg.map, ctx.moments(), M);
    CsvWriter csv(ctx.path("matrix.csv"), "m,n,re,im");
    for (int m = 0; m <= M; ++m)
        for (int n = 0; n <= M; ++n)
            csv.row({std::to_string(m), std::to_string(n), format_double(mat.at(m, n).real()),
                     format_double(mat.at(m, n).imag())});
    csv.close();
    const auto sv = singular_values(mat);
    CsvWriter sva(ctx.path("singular_values.csv"), "i,sigma");
    for (std::size_t i = 0; i < sv.size(); ++i)
        sva.row({std::to_string(i), format_double(sv[i])});
    sva.close();
    ojson j = ctx.stamp("matrix");
    j["size"] = mat.size;
    j["truncation_tail"] = mat.truncation_tail;
    ctx.write_json("matrix.json", j);
}

void run_all(Context& ctx) {
    run_admissible(ctx);
    run_moments(ctx);
    run_counting(ctx);
    run_verify_cov(ctx);
    run_hs(ctx);
    run_essnorm(ctx);
    run_schatten(ctx);
    run_closed_range(ctx);
    run_matrix(ctx);
    // aggregate summary in dependency order
    ojson j = ctx.stamp("all");
    ojson parts = ojson::object();
    for (const char* name :
         {"admissible.json", "moments.json", "change_of_variables.json", "hs.json",
          "essnorm.json", "schatten.json", "closed_range.json", "matrix.json"}) {
        const auto body = nlohmann::ordered_json::parse(
            read_file((fs::path(ctx.outdir) / name).string()));
        ojson compact = ojson::object();
        for (const auto& item : body.items())
            if (item.key() != "schema" && item.key() != "config_digest" &&
                item.key() != "admissibility" && item.key() != "subcommand" &&
                item.key() != "overrides")
                compact[item.key()] = item.value();
        parts[name] = compact;
    }
    j["reports"] = parts;
    ctx.write_json("summary.json", j);
}

}  // namespace

int run_subcommand(const std::string& subcommand, const std::string& config_path,
                   const RunOptions& options) {
    Context ctx;
    ctx.opt = options;
    try {
        ctx.cfg = load_config(config_path);
        if (options.r_sequence) {
            const auto& rs = *options.r_sequence;
            for (std::size_t i = 0; i < rs.size(); ++i)
                if (!(rs[i] > 0.0 && rs[i] < 1.0) || (i > 0 && !(rs[i] > rs[i - 1])))
                    throw ConfigError("rseq", "must be increasing inside (0, 1)");
        }
        if (options.p_list)
            for (double p : *options.p_list)
                if (!(p > 0.0)) throw ConfigError("p", "exponents must be positive");
        if (options.delta && !(*options.delta > 0.0))
            throw ConfigError("delta", "must be positive");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    ctx.outdir = options.out_dir.empty() ? ctx.cfg.output.directory : options.out_dir;

    try {
        fs::create_directories(ctx.outdir);
        const MapValidation v = ctx.cfg.map.validate();
        if (!v.passes)
            throw std::runtime_error(
                "map is not a self-map of the disk: boundary modulus " +
                format_double(v.max_boundary_modulus) + " at (" +
                format_double(v.argmax.real()) + ", " + format_double(v.argmax.imag()) + ")");

        if (subcommand == "admissible") run_admissible(ctx);
        else if (subcommand == "moments") run_moments(ctx);
        else if (subcommand == "counting") run_counting(ctx);
        else if (subcommand == "verify-cov") run_verify_cov(ctx);
        else if (subcommand == "hs") run_hs(ctx);
        else if (subcommand == "essnorm") run_essnorm(ctx);
        else if (subcommand == "schatten") run_schatten(ctx);
        else if (subcommand == "closed-range") run_closed_range(ctx);
        else if (subcommand == "matrix") run_matrix(ctx);
        else if (subcommand == "all") run_all(ctx);
        else {
            std::cerr << "config error: unknown subcommand '" << subcommand << "'\n";
            return 2;
        }
    } catch (const std::exception& e) {
        for (const std::string& p : ctx.written) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace copop
