#include "copop/config.hpp"

#include <set>

#include <json.hpp>

#include "copop/io.hpp"

namespace copop {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& path,
                    const std::set<std::string>& known) {
    for (const auto& item : obj.items())
        if (!known.count(item.key()))
            throw ConfigError(path.empty() ? item.key() : path + "." + item.key(),
                              "unknown key");
}

double need_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    return v.get<double>();
}

int need_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
    return v.get<int>();
}

cplx need_complex(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError(path, "expected a [re, im] pair");
    return cplx(v[0].get<double>(), v[1].get<double>());
}

Weight parse_weight(const json& v, const std::string& path) {
    if (!v.is_object()) throw ConfigError(path, "expected an object");
    const std::string family = v.value("family", std::string());
    if (family == "standard") {
        reject_unknown(v, path, {"family", "alpha"});
        if (!v.contains("alpha")) throw ConfigError(path + ".alpha", "required");
        const double alpha = need_number(v["alpha"], path + ".alpha");
        if (!(alpha > -1.0)) throw ConfigError(path + ".alpha", "must be > -1");
        return Weight::standard(alpha);
    }
    if (family == "custom-table") {
        reject_unknown(v, path, {"family", "samples"});
        if (!v.contains("samples") || !v["samples"].is_array())
            throw ConfigError(path + ".samples", "required array of [r, w] pairs");
        std::vector<std::array<double, 2>> samples;
        for (std::size_t i = 0; i < v["samples"].size(); ++i) {
            const auto& s = v["samples"][i];
            const std::string sp = path + ".samples[" + std::to_string(i) + "]";
            if (!s.is_array() || s.size() != 2) throw ConfigError(sp, "expected [r, w]");
            samples.push_back({need_number(s[0], sp), need_number(s[1], sp)});
        }
        try {
            return Weight::from_samples(samples);
        } catch (const std::exception& e) {
            throw ConfigError(path + ".samples", e.what());
        }
    }
    throw ConfigError(path + ".family", "expected \"standard\" or \"custom-table\"");
}

SelfMap parse_map(const json& v, const std::string& path) {
    if (!v.is_object()) throw ConfigError(path, "expected an object");
    const std::string family = v.value("family", std::string());
    try {
        if (family == "polynomial") {
            reject_unknown(v, path, {"family", "coeffs"});
            if (!v.contains("coeffs") || !v["coeffs"].is_array())
                throw ConfigError(path + ".coeffs", "required array of [re, im] pairs");
            std::vector<cplx> coeffs;
            for (std::size_t i = 0; i < v["coeffs"].size(); ++i)
                coeffs.push_back(
                    need_complex(v["coeffs"][i], path + ".coeffs[" + std::to_string(i) + "]"));
            return SelfMap::polynomial(std::move(coeffs));
        }
        if (family == "dilation") {
            reject_unknown(v, path, {"family", "coeffs"});
            if (!v.contains("coeffs") || !v["coeffs"].is_array() || v["coeffs"].size() != 1)
                throw ConfigError(path + ".coeffs", "dilation takes one [re, im] coefficient");
            return SelfMap::dilation(need_complex(v["coeffs"][0], path + ".coeffs[0]"));
        }
        if (family == "moebius") {
            reject_unknown(v, path, {"family", "a", "theta"});
            if (!v.contains("a")) throw ConfigError(path + ".a", "required");
            const cplx a = need_complex(v["a"], path + ".a");
            const double theta = v.contains("theta") ? need_number(v["theta"], path + ".theta") : 0.0;
            return SelfMap::moebius(a, theta);
        }
        if (family == "blaschke") {
            reject_unknown(v, path, {"family", "zeros", "theta"});
            if (!v.contains("zeros") || !v["zeros"].is_array())
                throw ConfigError(path + ".zeros", "required array of [re, im] pairs");
            std::vector<cplx> zeros;
            for (std::size_t i = 0; i < v["zeros"].size(); ++i)
                zeros.push_back(
                    need_complex(v["zeros"][i], path + ".zeros[" + std::to_string(i) + "]"));
            const double theta = v.contains("theta") ? need_number(v["theta"], path + ".theta") : 0.0;
            return SelfMap::blaschke(std::move(zeros), theta);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path, e.what());
    }
    throw ConfigError(path + ".family",
                      "expected \"polynomial\", \"dilation\", \"moebius\" or \"blaschke\"");
}

std::vector<double> parse_increasing(const json& v, const std::string& path, double lo,
                                     double hi) {
    if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a non-empty array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double x = need_number(v[i], path + "[" + std::to_string(i) + "]");
        if (!(x > lo && x < hi)) throw ConfigError(path, "values must lie in (0, 1)");
        if (!out.empty() && !(x > out.back())) throw ConfigError(path, "not increasing");
        out.push_back(x);
    }
    return out;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", e.what());
    }
    if (!root.is_object()) throw ConfigError("config", "top level must be an object");
    reject_unknown(root, "", {"weight", "map", "moments", "grids", "tolerances", "schatten",
                              "closed_range", "output"});
    RunConfig cfg;
    if (!root.contains("weight")) throw ConfigError("weight", "required");
    if (!root.contains("map")) throw ConfigError("map", "required");
    cfg.weight = parse_weight(root["weight"], "weight");
    cfg.map = parse_map(root["map"], "map");

    if (root.contains("moments")) {
        const auto& m = root["moments"];
        reject_unknown(m, "moments", {"nmax", "radial_nodes"});
        if (m.contains("nmax")) cfg.moments.nmax = need_int(m["nmax"], "moments.nmax");
        if (m.contains("radial_nodes"))
            cfg.moments.radial_nodes = need_int(m["radial_nodes"], "moments.radial_nodes");
        if (cfg.moments.nmax < 1) throw ConfigError("moments.nmax", "must be >= 1");
        if (cfg.moments.radial_nodes < 0)
            throw ConfigError("moments.radial_nodes", "must be >= 0");
    }
    if (root.contains("grids")) {
        const auto& g = root["grids"];
        reject_unknown(g, "grids", {"radii", "angles", "R_sequence"});
        if (g.contains("radii")) cfg.grids.radii = parse_increasing(g["radii"], "grids.radii", 0.0, 1.0);
        if (g.contains("angles")) {
            cfg.grids.angles = need_int(g["angles"], "grids.angles");
            if (cfg.grids.angles < 8) throw ConfigError("grids.angles", "must be >= 8");
        }
        if (g.contains("R_sequence"))
            cfg.grids.R_sequence = parse_increasing(g["R_sequence"], "grids.R_sequence", 0.0, 1.0);
    }
    if (root.contains("tolerances")) {
        const auto& t = root["tolerances"];
        reject_unknown(t, "tolerances", {"compact_tol", "notcompact_tol", "hs_gap_tol"});
        if (t.contains("compact_tol"))
            cfg.tolerances.compact_tol = need_number(t["compact_tol"], "tolerances.compact_tol");
        if (t.contains("notcompact_tol"))
            cfg.tolerances.notcompact_tol =
                need_number(t["notcompact_tol"], "tolerances.notcompact_tol");
        if (t.contains("hs_gap_tol"))
            cfg.tolerances.hs_gap_tol = need_number(t["hs_gap_tol"], "tolerances.hs_gap_tol");
        if (!(cfg.tolerances.compact_tol > 0.0 && cfg.tolerances.notcompact_tol > 0.0 &&
              cfg.tolerances.hs_gap_tol > 0.0))
            throw ConfigError("tolerances", "all tolerances must be positive");
    }
    if (root.contains("schatten")) {
        const auto& s = root["schatten"];
        reject_unknown(s, "schatten", {"p", "berezin_r"});
        if (s.contains("p")) {
            if (!s["p"].is_array() || s["p"].empty())
                throw ConfigError("schatten.p", "expected a non-empty array");
            cfg.schatten.p.clear();
            for (std::size_t i = 0; i < s["p"].size(); ++i) {
                const double p = need_number(s["p"][i], "schatten.p[" + std::to_string(i) + "]");
                if (!(p > 0.0)) throw ConfigError("schatten.p", "exponents must be positive");
                cfg.schatten.p.push_back(p);
            }
        }
        if (s.contains("berezin_r")) {
            cfg.schatten.berezin_r = need_number(s["berezin_r"], "schatten.berezin_r");
            if (!(cfg.schatten.berezin_r > 0.0 && cfg.schatten.berezin_r < 1.0))
                throw ConfigError("schatten.berezin_r", "must lie in (0, 1)");
        }
    }
    if (root.contains("closed_range")) {
        const auto& c = root["closed_range"];
        reject_unknown(c, "closed_range", {"nmax_monomials", "a_grid"});
        if (c.contains("nmax_monomials")) {
            cfg.closed_range.nmax_monomials =
                need_int(c["nmax_monomials"], "closed_range.nmax_monomials");
            if (cfg.closed_range.nmax_monomials < 1)
                throw ConfigError("closed_range.nmax_monomials", "must be >= 1");
        }
        if (c.contains("a_grid")) {
            if (!c["a_grid"].is_array())
                throw ConfigError("closed_range.a_grid", "expected an array");
            cfg.closed_range.a_grid.clear();
            for (std::size_t i = 0; i < c["a_grid"].size(); ++i) {
                const cplx a = need_complex(c["a_grid"][i],
                                            "closed_range.a_grid[" + std::to_string(i) + "]");
                if (!(std::abs(a) < 1.0))
                    throw ConfigError("closed_range.a_grid", "entries must satisfy |a| < 1");
                cfg.closed_range.a_grid.push_back(a);
            }
        }
    }
    if (root.contains("output")) {
        const auto& o = root["output"];
        reject_unknown(o, "output", {"directory", "formats"});
        if (o.contains("directory")) {
            if (!o["directory"].is_string())
                throw ConfigError("output.directory", "expected a string");
            cfg.output.directory = o["directory"].get<std::string>();
        }
        if (o.contains("formats")) {
            if (!o["formats"].is_array()) throw ConfigError("output.formats", "expected an array");
            cfg.output.formats.clear();
            for (const auto& f : o["formats"]) {
                if (!f.is_string() ||
                    (f.get<std::string>() != "json" && f.get<std::string>() != "csv"))
                    throw ConfigError("output.formats", "entries must be \"json\" or \"csv\"");
                cfg.output.formats.push_back(f.get<std::string>());
            }
        }
    }
    cfg.digest = fnv1a_hex(text);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::string text;
    try {
        text = read_file(path);
    } catch (const std::exception& e) {
        throw ConfigError("config", e.what());
    }
    return parse_config(text);
}

}  // namespace copop
