#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "copop/config.hpp"
#include "copop/io.hpp"
#include "copop/runner.hpp"

using namespace copop;
namespace fs = std::filesystem;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
    const fs::path dir = fs::temp_directory_path() / "copop_tests";
    fs::create_directories(dir);
    const std::string path = (dir / name).string();
    write_file(path, text);
    return path;
}

const char* kMinimalConfig = R"({
  "weight": {"family": "standard", "alpha": 1},
  "map": {"family": "dilation", "coeffs": [[0.5, 0]]}
})";

int run_cli(const std::string& args) {
    const std::string cmd = std::string(COPOP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("minimal config applies defaults everywhere else") {
    const RunConfig cfg = parse_config(kMinimalConfig);
    CHECK(cfg.weight.family() == Weight::Family::standard);
    CHECK(cfg.weight.alpha() == doctest::Approx(1.0));
    CHECK(cfg.map.family() == SelfMap::Family::dilation);
    CHECK(cfg.moments.nmax == 2048);
    CHECK(cfg.grids.radii.size() == 4);
    CHECK(cfg.grids.R_sequence == std::vector<double>{0.9, 0.99, 0.999});
    CHECK(cfg.tolerances.compact_tol == doctest::Approx(1e-6));
    CHECK(cfg.schatten.p.size() == 4);
    CHECK(cfg.output.directory == "out");
    CHECK(cfg.digest.size() == 16);
}

TEST_CASE("validation errors carry field paths") {
    CHECK_THROWS_WITH_AS(parse_config(R"({
        "weight": {"family": "standard", "alpha": 1},
        "map": {"family": "dilation", "coeffs": [[0.5, 0]]},
        "grids": {"radii": [0.9, 0.5]}
    })"),
                         doctest::Contains("grids.radii"), ConfigError);

    CHECK_THROWS_WITH_AS(parse_config(R"({
        "weight": {"family": "standard", "alpha": 1},
        "map": {"family": "dilation", "coeffs": [[0.5, 0]]},
        "grids": {"raddii": [0.9]}
    })"),
                         doctest::Contains("unknown key"), ConfigError);

    CHECK_THROWS_AS(parse_config(R"({"map": {"family": "dilation", "coeffs": [[0.5, 0]]}})"),
                    ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({
        "weight": {"family": "standard", "alpha": -2},
        "map": {"family": "dilation", "coeffs": [[0.5, 0]]}
    })"),
                         doctest::Contains("alpha"), ConfigError);
    CHECK_THROWS_AS(parse_config("{ not json"), ConfigError);
}

TEST_CASE("custom table weights parse into splines") {
    std::ostringstream os;
    os << R"({"weight": {"family": "custom-table", "samples": [)";
    for (int i = 0; i <= 30; ++i) {
        const double r = 0.99 * i / 30.0;
        os << (i ? "," : "") << "[" << r << "," << (1.0 - r * r) << "]";
    }
    os << R"(]}, "map": {"family": "polynomial", "coeffs": [[0, 0], [1, 0]]}})";
    const RunConfig cfg = parse_config(os.str());
    CHECK(cfg.weight.spline_smoothed());
    CHECK(cfg.weight(0.5) == doctest::Approx(0.75).epsilon(1e-4));
}

TEST_CASE("runner produces the documented artifacts") {
    const std::string cfgpath = write_temp("ess.json", kMinimalConfig);
    const fs::path out = fs::temp_directory_path() / "copop_tests" / "ess_out";
    fs::remove_all(out);
    RunOptions opt;
    opt.out_dir = out.string();
    REQUIRE(run_subcommand("essnorm", cfgpath, opt) == 0);

    const auto j = nlohmann::json::parse(read_file((out / "essnorm.json").string()));
    CHECK(j["schema"] == 1);
    CHECK(j["verdict"] == "Compact");
    CHECK(j["admissibility"]["admissible"] == true);
    CHECK(j.contains("config_digest"));

    std::ifstream csv((out / "essnorm.csv").string());
    std::string header;
    std::getline(csv, header);
    CHECK(header == "r,sup_tau");
    std::string line;
    int rows = 0;
    while (std::getline(csv, line)) {
        ++rows;
        CHECK(line.substr(line.find(',') + 1) == "0");  // sup is exactly zero
    }
    CHECK(rows == 4);
}

TEST_CASE("verify-cov artifact records small relative differences") {
    const std::string cfgpath = write_temp("cov.json", R"({
        "weight": {"family": "standard", "alpha": 1},
        "map": {"family": "polynomial", "coeffs": [[0,0],[0,0],[1,0]]}
    })");
    const fs::path out = fs::temp_directory_path() / "copop_tests" / "cov_out";
    fs::remove_all(out);
    RunOptions opt;
    opt.out_dir = out.string();
    REQUIRE(run_subcommand("verify-cov", cfgpath, opt) == 0);
    const auto j = nlohmann::json::parse(read_file((out / "change_of_variables.json").string()));
    REQUIRE(j["checks"].size() == 3);
    for (const auto& c : j["checks"]) CHECK(double(c["reldiff"]) <= 1e-3);
}

TEST_CASE("exit codes: config errors versus computation failures") {
    RunOptions opt;
    opt.out_dir = (fs::temp_directory_path() / "copop_tests" / "codes_out").string();
    // missing file
    CHECK(run_subcommand("essnorm", "/nonexistent/cfg.json", opt) == 2);
    // unknown subcommand
    const std::string cfgpath = write_temp("min.json", kMinimalConfig);
    CHECK(run_subcommand("frobnicate", cfgpath, opt) == 2);
    // constant map: counting-dependent paths fail with exit 1
    const std::string constant = write_temp("const.json", R"({
        "weight": {"family": "standard", "alpha": 1},
        "map": {"family": "polynomial", "coeffs": [[0.3, 0]]}
    })");
    CHECK(run_subcommand("counting", constant, opt) == 1);
    // non-self-map rejected
    const std::string big = write_temp("big.json", R"({
        "weight": {"family": "standard", "alpha": 1},
        "map": {"family": "dilation", "coeffs": [[2.0, 0]]}
    })");
    CHECK(run_subcommand("counting", big, opt) == 1);
}

TEST_CASE("partial artifacts are removed on failure") {
    const std::string constant = write_temp("const2.json", R"({
        "weight": {"family": "standard", "alpha": 1},
        "map": {"family": "polynomial", "coeffs": [[0.3, 0]]}
    })");
    const fs::path out = fs::temp_directory_path() / "copop_tests" / "partial_out";
    fs::remove_all(out);
    RunOptions opt;
    opt.out_dir = out.string();
    CHECK(run_subcommand("all", constant, opt) == 1);
    // nothing half-written survives
    CHECK_FALSE(fs::exists(out / "counting.csv"));
    CHECK_FALSE(fs::exists(out / "summary.json"));
}

TEST_CASE("matrix subcommand emits the matrix and its singular values") {
    const std::string cfgpath = write_temp("mat.json", kMinimalConfig);
    const fs::path out = fs::temp_directory_path() / "copop_tests" / "mat_out";
    fs::remove_all(out);
    RunOptions opt;
    opt.out_dir = out.string();
    REQUIRE(run_subcommand("matrix", cfgpath, opt) == 0);
    std::ifstream csv((out / "singular_values.csv").string());
    std::string header, first;
    std::getline(csv, header);
    std::getline(csv, first);
    CHECK(header == "i,sigma");
    CHECK(first == "0,1");  // constants are preserved
}

TEST_CASE("identical configs give byte-identical artifacts") {
    const std::string cfgpath = write_temp("det.json", R"({
        "weight": {"family": "standard", "alpha": 1},
        "map": {"family": "polynomial", "coeffs": [[0,0],[0.5,0],[0.5,0]]},
        "moments": {"nmax": 256},
        "grids": {"R_sequence": [0.6, 0.9]}
    })");
    const fs::path out1 = fs::temp_directory_path() / "copop_tests" / "det1";
    const fs::path out2 = fs::temp_directory_path() / "copop_tests" / "det2";
    fs::remove_all(out1);
    fs::remove_all(out2);
    RunOptions opt;
    for (const char* sub : {"admissible", "moments", "essnorm", "schatten"}) {
        opt.out_dir = out1.string();
        REQUIRE(run_subcommand(sub, cfgpath, opt) == 0);
        opt.out_dir = out2.string();
        REQUIRE(run_subcommand(sub, cfgpath, opt) == 0);
    }
    for (const auto& entry : fs::directory_iterator(out1)) {
        const auto name = entry.path().filename();
        INFO(name.string());
        CHECK(read_file(entry.path().string()) == read_file((out2 / name).string()));
    }
}

TEST_CASE("command line driver end to end") {
    const std::string cfgpath = write_temp("cli.json", kMinimalConfig);
    const fs::path out = fs::temp_directory_path() / "copop_tests" / "cli_out";
    fs::remove_all(out);
    CHECK(run_cli("essnorm --config " + cfgpath + " --out " + out.string()) == 0);
    CHECK(fs::exists(out / "essnorm.json"));
    CHECK(run_cli("essnorm --config /nonexistent.json --out " + out.string()) == 2);
    CHECK(run_cli("--help") == 0);
    // flag overrides are accepted
    CHECK(run_cli("schatten --config " + cfgpath + " --out " + out.string() +
                  " --p 1,2 --rseq 0.6,0.9 --radial-nodes 64 --angular-nodes 64") == 0);
    CHECK(fs::exists(out / "schatten_p_1.csv"));
    CHECK(fs::exists(out / "schatten_p_2.csv"));
}
