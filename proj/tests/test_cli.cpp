#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_bin() {
    const char* bin = std::getenv("SGFIELD_CLI_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "SGFIELD_CLI_BIN must point at the sgfield binary");
    return bin;
}

fs::path scratch_dir() {
    auto dir = fs::temp_directory_path() / "sgfield_cli_tests";
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args, const fs::path& stderr_to = {}) {
    std::string cmd = cli_bin() + " " + args;
    if (!stderr_to.empty())
        cmd += " 2>" + stderr_to.string();
    else
        cmd += " 2>/dev/null";
    cmd += " >/dev/null";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("frozen column headers per subcommand") {
    auto dir = scratch_dir();
    struct Golden {
        std::string args;
        std::string file;
        std::string columns;
    };
    const Golden golden[] = {
        {"spectrum --alpha 3 --l-max 8", "g_spectrum.csv", "ell,c_ell"},
        {"special --check sumpoly --s 2.5 --theta 1e-3 --points 8", "g_special.csv",
         "s,theta,sum,predicted_order,fitted_slope,ratio_s2"},
        {"variogram --alpha 3 --theta-min 1e-3 --theta-max 0.05 --points 8", "g_variogram.csv",
         "theta,variogram,rho_sq,ratio,tail_bound"},
        {"bump --epsilon 0.2 --l-max 128 --profile-points 32", "g_bump.csv",
         "theta,delta,tail_bound"},
        {"slnd --alpha 3 --n 3 --eps 0.1 --replicates 4 --seed 1", "g_slnd.csv",
         "epsilon,replicate,min_dist,var,ratio_c2,ratio_nd"},
        {"modulus --alpha 3 --j-min 4 --j-max 5 --replicates 2 --pairs-per-scale 16 "
         "--l-max 128 --seed 1",
         "g_modulus.csv", "scale,replicate,statistic,resolved_flag"},
        {"synth --alpha 3 --l-max 8 --seed 1 --grid-theta 2 --grid-phi 4", "g_synth.csv",
         "theta,phi,value"},
    };
    for (const auto& g : golden) {
        auto out = dir / g.file;
        REQUIRE(run_cli(g.args + " --output " + out.string()) == 0);
        auto text = slurp(out);
        CHECK_MESSAGE(contains(text, "\n" + g.columns + "\n"), g.file, ": ", g.columns);
        CHECK(contains(text, "# sgfield "));
        CHECK(contains(text, "# subcommand="));
    }
}

TEST_CASE("outputs echo their configuration") {
    auto dir = scratch_dir();
    auto out = dir / "echo.csv";
    REQUIRE(run_cli("variogram --alpha 3.5 --theta-min 1e-3 --theta-max 0.02 --points 6 "
                    "--output " +
                    out.string()) == 0);
    auto text = slurp(out);
    CHECK(contains(text, "# alpha=3.5"));
    CHECK(contains(text, "# points=6"));
    CHECK(contains(text, "# envelope=constant"));
}

TEST_CASE("config file feeds flags and explicit flags win") {
    auto dir = scratch_dir();
    auto cfg = dir / "run.cfg";
    {
        std::ofstream f(cfg);
        f << "alpha=3.5\n";
        f << "points=5\n";
        f << "theta-min=1e-3\n";
        f << "theta-max=0.02\n";
    }
    auto out1 = dir / "cfg1.csv";
    REQUIRE(run_cli("variogram --config " + cfg.string() + " --output " + out1.string()) == 0);
    CHECK(contains(slurp(out1), "# alpha=3.5"));

    auto out2 = dir / "cfg2.csv";
    REQUIRE(run_cli("variogram --config " + cfg.string() + " --alpha 3 --output " +
                    out2.string()) == 0);
    CHECK(contains(slurp(out2), "# alpha=3"));
}

TEST_CASE("byte-identical reruns across thread counts") {
    auto dir = scratch_dir();
    auto a = dir / "det_a.csv";
    auto b = dir / "det_b.csv";
    auto c = dir / "det_c.csv";
    const std::string base =
        "slnd --alpha 3 --n 4 --geometry random-cap --eps 0.1,0.05 --replicates 6 --seed 7 ";
    REQUIRE(run_cli(base + "--threads 1 --output " + a.string()) == 0);
    REQUIRE(run_cli(base + "--threads 1 --output " + b.string()) == 0);
    REQUIRE(run_cli(base + "--threads 2 --output " + c.string()) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a) == slurp(c));
}

TEST_CASE("sumpoly check surfaces the even-case coefficient") {
    auto dir = scratch_dir();
    auto out = dir / "sumpoly.csv";
    REQUIRE(run_cli("special --check sumpoly --s 2 --theta 1e-3 --output " + out.string()) == 0);
    std::ifstream in(out);
    std::string line, first_row;
    bool past_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!past_header) {
            past_header = true;
            continue;
        }
        first_row = line;
        break;
    }
    REQUIRE(!first_row.empty());
    auto last_comma = first_row.rfind(',');
    double ratio = std::stod(first_row.substr(last_comma + 1));
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("spectrum serialization round trips through the CLI") {
    auto dir = scratch_dir();
    auto saved = dir / "spec.kv";
    auto out1 = dir / "spec1.csv";
    REQUIRE(run_cli("spectrum --alpha 2.75 --l-max 16 --envelope-value 1.25 --save-spectrum " +
                    saved.string() + " --output " + out1.string()) == 0);
    auto out2 = dir / "spec2.csv";
    REQUIRE(run_cli("spectrum --spectrum-config " + saved.string() + " --output " +
                    out2.string()) == 0);
    CHECK(slurp(out1).substr(slurp(out1).find('\n')) == slurp(out2).substr(slurp(out2).find('\n')));
}

TEST_CASE("json format is well formed") {
    auto dir = scratch_dir();
    auto out = dir / "table.json";
    REQUIRE(run_cli("spectrum --alpha 3 --l-max 4 --format json --output " + out.string()) == 0);
    auto j = nlohmann::json::parse(slurp(out));
    CHECK(j["artifact"] == "sgfield");
    CHECK(j["columns"].size() == 2);
    CHECK(j["rows"].size() == 4);
    CHECK(j["config"]["alpha"] == "3");
}

TEST_CASE("default output directory comes from the environment") {
    auto dir = scratch_dir() / "envdir";
    fs::create_directories(dir);
    fs::remove(dir / "spectrum.csv");
    std::string cmd = "SGFIELD_OUT_DIR=" + dir.string() + " " + cli_bin() +
                      " spectrum --alpha 3 --l-max 4 >/dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(fs::exists(dir / "spectrum.csv"));
}

TEST_CASE("error records are machine readable with class-specific exit codes") {
    auto dir = scratch_dir();
    auto err = dir / "stderr.txt";

    // validation: alpha <= 2
    int rc = run_cli("variogram --alpha 1.5 --output " + (dir / "x.csv").string(), err);
    CHECK(rc == 3);
    auto j = nlohmann::json::parse(slurp(err));
    CHECK(j["error"] == "validation");

    // usage: unknown option
    rc = run_cli("variogram --no-such-flag 1 --output " + (dir / "y.csv").string(), err);
    CHECK(rc == 2);
    CHECK(nlohmann::json::parse(slurp(err))["error"] == "usage");

    // missing required seed
    rc = run_cli("slnd --alpha 3 --eps 0.1", err);
    CHECK(rc == 2);

    // resource: unwritable output path
    rc = run_cli("spectrum --alpha 3 --l-max 4 --output /nonexistent_dir_zz/out.csv", err);
    CHECK(rc == 4);
}

TEST_SUITE_END();
