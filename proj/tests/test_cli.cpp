// End-to-end checks of the command-line surface: every subcommand runs against
// a generated config and the emitted files have the documented schemas.

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

std::string g_adlab;
std::filesystem::path g_dir;

int run(const std::string& args) {
    const std::string cmd = "cd " + g_dir.string() + " && " + g_adlab + " " + args + " 2>cli_err.txt";
    return std::system(cmd.c_str());
}

std::string slurp(const std::string& name) {
    std::ifstream in(g_dir / name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& name, const std::string& content) {
    std::ofstream out(g_dir / name);
    out << content;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}    // namespace

TEST_CASE("cli end to end") {
    write_file("cosine.cfg",
               "preset = cosine_exact\n[solver]\nN = 128\nK_max = 32\n[output]\npath = out.csv\n");
    write_file("scalar.cfg",
               "[model]\ntype = scalar\n[kernel]\ntype = cosine\nm = 1\namplitude = -1.0\n"
               "[params]\nalpha = 2.2\n[solver]\nN = 128\nK_max = 32\nseed_amplitude = 0.05\n"
               "dt = 0.05\nt_end = 60\n");
    write_file("tophat.cfg", "preset = P1\n[solver]\nN = 256\nK_max = 128\n");

    SUBCASE("spectrum") {
        REQUIRE(run("--config cosine.cfg --out spectrum.csv spectrum --k-max 8") == 0);
        const std::string csv = slurp("spectrum.csv");
        CHECK(first_line(csv) == "k,lambda_minus,lambda_plus");
        CHECK(std::filesystem::exists(g_dir / "spectrum.csv.meta.json"));
        REQUIRE(run("--config cosine.cfg --out spectrum.json --format json spectrum --k-max 4") == 0);
        const auto arr = nlohmann::json::parse(slurp("spectrum.json"));
        REQUIRE(arr.is_array());
        CHECK(arr.size() == 4);
        CHECK(arr[0].contains("lambda_plus"));
    }
    SUBCASE("stability-region") {
        REQUIRE(run("--config tophat.cfg --out region.csv stability-region --gamma 2.0 --samples 16") == 0);
        const std::string csv = slurp("region.csv");
        CHECK(first_line(csv) == "branch,chi1a1,chi2a2");
        int lines = 0;
        for (char ch : csv)
            if (ch == '\n') ++lines;
        CHECK(lines == 1 + 2 * 16);
    }
    SUBCASE("bifurcate") {
        REQUIRE(run("--config cosine.cfg --out points.json bifurcate --param gamma") == 0);
        const auto arr = nlohmann::json::parse(slurp("points.json"));
        REQUIRE(arr.is_array());
        REQUIRE(arr.size() == 1);
        CHECK(arr[0]["kind"] == "gamma");
        CHECK(arr[0]["k"] == 1);
        CHECK(std::abs(arr[0]["value"].get<double>() - 1.0) < 1e-12);
        CHECK(arr[0]["criticality"] == "supercritical");
        CHECK(arr[0]["phase"] == "in_phase");
        CHECK(arr[0]["simple"] == true);
        REQUIRE(run("--config scalar.cfg --out spts.json bifurcate --param alpha-scalar") == 0);
        const auto sarr = nlohmann::json::parse(slurp("spts.json"));
        REQUIRE(sarr.size() == 1);
        CHECK_FALSE(sarr[0].contains("c"));    // absent for scalar points
    }
    SUBCASE("continue") {
        REQUIRE(run("--config scalar.cfg --out branch.csv continue --param alpha-scalar --from 0 "
                    "--range 2.0:2.2:5") == 0);
        const std::string csv = slurp("branch.csv");
        CHECK(first_line(csv) == "nu,amplitude,free_energy,residual,iters");
        int lines = 0;
        for (char ch : csv)
            if (ch == '\n') ++lines;
        CHECK(lines == 1 + 5);
    }
    SUBCASE("simulate with snapshots") {
        REQUIRE(run("--config scalar.cfg --out traj.csv simulate --t-end 2 --dt 0.05 "
                    "--snapshots 1,2") == 0);
        const std::string csv = slurp("traj.csv");
        CHECK(first_line(csv) == "t,mass_err_1,mass_err_2,min_u,H,F,l2_dist");
        CHECK(std::filesystem::exists(g_dir / "state_t1.csv"));
        CHECK(std::filesystem::exists(g_dir / "state_t2.csv"));
        CHECK(first_line(slurp("state_t1.csv")) == "x,u1");
    }
    SUBCASE("frechet-check") {
        REQUIRE(run("--config cosine.cfg --out probes.json frechet-check --param alpha1 --point 0") == 0);
        const auto arr = nlohmann::json::parse(slurp("probes.json"));
        REQUIRE(arr.is_array());
        bool has_curvature = false;
        for (const auto& pr : arr) {
            CHECK(pr.contains("label"));
            CHECK(pr.contains("rel_err"));
            if (pr["label"] == "curvature_quotient") {
                has_curvature = true;
                CHECK(std::abs(pr["analytic"].get<double>() - 4.0 * 3.14159265358979323846) < 1e-9);
            }
        }
        CHECK(has_curvature);
    }
    SUBCASE("presets list") { REQUIRE(run("presets list > presets.txt") == 0); }
    SUBCASE("identical config produces byte-identical output") {
        REQUIRE(run("--config cosine.cfg --out d1.csv spectrum --k-max 8") == 0);
        REQUIRE(run("--config cosine.cfg --out d2.csv spectrum --k-max 8") == 0);
        CHECK(slurp("d1.csv") == slurp("d2.csv"));
    }
    SUBCASE("bad config is a clean failure") {
        write_file("bad.cfg", "[params]\ngamma = -1\n");
        CHECK(run("--config bad.cfg spectrum") != 0);
        CHECK(slurp("cli_err.txt").find("gamma >= 0") != std::string::npos);
    }
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-adlab-binary>\n");
        return 2;
    }
    g_adlab = std::filesystem::absolute(argv[1]).string();
    g_dir = std::filesystem::temp_directory_path() / "adlab_cli_test";
    std::filesystem::create_directories(g_dir);

    doctest::Context ctx;
    const int rc = ctx.run();
    std::filesystem::remove_all(g_dir);
    return rc;
}
