#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "bgk/config.hpp"

using namespace bgk;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    fs::path p = fs::temp_directory_path() / "bgk_cli_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& body) {
    std::ofstream out(p, std::ios::binary);
    out << body;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + BGK_CLI_PATH + "\" " + args;
    const int st = std::system(cmd.c_str());
    if (st == -1 || !WIFEXITED(st)) return -1;
    return WEXITSTATUS(st);
}

}  // namespace

TEST_CASE("frequency lists parse plain values and ranges") {
    CHECK(parse_double_list("1,2.5,-3") == std::vector<double>{1.0, 2.5, -3.0});
    CHECK(parse_double_list("0:2:0.5") ==
          std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
    CHECK(parse_double_list("1,2:4:1,7") ==
          std::vector<double>{1.0, 2.0, 3.0, 4.0, 7.0});
    CHECK(parse_double_list(" 1 , 2 ") == std::vector<double>{1.0, 2.0});
    CHECK(parse_double_list("1,2,") == std::vector<double>{1.0, 2.0});
    CHECK(parse_double_list("").empty());
    CHECK(parse_double_list("3") == std::vector<double>{3.0});

    REQUIRE_THROWS_AS(parse_double_list("1:2"), config_error);
    REQUIRE_THROWS_AS(parse_double_list("2:1:0.5"), config_error);
    REQUIRE_THROWS_AS(parse_double_list("1:2:0"), config_error);
    REQUIRE_THROWS_AS(parse_double_list("0:1000000:0.001"), config_error);
    REQUIRE_THROWS_AS(parse_double_list("abc"), config_error);
    REQUIRE_THROWS_AS(parse_double_list("1.5x"), config_error);
}

TEST_CASE("method names parse") {
    CHECK(parse_method("spectral") == Method::spectral);
    CHECK(parse_method("direct") == Method::direct);
    CHECK(parse_method("both") == Method::both);
    REQUIRE_THROWS_AS(parse_method("euler"), config_error);
}

TEST_CASE("config defaults") {
    RunConfig c;
    CHECK(c.grid_l == 8.0);
    CHECK(c.grid_n == 4096);
    CHECK(c.xi_list.empty());
    CHECK(c.times.empty());
    CHECK(c.dt == 0.01);
    CHECK(c.method == Method::both);
    CHECK(c.xi0 == 1.0);
    CHECK(c.out_dir == "out");
    CHECK(c.format == "csv");
    CHECK(c.seed == 12345);
    CHECK(c.experimental_resonance == false);
}

TEST_CASE("config keys validate their values") {
    RunConfig c;
    apply_key(c, "grid_l", "12.5");
    CHECK(c.grid_l == 12.5);
    apply_key(c, "grid_n", "8192");
    CHECK(c.grid_n == 8192);
    apply_key(c, "grid_n", "4194304");  // largest accepted
    CHECK(c.grid_n == 4194304);
    apply_key(c, "xi", "0.5,1.0");
    CHECK(c.xi_list == std::vector<double>{0.5, 1.0});
    apply_key(c, "times", "0:1:0.5");
    CHECK(c.times == std::vector<double>{0.0, 0.5, 1.0});
    apply_key(c, "dt", "0.005");
    CHECK(c.dt == 0.005);
    apply_key(c, "method", "direct");
    CHECK(c.method == Method::direct);
    apply_key(c, "xi0", "0.7");
    CHECK(c.xi0 == 0.7);
    apply_key(c, "out", "results");
    CHECK(c.out_dir == "results");
    apply_key(c, "format", "json");
    CHECK(c.format == "json");
    apply_key(c, "seed", "42");
    CHECK(c.seed == 42);
    for (const char* v : {"1", "true", "yes", "on"}) {
        apply_key(c, "experimental_resonance", v);
        CHECK(c.experimental_resonance);
    }
    for (const char* v : {"0", "false", "no", "off"}) {
        apply_key(c, "experimental_resonance", v);
        CHECK_FALSE(c.experimental_resonance);
    }

    REQUIRE_THROWS_AS(apply_key(c, "grid_l", "0"), config_error);
    REQUIRE_THROWS_AS(apply_key(c, "grid_l", "-4"), config_error);
    REQUIRE_THROWS_AS(apply_key(c, "grid_n", "101"), config_error);
    REQUIRE_THROWS_AS(apply_key(c, "grid_n", "4"), config_error);
    REQUIRE_THROWS_AS(apply_key(c, "grid_n", "4194306"), config_error);
    REQUIRE_THROWS_AS(apply_key(c, "dt", "0"), config_error);
    REQUIRE_THROWS_AS(apply_key(c, "format", "xml"), config_error);
    REQUIRE_THROWS_AS(apply_key(c, "seed", "abc"), config_error);
    REQUIRE_THROWS_AS(apply_key(c, "experimental_resonance", "maybe"), config_error);
    REQUIRE_THROWS_AS(apply_key(c, "grid_m", "1"), config_error);
}

TEST_CASE("config files load with comments and line diagnostics") {
    const fs::path dir = scratch_dir("config_files");

    const fs::path good = dir / "good.cfg";
    write_file(good,
               "# sweep setup\n"
               "grid_n = 8192\n"
               "xi = 0.5, 1.0   # two frequencies\n"
               "\n"
               "method = spectral\n"
               "experimental_resonance = on\n");
    RunConfig c = load_config_file(good.string());
    CHECK(c.grid_n == 8192);
    CHECK(c.xi_list == std::vector<double>{0.5, 1.0});
    CHECK(c.method == Method::spectral);
    CHECK(c.experimental_resonance);
    CHECK(c.dt == 0.01);      // untouched keys keep their defaults
    CHECK(c.seed == 12345);

    RunConfig base;
    base.seed = 7;
    CHECK(load_config_file(good.string(), base).seed == 7);

    const fs::path bad = dir / "bad.cfg";
    write_file(bad, "# fine\ngrid_n 8192\n");
    bool threw = false;
    try {
        load_config_file(bad.string());
    } catch (const config_error& e) {
        threw = true;
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
    CHECK(threw);

    REQUIRE_THROWS_AS(load_config_file((dir / "nope.cfg").string()), config_error);
}

TEST_CASE("command line runs are deterministic") {
    const fs::path dir = scratch_dir("determinism");
    const std::string a = (dir / "a").string(), b = (dir / "b").string();
    REQUIRE(run_cli("dispersion --xi 0:1.5:0.25 --out " + a + " > /dev/null 2>&1") == 0);
    REQUIRE(run_cli("dispersion --xi 0:1.5:0.25 --out " + b + " > /dev/null 2>&1") == 0);
    const std::string ca = read_file(dir / "a" / "dispersion.csv");
    CHECK(ca == read_file(dir / "b" / "dispersion.csv"));
    CHECK(!ca.empty());
    CHECK(ca.front() == '#');
    CHECK(ca.find("xi,lambda_star,omega_prime") != std::string::npos);
}

TEST_CASE("json output carries the schema and the config echo") {
    const fs::path dir = scratch_dir("json_out");
    REQUIRE(run_cli("dispersion --xi 0.5 --format json --out " + dir.string() +
                    " > /dev/null 2>&1") == 0);
    const std::string j = read_file(dir / "dispersion.json");
    CHECK(j.find("\"config\"") != std::string::npos);
    CHECK(j.find("\"columns\"") != std::string::npos);
    CHECK(j.find("\"rows\"") != std::string::npos);
    CHECK(j.find("\"seed\": 12345") != std::string::npos);
    CHECK(j.find("\"format\": \"json\"") != std::string::npos);
}

TEST_CASE("configuration errors exit with code 2") {
    const fs::path dir = scratch_dir("exit2");
    const fs::path bad = dir / "bad.cfg";
    write_file(bad, "grid_m = 4\n");
    CHECK(run_cli("--config " + bad.string() + " dispersion > /dev/null 2>&1") == 2);
    CHECK(run_cli("dispersion --grid-n 101 > /dev/null 2>&1") == 2);
    CHECK(run_cli("--config " + (dir / "nope.cfg").string() +
                  " dispersion > /dev/null 2>&1") == 2);
    CHECK(run_cli("bogus > /dev/null 2>&1") == 2);
}

TEST_CASE("resonant frequencies are refused with exit code 3") {
    const fs::path dir = scratch_dir("exit3");
    CHECK(run_cli("evolve --grid-n 512 --xi 1.7724538509 --out " + dir.string() +
                  " > /dev/null 2>&1") == 3);
}

TEST_CASE("out-of-tolerance runs exit with code 4") {
    const fs::path dir = scratch_dir("exit4");
    CHECK(run_cli("parseval --grid-n 256 --out " + dir.string() +
                  " > /dev/null 2>&1") == 4);
    // the report is still written for inspection
    CHECK(fs::exists(dir / "parseval.csv"));
}

TEST_CASE("diffusion-gap sweep exits cleanly") {
    const fs::path dir = scratch_dir("chapman");
    CHECK(run_cli("chapman-enskog --out " + dir.string() + " > /dev/null 2>&1") == 0);
    CHECK(fs::exists(dir / "chapman_enskog.csv"));
}

TEST_CASE("evolve reports when the fit window is too short") {
    const fs::path dir = scratch_dir("evolve_short");
    const fs::path log = dir / "stdout.txt";
    REQUIRE(run_cli("evolve --xi 0.8 --times 0:2:0.5 --grid-n 1024 --out " +
                    dir.string() + " > " + log.string() + " 2>&1") == 0);
    CHECK(read_file(log).find("decay fit skipped") != std::string::npos);
    const std::string snaps = read_file(dir / "evolve_snapshots.csv");
    CHECK(snaps.find("xi,t,norm,mass_re,mass_im,cross_gap") != std::string::npos);
}

TEST_CASE("selftest reports the documented failures") {
    const fs::path dir = scratch_dir("selftest");
    const fs::path log = dir / "stdout.txt";
    CHECK(run_cli("selftest --out " + dir.string() + " > " + log.string() +
                  " 2>&1") == 4);
    const std::string out = read_file(log);
    CHECK(out.find("11 of 13 criteria passed") != std::string::npos);
    CHECK(fs::exists(dir / "selftest.csv"));
}
