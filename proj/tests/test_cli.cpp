// End-to-end checks of the command-line surface: exit-code contract,
// deterministic byte-identical artifacts, config echo, and the file schema
// round trip.

#include "hierlab/hierarchy/gardner.hpp"
#include "hierlab/poly_io.hpp"

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    std::string cmd = std::string(HIERLAB_BIN) + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path tmpdir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("hierlab_cli_" + tag);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("cli: gen writes deterministic artifacts and valid schema") {
    // identical config (including the out path) must give byte-identical files
    auto d1 = tmpdir("gen1");
    REQUIRE(run("gen --family gardner --n 2 --out " + d1.string()) == 0);
    std::map<int, std::string> first;
    for (int n = 0; n <= 2; ++n) first[n] = slurp(d1 / "gardner" / (std::to_string(n) + ".json"));
    REQUIRE(run("gen --family gardner --n 2 --out " + d1.string()) == 0);
    for (int n = 0; n <= 2; ++n) {
        auto f1 = d1 / "gardner" / (std::to_string(n) + ".json");
        REQUIRE(fs::exists(f1));
        CHECK(slurp(f1) == first[n]);  // byte-identical
    }
    // schema round trip against a freshly built table
    auto j = hierlab::ordered_json::parse(slurp(d1 / "gardner" / "2.json"));
    CHECK(j.at("config").at("command") == "gen");
    CHECK(j.at("convention") == "main-text-half");
    auto lenard = hierlab::hierarchy::lenard_sequence(1);
    auto tab = hierlab::hierarchy::gardner_hamiltonians(2, lenard);
    CHECK(hierlab::poly_from_json(j.at("hamiltonian")) == tab.at(2).hamiltonian);
}

TEST_CASE("cli: exit-code contract") {
    CHECK(run("gen --family nosuch --n 1 --out " + tmpdir("bad").string()) == 2);
    // z at the eigenvalue of -2 sech^2 -> AtEigenvalue -> exit 3
    CHECK(run("scatter --potential sech2:amp=-2 --z 0+1i --grid 512 --out " +
              tmpdir("eig").string()) == 3);
    // absurd dt -> StabilityViolation -> exit 4
    CHECK(run("flow --family gardner --n 2 --dt 1e-2 --t-end 0.1 --initial cos:amp=0.5,k=1 "
              "--out " +
              tmpdir("stab").string()) == 4);
    // injected fault must fail the verify suite with exit 1
    CHECK(run("verify --suite symbolic --inject-fault lenard-h2 --out " +
              tmpdir("inj").string()) == 1);
}

TEST_CASE("cli: fault injection names the Lenard check") {
    auto d = tmpdir("inj2");
    std::string cmd = std::string(HIERLAB_BIN) + " verify --suite symbolic --inject-fault "
                      "lenard-h2 --out " + d.string() + " > " + (d / "log.txt").string() + " 2>&1";
    fs::create_directories(d);
    std::system(cmd.c_str());
    std::string log = slurp(d / "log.txt");
    CHECK(log.find("FAIL lenard/H2") != std::string::npos);
    auto rep = hierlab::ordered_json::parse(slurp(d / "verify_report.json"));
    CHECK(rep.at("failures").get<int>() >= 1);
}

TEST_CASE("cli: scatter emits config echo and record files") {
    auto d = tmpdir("scat");
    REQUIRE(run("scatter --potential gaussian:amp=0.3 --z 0+2i --grid 512 --out " + d.string()) ==
            0);
    std::string csv = slurp(d / "scatter.csv");
    CHECK(csv.rfind("# config:", 0) == 0);
    CHECK(csv.find("\"command\":\"scatter\"") != std::string::npos);
    bool found = false;
    for (const auto& e : fs::directory_iterator(d))
        if (e.path().extension() == ".json") found = true;
    CHECK(found);
}

TEST_CASE("cli: verify symbolic suite passes with at least 40 checks") {
    auto d = tmpdir("ver");
    REQUIRE(run("verify --suite symbolic --out " + d.string()) == 0);
    auto rep = hierlab::ordered_json::parse(slurp(d / "verify_report.json"));
    CHECK(rep.at("total").get<int>() >= 40);
    CHECK(rep.at("failures").get<int>() == 0);
}
