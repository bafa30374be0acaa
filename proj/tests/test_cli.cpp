#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "crgeo/cli.hpp"

using namespace crgeo;

namespace {

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

CliRun run(const std::vector<std::string>& args) {
    std::ostringstream o, e;
    CliRun r;
    r.code = run_cli(args, o, e);
    r.out = o.str();
    r.err = e.str();
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

std::string drop_timing_lines(const std::string& text) {
    std::istringstream in(text);
    std::string line, kept;
    while (std::getline(in, line))
        if (line.find("\"elapsed_ms\"") == std::string::npos) kept += line + "\n";
    return kept;
}

} // namespace

TEST_CASE("exit codes follow the 0/1/2 contract") {
    // 0: emitted example validates.
    auto emit = run({"example", "para_sasakian", "--out", "/tmp/crgeo_cli_psas.mfd"});
    CHECK(emit.code == 0);
    auto ok = run({"validate", "/tmp/crgeo_cli_psas.mfd"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("result: PASS") != std::string::npos);

    // 1: a perturbed field breaks an axiom but the file still parses.
    std::string text = slurp("/tmp/crgeo_cli_psas.mfd");
    const auto at = text.find("psi 0 0 = 1");
    REQUIRE(at != std::string::npos);
    text.replace(at, std::string("psi 0 0 = 1").size(), "psi 0 0 = 1.01");
    spit("/tmp/crgeo_cli_psas_bad.mfd", text);
    auto bad = run({"validate", "/tmp/crgeo_cli_psas_bad.mfd"});
    CHECK(bad.code == 1);
    CHECK(bad.out.find("result: FAIL") != std::string::npos);
    CHECK(bad.out.find("[fail]") != std::string::npos);

    // 2: unreadable input, malformed input, bad arguments.
    CHECK(run({"validate", "/tmp/does-not-exist.mfd"}).code == 2);
    spit("/tmp/crgeo_cli_malformed.mfd", "kind apcm\ndimension 3\ncoords x y z\npsi 0 5 = 1\n");
    auto mal = run({"validate", "/tmp/crgeo_cli_malformed.mfd"});
    CHECK(mal.code == 2);
    CHECK(mal.err.find("line") != std::string::npos);
    CHECK(run({"wibble"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"identities", "--suite", "nonsense", "/tmp/crgeo_cli_psas.mfd"}).code == 2);
    CHECK(run({"example", "kappa_mu", "--mu", "3"}).code == 2);
    CHECK(run({"example", "para_sasakian", "--dim", "5"}).code == 2);
    CHECK(run({"example", "heisenberg", "--n", "2", "--a", "1,2;3,4"}).code == 2);
    CHECK(run({"example", "heisenberg", "--n", "2", "--a", "1,zzz;0,1"}).code == 2);
    CHECK(run({"example", "nosuch"}).code == 2);

    // --help prints usage and succeeds.
    auto help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("validate") != std::string::npos);
    CHECK(help.out.find("example") != std::string::npos);
}

TEST_CASE("fixed seed gives byte-identical JSON reports apart from timings") {
    REQUIRE(run({"example", "kappa_mu", "--out", "/tmp/crgeo_cli_kmu.mfd"}).code == 0);
    auto a = run({"identities", "--suite", "all", "/tmp/crgeo_cli_kmu.mfd", "--json",
                  "/tmp/crgeo_cli_r1.json"});
    auto b = run({"identities", "--suite", "all", "/tmp/crgeo_cli_kmu.mfd", "--json",
                  "/tmp/crgeo_cli_r2.json"});
    CHECK(a.code == 0);
    CHECK(b.code == 0);
    const std::string j1 = slurp("/tmp/crgeo_cli_r1.json");
    const std::string j2 = slurp("/tmp/crgeo_cli_r2.json");
    CHECK(j1 != j2);  // the timing differs...
    CHECK(drop_timing_lines(j1) == drop_timing_lines(j2));  // ...and only the timing

    const nlohmann::json j = nlohmann::json::parse(j1);
    CHECK(j["version"] == "0.1.0");
    CHECK(j["seed"] == 42);
    CHECK(j["points"] == 100);
    CHECK(j["all_passed"] == true);
    CHECK(j["command"] == "identities --suite all");
    CHECK(j["input_hash"].get<std::string>().size() == 16);
    CHECK(j["rows"].is_array());
    CHECK(j["rows"].size() > 20);
    for (const auto& row : j["rows"]) {
        CHECK(row.contains("id"));
        CHECK(row.contains("identity"));
        CHECK(!row["identity"].get<std::string>().empty());
        CHECK(row.contains("verdict"));
    }

    // A different seed still passes but hashes the same input.
    auto c = run({"identities", "--suite", "all", "/tmp/crgeo_cli_kmu.mfd", "--seed", "7",
                  "--points", "20", "--json", "/tmp/crgeo_cli_r3.json"});
    CHECK(c.code == 0);
    const nlohmann::json j3 = nlohmann::json::parse(slurp("/tmp/crgeo_cli_r3.json"));
    CHECK(j3["seed"] == 7);
    CHECK(j3["points"] == 20);
    CHECK(j3["input_hash"] == j["input_hash"]);
}

TEST_CASE("example emission is identical on stdout and via --out") {
    auto piped = run({"example", "heisenberg", "--n", "2", "--a", "1,0;0,-1"});
    CHECK(piped.code == 0);
    REQUIRE(run({"example", "heisenberg", "--n", "2", "--a", "1,0;0,-1", "--out",
                 "/tmp/crgeo_cli_h2.mfd"})
                .code == 0);
    CHECK(piped.out == slurp("/tmp/crgeo_cli_h2.mfd"));

    // The emitted file round-trips through classification with the documented
    // signature and rank.
    auto cls = run({"classify", "/tmp/crgeo_cli_h2.mfd"});
    CHECK(cls.code == 0);
    CHECK(cls.out.find("levi_signature = (2,2,0)") != std::string::npos);
    CHECK(cls.out.find("rank = 5") != std::string::npos);

    // Default matrix is the identity.
    auto def = run({"example", "heisenberg", "--n", "1"});
    auto expl = run({"example", "heisenberg", "--n", "1", "--a", "1"});
    CHECK(def.code == 0);
    CHECK(def.out == expl.out);
}

TEST_CASE("self-certified emissions carry certify lines that recheck downstream") {
    REQUIRE(run({"example", "para_sasakian", "--out", "/tmp/crgeo_cli_psas2.mfd"}).code == 0);
    const std::string text = slurp("/tmp/crgeo_cli_psas2.mfd");
    CHECK(text.find("certify residual.dtau_minus_Psi") != std::string::npos);
    CHECK(text.find("certify residual.K1") != std::string::npos);

    REQUIRE(run({"example", "kappa_mu", "--out", "/tmp/crgeo_cli_kmu2.mfd"}).code == 0);
    const std::string ktext = slurp("/tmp/crgeo_cli_kmu2.mfd");
    CHECK(ktext.find("certify kappa -1") != std::string::npos);
    CHECK(ktext.find("certify mu 2") != std::string::npos);
    CHECK(ktext.find("certify residual.curvature") != std::string::npos);

    // The bileg subcommand recomputes and confirms the certified values.
    auto bl = run({"bileg", "/tmp/crgeo_cli_kmu2.mfd"});
    CHECK(bl.code == 0);
    CHECK(bl.out.find("certify.kappa") != std::string::npos);
    CHECK(bl.out.find("certify.mu") != std::string::npos);
    CHECK(bl.out.find("certify.residual.curvature") != std::string::npos);
    CHECK(bl.out.find("result: PASS") != std::string::npos);

    // A suite that never computes kappa reports the certification as n/a,
    // not as a failure.
    auto gen = run({"identities", "--suite", "general", "/tmp/crgeo_cli_kmu2.mfd"});
    CHECK(gen.code == 0);
    CHECK(gen.out.find("does not compute 'kappa'") != std::string::npos);
}

TEST_CASE("non-contact input gates the bileg suite but errors the bileg subcommand") {
    REQUIRE(run({"example", "para_kenmotsu", "--out", "/tmp/crgeo_cli_pkenm.mfd"}).code == 0);

    auto suite = run({"identities", "--suite", "bileg", "/tmp/crgeo_cli_pkenm.mfd"});
    CHECK(suite.code == 0);
    CHECK(suite.out.find("[n/a ] reeb.gate") != std::string::npos);
    CHECK(suite.out.find("not a contact form") != std::string::npos);

    auto bare = run({"bileg", "/tmp/crgeo_cli_pkenm.mfd"});
    CHECK(bare.code == 2);
    CHECK(bare.err.find("Reeb field undefined") != std::string::npos);

    // The bileg machinery needs a paracontact-kind structure altogether.
    REQUIRE(run({"example", "heisenberg", "--out", "/tmp/crgeo_cli_h1.mfd"}).code == 0);
    auto acm = run({"bileg", "/tmp/crgeo_cli_h1.mfd"});
    CHECK(acm.code == 2);
    auto acm_suite_r = run({"identities", "--suite", "bileg", "/tmp/crgeo_cli_h1.mfd"});
    CHECK(acm_suite_r.code == 0);
    CHECK(acm_suite_r.out.find("bileg.gate") != std::string::npos);
}

TEST_CASE("file sampling blocks set defaults and flags override them") {
    REQUIRE(run({"example", "alpha_sasakian", "--n", "1", "--alpha", "1", "--seed", "11",
                 "--points", "33", "--out", "/tmp/crgeo_cli_alpha.mfd"})
                .code == 0);
    const std::string text = slurp("/tmp/crgeo_cli_alpha.mfd");
    CHECK(text.find("seed 11") != std::string::npos);
    CHECK(text.find("points 33") != std::string::npos);

    auto file_defaults =
        run({"validate", "/tmp/crgeo_cli_alpha.mfd", "--json", "/tmp/crgeo_cli_a1.json"});
    CHECK(file_defaults.code == 0);
    const nlohmann::json j1 = nlohmann::json::parse(slurp("/tmp/crgeo_cli_a1.json"));
    CHECK(j1["seed"] == 11);
    CHECK(j1["points"] == 33);

    auto overridden = run({"validate", "/tmp/crgeo_cli_alpha.mfd", "--seed", "5", "--json",
                           "/tmp/crgeo_cli_a2.json"});
    CHECK(overridden.code == 0);
    const nlohmann::json j2 = nlohmann::json::parse(slurp("/tmp/crgeo_cli_a2.json"));
    CHECK(j2["seed"] == 5);
    CHECK(j2["points"] == 33);
}

TEST_CASE("every subcommand runs each shipped sample file it applies to") {
    for (const char* file : {"data/heisenberg_n1_a1.mfd", "data/alpha_sasakian_1.mfd",
                             "data/para_sasakian_dim3.mfd"}) {
        CAPTURE(file);
        CHECK(run({"validate", file}).code == 0);
        CHECK(run({"classify", file}).code == 0);
        CHECK(run({"identities", "--suite", "all", file}).code == 0);
        CHECK(run({"connection", file}).code == 0);
    }
    CHECK(run({"bileg", "data/para_sasakian_dim3.mfd"}).code == 0);

    // The alpha = 0 variant is the cosymplectic degeneration and still passes.
    auto cosym = run({"example", "alpha_sasakian", "--n", "1", "--alpha", "0", "--out",
                      "/tmp/crgeo_cli_cosym.mfd"});
    CHECK(cosym.code == 0);
    auto cls = run({"classify", "/tmp/crgeo_cli_cosym.mfd"});
    CHECK(cls.code == 0);
    CHECK(cls.out.find("cosymplectic") != std::string::npos);
}
