#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "locert/serialization.hpp"

// Drives the installed binary through std::system; paths arrive via the
// LOCERT_CLI / LOCERT_FIXTURES environment set by ctest.

using locert::json;

namespace {

std::string cli_path() {
    const char *p = std::getenv("LOCERT_CLI");
    REQUIRE(p != nullptr);
    return p;
}

std::string fixture(const std::string &name) {
    const char *p = std::getenv("LOCERT_FIXTURES");
    REQUIRE(p != nullptr);
    return std::string(p) + "/" + name;
}

struct RunResult {
    int exit_code;
    std::string output;
    std::string err;
};

RunResult run(const std::string &args) {
    const std::string out_file = "/tmp/locert_cli_test_out.txt";
    const std::string err_file = "/tmp/locert_cli_test_err.txt";
    const std::string cmd =
        cli_path() + " " + args + " > " + out_file + " 2> " + err_file;
    const int status = std::system(cmd.c_str());
    std::ifstream in(out_file), err(err_file);
    std::stringstream ss, es;
    ss << in.rdbuf();
    es << err.rdbuf();
    return {WEXITSTATUS(status), ss.str(), es.str()};
}

} // namespace

TEST_CASE("classical-value prints omega_c for CHSH") {
    RunResult r = run("classical-value " + fixture("chsh.json"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("omega_c = 0.75") != std::string::npos);
}

TEST_CASE("classical-value on the constant-one game") {
    json g = locert::game_to_json(locert::chsh());
    for (auto &a : g["H"])
        for (auto &b : a)
            for (auto &x : b)
                for (auto &y : x) y = 1.0;
    locert::write_text_file("/tmp/locert_const_one.json", locert::canonical_dump(g));
    RunResult r = run("classical-value /tmp/locert_const_one.json");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("omega_c = 1") != std::string::npos);
}

TEST_CASE("malformed files exit with code 2") {
    locert::write_text_file("/tmp/locert_broken.json", "{ not json");
    RunResult r = run("classical-value /tmp/locert_broken.json");
    CHECK(r.exit_code == 2);

    locert::write_text_file("/tmp/locert_bad_schema.json", "{\"nA\": 2}");
    CHECK(run("classical-value /tmp/locert_bad_schema.json").exit_code == 2);
}

TEST_CASE("analyze produces a passing canonical report for the optimal strategy") {
    const std::string out = "/tmp/locert_report.json";
    RunResult r = run("analyze " + fixture("chsh.json") + " " + fixture("chsh_opt.json") +
                      " --seed 7 --out " + out);
    CHECK(r.exit_code == 0);
    CHECK(r.err.find("POVM residuals") != std::string::npos); // reported on load

    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    json rep = json::parse(ss.str());
    CHECK(rep["score"].get<double>() == doctest::Approx(0.8535533905932737).epsilon(1e-9));
    CHECK(rep["epsilon"].get<double>() == doctest::Approx(0.14644660940672624).epsilon(1e-4));
    CHECK(rep["c_g"].get<double>() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(rep["theorem_bound_holds"].get<bool>());
    CHECK(rep["all_checks_hold"].get<bool>());
    CHECK(locert::canonical_dump(rep) == ss.str());
}

TEST_CASE("analyze on the classical fixture reports a nonpositive gap") {
    RunResult r = run("analyze " + fixture("chsh.json") + " " + fixture("classical_det.json"));
    CHECK(r.exit_code == 0);
    json rep = json::parse(r.output);
    CHECK(rep["epsilon"].get<double>() <= 1e-9);
    CHECK(rep["score"].get<double>() - rep["omega_c"].get<double>() <= 1e-12);
}

TEST_CASE("mismatched alphabets exit with code 3") {
    // a 3-input Alice game against the binary strategy
    std::vector<double> q(6, 1.0 / 6.0), H(static_cast<std::size_t>(6) * 4, 1.0);
    locert::Game g(3, 2, 2, 2, std::move(q), std::move(H));
    locert::write_text_file("/tmp/locert_mismatch.json",
                            locert::canonical_dump(locert::game_to_json(g)));
    RunResult r = run("analyze /tmp/locert_mismatch.json " + fixture("chsh_opt.json"));
    CHECK(r.exit_code == 3);
}

TEST_CASE("declassicalize emits a valid correlation") {
    const std::string out = "/tmp/locert_pbar.json";
    RunResult r = run("declassicalize " + fixture("chsh.json") + " " +
                      fixture("chsh_opt.json") + " --out " + out);
    CHECK(r.exit_code == 0);
    locert::Correlation pbar = locert::load_correlation(out);
    CHECK(locert::score(locert::chsh(), pbar) <= 0.75 + 1e-9);
}

TEST_CASE("dist command evaluates an instance file") {
    locert::ComplexMatrix zero(2, 2), plus(2, 2);
    zero(0, 0) = 0.5;
    plus(0, 0) = 0.25;
    plus(0, 1) = 0.25;
    plus(1, 0) = 0.25;
    plus(1, 1) = 0.25;
    locert::DiscriminationInstance inst(
        {locert::HermitianOperator(zero), locert::HermitianOperator(plus)});
    locert::write_text_file("/tmp/locert_instance.json",
                            locert::canonical_dump(locert::instance_to_json(inst)));
    RunResult r = run("dist /tmp/locert_instance.json");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("dist = 0.85355339059327") != std::string::npos);
    CHECK(r.output.find("certified = yes") != std::string::npos);
}

TEST_CASE("sweep with zero trials warns and passes vacuously") {
    RunResult r = run("sweep --check disturbance --trials 0 --seed 5");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("0 trials") != std::string::npos);
}

TEST_CASE("small sweeps pass for every check family") {
    CHECK(run("sweep --check disturbance --trials 25 --seed 11").exit_code == 0);
    CHECK(run("sweep --check declassical --trials 10 --seed 11").exit_code == 0);
    CHECK(run("sweep --check theorem --trials 10 --seed 11").exit_code == 0);
}

TEST_CASE("halved right-hand sides exit 1 and serialize counterexamples") {
    const std::string out = "/tmp/locert_ce.json";
    RunResult r = run("sweep --check declassical --trials 30 --seed 13 --rhs-scale 0.5 --out " +
                      out);
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("failures=0") == std::string::npos);
    json ce = locert::load_json_file(out);
    CHECK(ce["check"].get<std::string>() == "declassical");
    CHECK(!ce["failures"].empty());
    // the serialized instance must reload
    CHECK_NOTHROW(locert::strategy_from_json(ce["failures"][0]["instance"]["strategy"]));
}

TEST_CASE("enumeration budget overflow exits 4") {
    const int n = 10;
    std::vector<double> q(static_cast<std::size_t>(n) * n, 1.0 / (n * n));
    std::vector<double> H(static_cast<std::size_t>(n) * n * 16, 1.0);
    locert::Game g(n, n, 4, 4, std::move(q), std::move(H));
    locert::write_text_file("/tmp/locert_huge.json",
                            locert::canonical_dump(locert::game_to_json(g)));
    CHECK(run("classical-value /tmp/locert_huge.json").exit_code == 4);
}

TEST_CASE("bundled fixtures are canonical and usable") {
    for (const std::string name :
         {"chsh.json", "chsh_opt.json", "classical_det.json", "pr_box.json"}) {
        std::ifstream in(fixture(name));
        std::stringstream ss;
        ss << in.rdbuf();
        CHECK(locert::canonical_dump(json::parse(ss.str())) == ss.str());
    }
    locert::Correlation box = locert::load_correlation(fixture("pr_box.json"));
    CHECK(locert::score(locert::chsh(), box) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("analyze honors the literal guess-bound mode") {
    RunResult r = run("analyze " + fixture("chsh.json") + " " + fixture("chsh_opt.json") +
                      " --fg-mode literal");
    CHECK(r.exit_code == 0);
    json rep = json::parse(r.output);
    CHECK(rep["fg_mode"].get<std::string>() == "literal");
    const double w = rep["score"].get<double>(), oc = rep["omega_c"].get<double>();
    CHECK(rep["guess_bound"].get<double>() ==
          doctest::Approx(1.0 - (w - oc) * (w - oc) / 3.0).epsilon(1e-12));
}

TEST_CASE("identical seeds give byte-identical reports") {
    RunResult a = run("analyze " + fixture("chsh.json") + " " + fixture("chsh_opt.json") +
                      " --seed 99");
    RunResult b = run("analyze " + fixture("chsh.json") + " " + fixture("chsh_opt.json") +
                      " --seed 99");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
}
