#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_helpers.hpp"

#include "locert/serialization.hpp"

using namespace locert;
using namespace locert::testutil;

TEST_CASE("complex entries serialize as [re, im]") {
    ComplexMatrix m(1, 2);
    m(0, 0) = cx(0.5, -0.25);
    m(0, 1) = cx(0.0, 1.0);
    json j = matrix_to_json(m);
    CHECK(j[0][0][0].get<double>() == 0.5);
    CHECK(j[0][0][1].get<double>() == -0.25);
    CHECK(j[0][1][1].get<double>() == 1.0);
    CHECK(max_abs_diff(matrix_from_json(j), m) == 0.0);
}

TEST_CASE("canonical round trips are byte identical") {
    // serialize -> parse -> serialize must reproduce the bytes
    auto roundtrip = [](const json &j) {
        const std::string once = canonical_dump(j);
        const std::string twice = canonical_dump(json::parse(once));
        CHECK(once == twice);
    };
    roundtrip(game_to_json(chsh()));
    roundtrip(correlation_to_json(pr_box()));
    roundtrip(strategy_to_json(chsh_optimal_strategy()));

    Rng rng(501);
    StrategyShape shape;
    shape.dD = 3;
    roundtrip(strategy_to_json(random_strategy(shape, rng)));
}

TEST_CASE("game json round trip preserves values") {
    Game g = chsh();
    Game g2 = game_from_json(json::parse(canonical_dump(game_to_json(g))));
    CHECK(g2.nA() == 2);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            CHECK(g2.q(a, b) == g.q(a, b));
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) CHECK(g2.H(a, b, x, y) == g.H(a, b, x, y));
        }
}

TEST_CASE("strategy json round trip preserves the achieved correlation") {
    Strategy s = chsh_optimal_strategy();
    Strategy s2 = strategy_from_json(json::parse(canonical_dump(strategy_to_json(s))));
    Correlation c1 = achieved_correlation(s), c2 = achieved_correlation(s2);
    for (std::size_t i = 0; i < c1.raw().size(); ++i)
        CHECK(c1.raw()[i] == c2.raw()[i]); // 17 digits reproduce doubles exactly
}

TEST_CASE("schema violations raise parse errors") {
    CHECK_THROWS_AS(game_from_json(json::parse(R"({"nA": 2})")), parse_error);
    CHECK_THROWS_AS(game_from_json(json::parse(
                        R"({"nA": 2, "nB": 2, "nX": 2, "nY": 2, "q": [[0.5, 0.5]], "H": []})")),
                    parse_error);
    CHECK_THROWS_AS(matrix_from_json(json::parse("[[1.0]]")), parse_error); // not [re, im]
    CHECK_THROWS_AS(instance_from_json(json::parse(R"({"states": []})")), parse_error);
}

TEST_CASE("invalid values raise validation errors") {
    json g = game_to_json(chsh());
    g["q"][0][0] = -0.25;
    CHECK_THROWS_AS(game_from_json(g), validation_error);

    json s = strategy_to_json(chsh_optimal_strategy());
    s["gamma"][0][0][0] = 5.0; // trace blows up
    CHECK_THROWS_AS(strategy_from_json(s), validation_error);
}

TEST_CASE("missing files raise parse errors") {
    CHECK_THROWS_AS(load_game("/nonexistent/game.json"), parse_error);
}

TEST_CASE("report serialization carries every certified quantity") {
    CertificationReport rep = theorem_gap_check(chsh(), chsh_optimal_strategy());
    json j = report_to_json(rep, /*seed=*/42);
    CHECK(j["score"].get<double>() == rep.score);
    CHECK(j["omega_c"].get<double>() == rep.omega_c);
    CHECK(j["c_g"].get<double>() == rep.c_g);
    CHECK(j["epsilon"].get<double>() == rep.epsilon);
    CHECK(j["theorem_bound_holds"].get<bool>() == rep.theorem_bound_holds);
    CHECK(j["guess_bound"].get<double>() == rep.guess_bound);
    CHECK(j["dist_gap_budget"].get<double>() == rep.dist_gap_budget);
    CHECK(j["tol"].get<double>() == rep.tol);
    CHECK(j["seed"].get<std::uint64_t>() == 42);
    CHECK(j["declassical"].is_object());
    CHECK(j["declassical"]["distance"].get<double>() == rep.declassical->distance);
    const std::string text = canonical_dump(j);
    CHECK(canonical_dump(json::parse(text)) == text);
}

TEST_CASE("instance files round trip") {
    Rng rng(503);
    std::vector<HermitianOperator> states = {
        HermitianOperator(hermitize(0.5 * random_density(2, rng).matrix())),
        HermitianOperator(hermitize(0.5 * random_density(2, rng).matrix()))};
    DiscriminationInstance inst(std::move(states));
    DiscriminationInstance inst2 =
        instance_from_json(json::parse(canonical_dump(instance_to_json(inst))));
    CHECK(inst2.n() == 2);
    CHECK(inst2.total_trace == doctest::Approx(inst.total_trace).epsilon(1e-15));
}
