#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"

#include "locert/strategies.hpp"

using namespace locert;
using namespace locert::testutil;

namespace {

const double kPi = std::acos(-1.0);
const double kCos8 = std::cos(kPi / 8.0) * std::cos(kPi / 8.0); // cos^2(pi/8)

Strategy deterministic_strategy() {
    ComplexMatrix p0(2, 2), p1(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    std::vector<std::vector<HermitianOperator>> meas(
        2, {HermitianOperator(p0), HermitianOperator(p1)});
    ComplexMatrix gamma(4, 4);
    gamma(0, 0) = 1.0;
    return Strategy(2, 2, PovmFamily(2, meas), PovmFamily(2, meas),
                    DensityOperator(std::move(gamma)));
}

Strategy coin_flip_alice_strategy() {
    // Alice ignores everything: R_a^x = I/2 on a qubit; product state.
    ComplexMatrix half = 0.5 * ComplexMatrix::identity(2);
    std::vector<std::vector<HermitianOperator>> alice(
        2, {HermitianOperator(half), HermitianOperator(half)});
    ComplexMatrix p0(2, 2), p1(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    std::vector<std::vector<HermitianOperator>> bob(
        2, {HermitianOperator(p0), HermitianOperator(p1)});
    ComplexMatrix gamma(4, 4);
    gamma(0, 0) = 1.0;
    return Strategy(2, 2, PovmFamily(2, std::move(alice)), PovmFamily(2, std::move(bob)),
                    DensityOperator(std::move(gamma)));
}

// Direct evaluation of Eq-style second player states on the full space:
// Tr_D[ sqrt(R (x) S) gamma sqrt(R (x) S) ].  Independent of the optimized
// path inside second_player_states.
ComplexMatrix second_state_oracle(const Strategy &s, int a, int b, int x, int y) {
    ComplexMatrix big =
        psd_sqrt(HermitianOperator(hermitize(tensor(s.alice.element(a, x).matrix(),
                                                    s.bob.element(b, y).matrix()))))
            .matrix();
    ComplexMatrix conj = big * s.gamma.matrix() * big;
    return partial_trace(conj, {s.dD, s.dE}, {1});
}

} // namespace

TEST_CASE("PovmFamily validation and projective flag") {
    ComplexMatrix p0(2, 2), p1(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    PovmFamily proj(2, {{HermitianOperator(p0), HermitianOperator(p1)}});
    CHECK(proj.is_projective());
    CHECK(proj.residuals().completeness <= 1e-12);

    ComplexMatrix half = 0.5 * ComplexMatrix::identity(2);
    PovmFamily coin(2, {{HermitianOperator(half), HermitianOperator(half)}});
    CHECK_FALSE(coin.is_projective());

    // does not sum to identity
    CHECK_THROWS_AS(PovmFamily(2, {{HermitianOperator(p0), HermitianOperator(p0)}}),
                    validation_error);
    // negative element
    CHECK_THROWS_AS(PovmFamily(2, {{HermitianOperator(2.0 * ComplexMatrix::identity(2)),
                                    HermitianOperator(-1.0 * ComplexMatrix::identity(2))}}),
                    validation_error);
}

TEST_CASE("deterministic strategy achieves a deterministic correlation") {
    Correlation c = achieved_correlation(deterministic_strategy());
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y)
                    CHECK(c.p(a, b, x, y) ==
                          doctest::Approx(x == 0 && y == 0 ? 1.0 : 0.0).epsilon(1e-14));
}

TEST_CASE("chsh_optimal_strategy achieves the Tsirelson correlation") {
    Strategy s = chsh_optimal_strategy();
    CHECK(s.alice.is_projective());
    Correlation c = achieved_correlation(s);
    CHECK(is_nonsignaling(c, 1e-9).ok);

    // p(x=y|a,b) = cos^2(pi/8) except on (1,1) where p(x!=y) = cos^2(pi/8)
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            double agree = c.p(a, b, 0, 0) + c.p(a, b, 1, 1);
            if (a == 1 && b == 1)
                CHECK(1.0 - agree == doctest::Approx(kCos8).epsilon(1e-12));
            else
                CHECK(agree == doctest::Approx(kCos8).epsilon(1e-12));
        }
    CHECK(score(chsh(), c) == doctest::Approx(kCos8).epsilon(1e-9));
}

TEST_CASE("uniform-coin Alice yields uniform x") {
    Correlation c = achieved_correlation(coin_flip_alice_strategy());
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int y = 0; y < 2; ++y)
                CHECK(c.p(a, b, 0, y) == doctest::Approx(c.p(a, b, 1, y)).epsilon(1e-12));
}

TEST_CASE("second player states match the full-space oracle") {
    Rng rng(211);
    for (int trial = 0; trial < 8; ++trial) {
        StrategyShape shape;
        shape.dD = rng.uniform_int(2, 3);
        shape.dE = rng.uniform_int(2, 3);
        shape.projective_alice = trial % 2 == 0;
        Strategy s = random_strategy(shape, rng);
        SecondPlayerStates sp = second_player_states(s);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int x = 0; x < 2; ++x)
                    for (int y = 0; y < 2; ++y)
                        CHECK(max_abs_diff(sp.at(a, b, x, y).matrix(),
                                           second_state_oracle(s, a, b, x, y)) <= 1e-9);
    }
}

TEST_CASE("second player states: traces match the correlation") {
    Rng rng(223);
    StrategyShape shape;
    Strategy s = random_strategy(shape, rng);
    Correlation c = achieved_correlation(s);
    SecondPlayerStates sp = second_player_states(s);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            double total = 0.0;
            for (int x = 0; x < 2; ++x) {
                double row = 0.0;
                for (int y = 0; y < 2; ++y) {
                    const double t = sp.at(a, b, x, y).matrix().trace().real();
                    CHECK(t == doctest::Approx(c.p(a, b, x, y)).epsilon(1e-9));
                    total += t;
                    row += t;
                }
                // trace-level consistency with the pre-measurement states
                CHECK(row == doctest::Approx(sp.pre(a, x).matrix().trace().real())
                                 .epsilon(1e-9));
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        }
}

TEST_CASE("second player states are PSD") {
    Rng rng(227);
    StrategyShape shape;
    shape.dE = 3;
    Strategy s = random_strategy(shape, rng);
    SecondPlayerStates sp = second_player_states(s);
    for (const auto &op : sp.rho) CHECK(min_eigenvalue(op) >= -kPsdTol);
    for (const auto &op : sp.rho_pre) CHECK(min_eigenvalue(op) >= -kPsdTol);
}

TEST_CASE("chsh optimal: Bob's rank-1 projectors collapse states proportionally") {
    SecondPlayerStates sp = second_player_states(chsh_optimal_strategy());
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int y = 0; y < 2; ++y) {
                // states across x are proportional: rank of the sum stays 1
                ComplexMatrix sum = sp.at(a, b, 0, y).matrix() + sp.at(a, b, 1, y).matrix();
                EigResult e = herm_eig(HermitianOperator(hermitize(sum)));
                CHECK(e.values[0] <= 1e-9); // only one nonzero eigenvalue
            }
}

TEST_CASE("projectivize leaves projective strategies' correlation intact") {
    Strategy s = chsh_optimal_strategy();
    Strategy t = projectivize(s);
    CHECK(t.alice.is_projective());
    CHECK(t.dD == 2 * 4);
    Correlation before = achieved_correlation(s), after = achieved_correlation(t);
    for (std::size_t i = 0; i < before.raw().size(); ++i)
        CHECK(std::abs(before.raw()[i] - after.raw()[i]) <= 1e-10);
}

TEST_CASE("projectivize dilates a coin-flip POVM faithfully") {
    Strategy s = coin_flip_alice_strategy();
    Strategy t = projectivize(s);
    CHECK(t.alice.is_projective());
    Correlation before = achieved_correlation(s), after = achieved_correlation(t);
    for (std::size_t i = 0; i < before.raw().size(); ++i)
        CHECK(std::abs(before.raw()[i] - after.raw()[i]) <= 1e-8);
}

TEST_CASE("projectivize preserves random POVM strategies") {
    Rng rng(229);
    for (int trial = 0; trial < 6; ++trial) {
        StrategyShape shape;
        shape.nA = rng.uniform_int(2, 3);
        shape.nB = rng.uniform_int(2, 3);
        shape.nX = rng.uniform_int(2, 3);
        shape.nY = rng.uniform_int(2, 3);
        shape.dD = rng.uniform_int(2, 4);
        shape.dE = rng.uniform_int(2, 3);
        Strategy s = random_strategy(shape, rng);
        Strategy t = projectivize(s);
        CHECK(t.alice.is_projective());
        CHECK(t.alice.residuals().completeness <= kPovmTol);
        Correlation before = achieved_correlation(s), after = achieved_correlation(t);
        for (std::size_t i = 0; i < before.raw().size(); ++i)
            CHECK(std::abs(before.raw()[i] - after.raw()[i]) <= 1e-8);
    }
}

TEST_CASE("projectivize respects the dimension budget") {
    Rng rng(233);
    StrategyShape shape;
    shape.dD = 4;
    shape.dE = 4;
    Strategy s = random_strategy(shape, rng);
    CHECK_THROWS_AS(projectivize(s, /*max_dim=*/32), sizing_error);
}

TEST_CASE("strategy-derived correlations are always non-signaling") {
    Rng rng(239);
    for (int trial = 0; trial < 20; ++trial) {
        StrategyShape shape;
        shape.dD = rng.uniform_int(2, 4);
        shape.dE = rng.uniform_int(2, 4);
        shape.projective_alice = trial % 2 == 0;
        Strategy s = random_strategy(shape, rng);
        CHECK(is_nonsignaling(achieved_correlation(s), 1e-9).ok);
    }
}
