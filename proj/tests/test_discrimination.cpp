#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_helpers.hpp"

#include "locert/discrimination.hpp"

using namespace locert;
using namespace locert::testutil;

namespace {

HermitianOperator hop(ComplexMatrix m) { return HermitianOperator(hermitize(std::move(m))); }

DiscriminationInstance qubit_pair(Rng &rng) {
    const double prior = 0.1 + 0.8 * rng.uniform();
    std::vector<HermitianOperator> states;
    states.push_back(hop(prior * random_density(2, rng).matrix()));
    states.push_back(hop((1.0 - prior) * random_density(2, rng).matrix()));
    return DiscriminationInstance(std::move(states));
}

void check_result_invariants(const DiscriminationInstance &inst,
                             const DiscriminationResult &r) {
    // POVM validity
    ComplexMatrix sum(inst.dim(), inst.dim());
    for (const auto &t : r.povm) {
        CHECK(min_eigenvalue(t) >= -1e-8);
        sum += t.matrix();
    }
    CHECK(max_abs_diff(sum, ComplexMatrix::identity(inst.dim())) <= 1e-8);
    // dual feasibility and gap sanity
    DualCheck dc = check_dual(inst, r.dual_certificate);
    CHECK(dc.feasible);
    CHECK(r.value <= r.dual_certificate.matrix().trace().real() + 1e-12);
    CHECK(r.primal_dual_gap >= -1e-12);
}

} // namespace

TEST_CASE("orthogonal states are perfectly distinguishable") {
    std::vector<HermitianOperator> states = {hop(0.5 * diag({1, 0})), hop(0.5 * diag({0, 1}))};
    DiscriminationInstance inst(std::move(states));
    DiscriminationResult r = dist(inst);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    check_result_invariants(inst, r);
}

TEST_CASE("identical states force a guess by prior") {
    Rng rng(301);
    DensityOperator rho = random_density(3, rng);
    std::vector<HermitianOperator> states = {hop(0.5 * rho.matrix()), hop(0.5 * rho.matrix())};
    DiscriminationInstance inst(std::move(states));
    DiscriminationResult r = dist(inst);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-10));
    check_result_invariants(inst, r);
}

TEST_CASE("Helstrom value for |0> vs |+> at equal priors") {
    std::vector<HermitianOperator> states = {hop(0.5 * diag({1, 0})),
                                             hop(0.5 * plus_projector())};
    DiscriminationInstance inst(std::move(states));
    DiscriminationResult r = dist(inst);
    // (1/2 + 1/2 + sqrt(2)/2)/2: difference has eigenvalues +-sqrt(2)/4
    CHECK(r.value == doctest::Approx(0.5 + std::sqrt(2.0) / 4.0).epsilon(1e-12));
    CHECK(r.primal_dual_gap <= 1e-12);
    check_result_invariants(inst, r);
}

TEST_CASE("closed form agrees with the iterative path on random pairs") {
    Rng rng(307);
    for (int trial = 0; trial < 500; ++trial) {
        DiscriminationInstance inst = qubit_pair(rng);
        DiscriminationResult closed = dist(inst);
        DiscriminationResult iter = dist_iterative(inst, 1e-7);
        CHECK(iter.certified);
        CHECK(std::abs(closed.value - iter.value) <= 1e-6);
        CHECK(iter.primal_dual_gap <= 1e-7 * std::max(1.0, inst.total_trace));
    }
}

TEST_CASE("closed form vs iterative on random qutrit pairs") {
    Rng rng(311);
    for (int trial = 0; trial < 100; ++trial) {
        const double prior = 0.1 + 0.8 * rng.uniform();
        std::vector<HermitianOperator> states = {
            hop(prior * random_density(3, rng).matrix()),
            hop((1.0 - prior) * random_density(3, rng).matrix())};
        DiscriminationInstance inst(std::move(states));
        DiscriminationResult closed = dist(inst);
        DiscriminationResult iter = dist_iterative(inst, 1e-7);
        CHECK(std::abs(closed.value - iter.value) <= 1e-6);
    }
}

TEST_CASE("three-state instances certify to tolerance") {
    Rng rng(313);
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = rng.uniform_int(2, 4);
        const int n = rng.uniform_int(3, 4);
        std::vector<double> priors(n);
        double total = 0.0;
        for (double &p : priors) {
            p = 0.05 + rng.uniform();
            total += p;
        }
        std::vector<HermitianOperator> states;
        for (int i = 0; i < n; ++i)
            states.push_back(hop((priors[i] / total) * random_density(dim, rng).matrix()));
        DiscriminationInstance inst(std::move(states));
        DiscriminationResult r = dist(inst, 1e-9);
        CHECK(r.certified);
        CHECK(r.primal_dual_gap <= 1e-9 * std::max(1.0, inst.total_trace));
        check_result_invariants(inst, r);
        // sandwich: max prior <= dist <= total trace, at solver accuracy
        double max_tr = 0.0;
        for (const auto &s : inst.states)
            max_tr = std::max(max_tr, s.matrix().trace().real());
        CHECK(r.value >= max_tr - 1e-9);
        CHECK(r.value <= inst.total_trace + 1e-9);
    }
}

TEST_CASE("pgm closed cases") {
    // orthogonal pure states: PGM is exact
    std::vector<HermitianOperator> ortho = {hop(0.5 * diag({1, 0})), hop(0.5 * diag({0, 1}))};
    CHECK(pgm_lower_bound(DiscriminationInstance(ortho)).value ==
          doctest::Approx(1.0).epsilon(1e-12));

    // identical states: 1/n
    Rng rng(317);
    DensityOperator rho = random_density(2, rng);
    std::vector<HermitianOperator> same(3, hop((1.0 / 3.0) * rho.matrix()));
    CHECK(pgm_lower_bound(DiscriminationInstance(same)).value ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-10));

    std::vector<HermitianOperator> zeros = {hop(ComplexMatrix(2, 2)), hop(ComplexMatrix(2, 2))};
    CHECK_THROWS_AS(pgm_lower_bound(DiscriminationInstance(zeros)), validation_error);
}

TEST_CASE("pgm lower-bounds dist on random triples") {
    Rng rng(331);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<HermitianOperator> states;
        for (int i = 0; i < 3; ++i)
            states.push_back(hop((1.0 / 3.0) * random_density(2, rng).matrix()));
        DiscriminationInstance inst(std::move(states));
        CHECK(pgm_lower_bound(inst).value <= dist(inst).value + 1e-9);
    }
}

TEST_CASE("check_dual accepts the crude certificate and rejects zero") {
    Rng rng(337);
    std::vector<HermitianOperator> states = {hop(0.4 * random_density(3, rng).matrix()),
                                             hop(0.6 * random_density(3, rng).matrix())};
    DiscriminationInstance inst(std::move(states));

    ComplexMatrix sum = inst.states[0].matrix() + inst.states[1].matrix();
    CHECK(check_dual(inst, hop(sum)).feasible); // y = sum rho_i always works
    DualCheck zero = check_dual(inst, hop(ComplexMatrix(3, 3)));
    CHECK_FALSE(zero.feasible);
    CHECK(zero.max_violation > 0.0);
}

TEST_CASE("dist is invariant under a common unitary conjugation") {
    Rng rng(347);
    for (int trial = 0; trial < 20; ++trial) {
        const int dim = 3;
        std::vector<HermitianOperator> states;
        for (int i = 0; i < 3; ++i)
            states.push_back(hop((1.0 / 3.0) * random_density(dim, rng).matrix()));
        ComplexMatrix u = random_unitary(dim, rng);
        std::vector<HermitianOperator> rotated;
        for (const auto &s : states)
            rotated.push_back(hop(u * s.matrix() * u.adjoint()));
        const double v1 = dist(DiscriminationInstance(states)).value;
        const double v2 = dist(DiscriminationInstance(rotated)).value;
        CHECK(std::abs(v1 - v2) <= 1e-8);
    }
}

TEST_CASE("appending a zero operator leaves dist unchanged") {
    Rng rng(349);
    std::vector<HermitianOperator> states = {hop(0.5 * random_density(2, rng).matrix()),
                                             hop(0.5 * random_density(2, rng).matrix())};
    const double base = dist(DiscriminationInstance(states)).value;
    states.push_back(hop(ComplexMatrix(2, 2)));
    const double padded = dist(DiscriminationInstance(states)).value;
    CHECK(std::abs(base - padded) <= 1e-10);
}

TEST_CASE("single-state instance is trivial") {
    Rng rng(353);
    DiscriminationInstance inst({hop(0.7 * random_density(2, rng).matrix())});
    DiscriminationResult r = dist(inst);
    CHECK(r.value == doctest::Approx(0.7).epsilon(1e-12));
    check_result_invariants(inst, r);
}
