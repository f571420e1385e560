#include "locert/random_instances.hpp"

#include <cmath>

namespace locert {

double Rng::uniform() {
    // 53-bit mantissa draw
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
    // Box-Muller; engine-only so the stream is platform-stable.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::acos(-1.0) * u2);
}

cx Rng::cx_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return cx(re, im);
}

int Rng::uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
}

Rng Rng::for_trial(std::uint64_t seed, std::uint64_t trial) {
    // splitmix-style mix keeps substreams decorrelated.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (trial + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
}

ComplexMatrix random_unitary(int dim, Rng &rng) {
    ComplexMatrix g(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) g(r, c) = rng.cx_gaussian();

    // Modified Gram-Schmidt, two passes per column.
    for (int c = 0; c < dim; ++c) {
        for (int pass = 0; pass < 2; ++pass)
            for (int prev = 0; prev < c; ++prev) {
                cx overlap = 0.0;
                for (int r = 0; r < dim; ++r) overlap += std::conj(g(r, prev)) * g(r, c);
                for (int r = 0; r < dim; ++r) g(r, c) -= overlap * g(r, prev);
            }
        double norm = 0.0;
        for (int r = 0; r < dim; ++r) norm += std::norm(g(r, c));
        norm = std::sqrt(norm);
        for (int r = 0; r < dim; ++r) g(r, c) /= norm;
    }
    return g;
}

DensityOperator random_density(int dim, Rng &rng) {
    ComplexMatrix g(dim, dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) g(r, c) = rng.cx_gaussian();
    ComplexMatrix w = g * g.adjoint();
    w *= cx(1.0 / w.trace().real(), 0.0);
    return DensityOperator::unchecked(hermitize(w));
}

DensityOperator random_pure_density(int dim, Rng &rng) {
    std::vector<cx> psi(dim);
    double norm = 0.0;
    for (cx &v : psi) {
        v = rng.cx_gaussian();
        norm += std::norm(v);
    }
    norm = std::sqrt(norm);
    for (cx &v : psi) v /= norm;
    return DensityOperator::unchecked(outer(psi));
}

std::vector<HermitianOperator> random_projective_measurement(int dim, int n_outcomes, Rng &rng) {
    std::vector<int> assign(dim);
    for (int i = 0; i < dim; ++i) assign[i] = rng.uniform_int(0, n_outcomes - 1);
    ComplexMatrix u = random_unitary(dim, rng);

    std::vector<HermitianOperator> out;
    out.reserve(n_outcomes);
    for (int o = 0; o < n_outcomes; ++o) {
        ComplexMatrix p(dim, dim);
        for (int i = 0; i < dim; ++i)
            if (assign[i] == o)
                for (int r = 0; r < dim; ++r)
                    for (int c = 0; c < dim; ++c) p(r, c) += u(r, i) * std::conj(u(c, i));
        out.push_back(HermitianOperator::unchecked(hermitize(p)));
    }
    return out;
}

std::vector<HermitianOperator> random_povm(int dim, int n_outcomes, Rng &rng) {
    std::vector<ComplexMatrix> pieces;
    pieces.reserve(n_outcomes);
    ComplexMatrix total(dim, dim);
    for (int o = 0; o < n_outcomes; ++o) {
        ComplexMatrix g(dim, dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) g(r, c) = rng.cx_gaussian();
        ComplexMatrix w = g * g.adjoint();
        total += w;
        pieces.push_back(std::move(w));
    }
    // T^{-1/2} A_i T^{-1/2} sums to the identity on the full space.
    EigResult eig = herm_eig(HermitianOperator::unchecked(hermitize(total)));
    ComplexMatrix root(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            cx acc = 0.0;
            for (int k = 0; k < dim; ++k)
                acc += eig.vectors(i, k) * (1.0 / std::sqrt(eig.values[k])) *
                       std::conj(eig.vectors(j, k));
            root(i, j) = acc;
        }
    std::vector<HermitianOperator> out;
    out.reserve(n_outcomes);
    for (const auto &w : pieces)
        out.push_back(HermitianOperator::unchecked(hermitize(root * w * root)));
    return out;
}

Strategy random_strategy(const StrategyShape &shape, Rng &rng) {
    std::vector<std::vector<HermitianOperator>> alice, bob;
    alice.reserve(shape.nA);
    bob.reserve(shape.nB);
    for (int a = 0; a < shape.nA; ++a)
        alice.push_back(shape.projective_alice
                            ? random_projective_measurement(shape.dD, shape.nX, rng)
                            : random_povm(shape.dD, shape.nX, rng));
    for (int b = 0; b < shape.nB; ++b)
        bob.push_back(shape.projective_bob
                          ? random_projective_measurement(shape.dE, shape.nY, rng)
                          : random_povm(shape.dE, shape.nY, rng));
    DensityOperator gamma = random_density(shape.dD * shape.dE, rng);
    return Strategy(shape.dD, shape.dE, PovmFamily(shape.dD, std::move(alice)),
                    PovmFamily(shape.dE, std::move(bob)), std::move(gamma));
}

Game random_complete_support_game(int nA, int nB, int nX, int nY, Rng &rng) {
    std::vector<double> q(static_cast<std::size_t>(nA) * nB);
    double total = 0.0;
    for (double &v : q) {
        v = rng.uniform();
        total += v;
    }
    const double mix = 0.2; // keep every input pair clearly supported
    const double uni = 1.0 / static_cast<double>(q.size());
    double renorm = 0.0;
    for (double &v : q) {
        v = (1.0 - mix) * (v / total) + mix * uni;
        renorm += v;
    }
    for (double &v : q) v /= renorm;
    // Final exact normalization against accumulated roundoff.
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < q.size(); ++i) sum += q[i];
    q.back() = 1.0 - sum;

    std::vector<double> h(static_cast<std::size_t>(nA) * nB * nX * nY);
    for (double &v : h) v = rng.uniform();
    return Game(nA, nB, nX, nY, std::move(q), std::move(h));
}

} // namespace locert
