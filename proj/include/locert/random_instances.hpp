#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "locert/games.hpp"
#include "locert/linalg.hpp"
#include "locert/strategies.hpp"

namespace locert {

// Deterministic random source: mt19937_64 with a hand-rolled Box-Muller so
// streams are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(); // [0, 1)
    double gaussian();
    cx cx_gaussian();
    int uniform_int(int lo, int hi); // inclusive bounds

    // Stable per-trial substream.
    static Rng for_trial(std::uint64_t seed, std::uint64_t trial);

private:
    std::mt19937_64 engine_;
};

// Haar-ish unitary: complex Ginibre matrix orthonormalized column by column.
ComplexMatrix random_unitary(int dim, Rng &rng);

// Normalized Wishart G G^dag / Tr, full rank almost surely.
DensityOperator random_density(int dim, Rng &rng);

// Pure-state density |psi><psi| with Gaussian amplitudes.
DensityOperator random_pure_density(int dim, Rng &rng);

// Coordinate projectors grouped by a random outcome assignment, conjugated
// by a random unitary.  Elements may be zero when an outcome draws no
// coordinates.
std::vector<HermitianOperator> random_projective_measurement(int dim, int n_outcomes, Rng &rng);

// Full-rank POVM T^{-1/2} A_i T^{-1/2} from Wishart pieces A_i.
std::vector<HermitianOperator> random_povm(int dim, int n_outcomes, Rng &rng);

struct StrategyShape {
    int nA = 2, nB = 2, nX = 2, nY = 2;
    int dD = 2, dE = 2;
    bool projective_alice = false;
    bool projective_bob = false;
};

Strategy random_strategy(const StrategyShape &shape, Rng &rng);

// Complete-support game: q mixed with the uniform distribution so every input
// pair keeps mass, H uniform in [0,1].
Game random_complete_support_game(int nA, int nB, int nX, int nY, Rng &rng);

} // namespace locert
