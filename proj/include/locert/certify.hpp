#pragma once

#include <optional>
#include <vector>

#include "locert/discrimination.hpp"
#include "locert/games.hpp"
#include "locert/strategies.hpp"

namespace locert {

// Game constant governing the gap-to-randomness tradeoff:
// (3/2) sqrt( sum_ab q(b)^2 / q(a,b) ).  Requires complete support.
double c_g(const Game &g);

struct GuessingAnalysis {
    double epsilon = 0.0;                // 1 - sum_ab q(a,b) sum_y Dist{rho_ab^xy | x}
    std::vector<double> per_input_delta; // [a][b]: 1 - sum_y Dist{...}
    double dist_gap_budget = 0.0;        // summed solver certification gaps
    bool all_certified = true;

    double delta(int a, int b, int nB) const { return per_input_delta[a * nB + b]; }
};

// Bob's post-measurement inability to guess Alice's outcome, weighted by the
// game's input distribution.
GuessingAnalysis guessing_epsilon(const Game &g, const Strategy &s,
                                  double tol = kDefaultDistTol);

// Uniform-average variant (the quantity driving the declassicalization
// distance bound).
GuessingAnalysis uniform_delta_analysis(const Strategy &s, double tol = kDefaultDistTol);
double uniform_delta(const Strategy &s, double tol = kDefaultDistTol);

// sum_i F_i m F_i
ComplexMatrix pinch(const std::vector<HermitianOperator> &f, const ComplexMatrix &m);

struct DisturbanceResult {
    double delta = 0.0;       // 1 - Dist{Tr_A[(F_i (x) I) Lambda]}
    double disturbance = 0.0; // || sum_i F_i Lambda^A F_i - Lambda^A ||_1
    double bound = 0.0;       // 2 sqrt(delta') + delta' with the solver gap folded in
    double dist_gap = 0.0;
    bool bound_holds = false;
};

// A projective measurement whose outcome is predictable from the other
// subsystem barely disturbs the reduced state.  `f` must be projective on
// the first factor of lambda (dimension dA).
DisturbanceResult measurement_disturbance(const DensityOperator &lambda, int dA, int dB,
                                          const std::vector<HermitianOperator> &f,
                                          double tol = 1e-6);

struct DeclassicalizeResult {
    Correlation pbar;          // classical correlation read off the copied registers
    double distance = 0.0;     // (1/nA nB) sum_abxy |p - pbar|
    double bound = 0.0;        // sqrt(3 delta') * nA
    double delta = 0.0;
    double dist_gap_budget = 0.0;
    bool bound_holds = false;
};

// Copies Alice's would-be outcomes for every input into classical registers
// (in the declared input order) and reads the correlation off those
// registers.  Requires a projective Alice family; run projectivize first.
DeclassicalizeResult declassicalize(const Game &g, const Strategy &s,
                                    double tol = kDefaultDistTol,
                                    int max_dim = kDefaultMaxDim);

enum class FgMode { theorem, literal };

// Upper bound on Bob's probability of guessing Alice's output from a score w:
// 1 - ((w - omega_c)/C_G)^2 above the classical value, 1 otherwise.  The
// literal mode divides by C_G instead of C_G^2.
double guess_bound(const Game &g, double w, FgMode mode = FgMode::theorem);
double guess_bound_from(double omega_c, double cg, double w, FgMode mode = FgMode::theorem);

struct DeclassicalSummary {
    double distance = 0.0;
    double bound = 0.0;
    double delta = 0.0;
    double gap_budget = 0.0;
    bool bound_holds = false;
    double pbar_score = 0.0;
    bool classical_score_holds = false; // pbar scores <= omega_c + 1e-9
};

struct CertificationReport {
    double score = 0.0;
    double omega_c = 0.0;
    double c_g = 0.0;
    double epsilon = 0.0;
    bool theorem_bound_holds = false;
    double guess_bound = 1.0;
    double dist_gap_budget = 0.0;
    bool epsilon_certified = true;
    double tol = kDefaultDistTol;
    FgMode fg_mode = FgMode::theorem;
    std::optional<DeclassicalSummary> declassical;

    bool all_checks_hold() const {
        if (!theorem_bound_holds) return false;
        if (declassical && !(declassical->bound_holds && declassical->classical_score_holds))
            return false;
        return true;
    }
};

struct TheoremCheckOptions {
    double tol = kDefaultDistTol;
    bool run_declassicalize = true; // skipped anyway if dimensions exceed max_dim
    int max_dim = kDefaultMaxDim;
    FgMode fg_mode = FgMode::theorem;
};

// Checks that the achieved score exceeds the classical value by at most
// C_G sqrt(epsilon), with solver gaps folded into the right-hand side, and
// aggregates everything into a report.
CertificationReport theorem_gap_check(const Game &g, const Strategy &s,
                                      const TheoremCheckOptions &opts = {});

} // namespace locert
