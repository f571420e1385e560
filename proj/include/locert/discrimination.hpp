#pragma once

#include <vector>

#include "locert/linalg.hpp"

namespace locert {

// Minimum-error discrimination instance: PSD, possibly subnormalized states
// with priors absorbed into the traces.
struct DiscriminationInstance {
    std::vector<HermitianOperator> states;
    double total_trace = 0.0;

    explicit DiscriminationInstance(std::vector<HermitianOperator> states_);

    int dim() const { return states.front().dim(); }
    int n() const { return static_cast<int>(states.size()); }
};

struct DiscriminationResult {
    double value = 0.0;                   // primal: sum_i Tr(T_i rho_i)
    std::vector<HermitianOperator> povm;  // optimal measurement found
    HermitianOperator dual_certificate;   // Y >= rho_i for all i; Tr(Y) bounds Dist
    double primal_dual_gap = 0.0;         // Tr(Y) - value, >= 0 up to roundoff
    bool certified = false;               // gap reached the requested tolerance
    int iterations = 0;

    DiscriminationResult() : dual_certificate(HermitianOperator::unchecked(ComplexMatrix(1, 1))) {}
};

// Optimal total success weight max_POVM sum_i Tr(T_i rho_i).  Two states use
// the Helstrom closed form (Tr rho_1 + Tr rho_2 + ||rho_1 - rho_2||_1)/2;
// three or more run a fixed-point iteration seeded by the pretty good
// measurement, certified from above by an explicit dual feasible point.
DiscriminationResult dist(const DiscriminationInstance &inst, double tol = kDefaultDistTol);

// The fixed-point path regardless of n; exposed so the closed form can be
// cross-checked against it.
DiscriminationResult dist_iterative(const DiscriminationInstance &inst,
                                    double tol = kDefaultDistTol,
                                    int max_iters = kMaxDistIters);

struct PgmResult {
    double value = 0.0;
    std::vector<HermitianOperator> povm;
};

// Pretty good measurement T_i = S^{-1/2} rho_i S^{-1/2} with S = sum rho_i
// (pseudo-inverse on the common support; the off-support remainder goes to
// outcome 0).  Always a lower bound on Dist.
PgmResult pgm_lower_bound(const DiscriminationInstance &inst);

struct DualCheck {
    bool feasible = false;
    double max_violation = 0.0; // most negative eigenvalue of any Y - rho_i
};

// Y - rho_i PSD within 1e-8 for all i certifies Tr(Y) >= Dist.
DualCheck check_dual(const DiscriminationInstance &inst, const HermitianOperator &y);

} // namespace locert
