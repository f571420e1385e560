#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "locert/certify.hpp"
#include "locert/random_instances.hpp"

namespace locert {

enum class SweepCheck { disturbance, declassical, theorem };

SweepCheck sweep_check_from_name(const std::string &name);
std::string sweep_check_name(SweepCheck c);

struct SweepOptions {
    SweepCheck check = SweepCheck::disturbance;
    int trials = 100;
    std::uint64_t seed = 1;
    int dim_lo = 2;       // per-factor Hilbert space dimensions
    int dim_hi = 4;
    double check_tol = 1e-6;   // slack added to every right-hand side
    double solver_tol = kDefaultDistTol;
    double rhs_scale = 1.0;    // self-test knob: scales every right-hand side
    int max_dim = kDefaultMaxDim;
};

struct SweepFailure {
    std::uint64_t trial = 0;
    std::string check_name;
    double lhs = 0.0;
    double rhs = 0.0;
    nlohmann::json instance;
};

struct SweepResult {
    int trials = 0;
    int failures = 0;
    double worst_margin = 0.0; // min over trials/checks of rhs + tol - lhs
    std::string worst_check;
    std::uint64_t worst_trial = 0;
    std::vector<SweepFailure> failure_examples; // first few failures, serialized
};

// Seeded randomized verification of one family of certified inequalities.
// Deterministic for a fixed seed; rhs_scale < 1 is the mutation self-test
// hook that must surface counterexamples.
SweepResult run_sweep(const SweepOptions &opts);

} // namespace locert
