#pragma once

#include <cstdint>

namespace locert {

// Numerical tolerances shared across the library.  All dense kernels are
// double precision; these windows absorb representation noise without
// masking genuine violations.
constexpr double kHermitianTol = 1e-10; // ||M - M^dag||_max allowed on Hermitian inputs
constexpr double kPsdTol = 1e-9;        // eigenvalue clamp window for PSD checks / square roots
constexpr double kTraceTol = 1e-9;      // |Tr rho - 1| allowed on density operators
constexpr double kEigTol = 1e-9;        // reconstruction residual allowed on eigensolves
constexpr double kPovmTol = 1e-9;       // completeness residual allowed on POVMs
constexpr double kProjectiveTol = 1e-8; // idempotence/orthogonality window for projective flags
constexpr double kDefaultDistTol = 1e-7; // primal-dual gap target for discrimination solves

constexpr int kDefaultMaxDim = 4096;       // cap on any constructed operator dimension
constexpr int kMaxJacobiSweeps = 100;      // cyclic Jacobi sweep cap
constexpr int kMaxDistIters = 5000;        // discrimination fixed-point iteration cap
constexpr std::uint64_t kDefaultEnumerationBudget = 100000000; // deterministic-strategy pairs

} // namespace locert
