#pragma once

#include <vector>

#include "locert/config.hpp"
#include "locert/matrix.hpp"

namespace locert {

// Square matrix certified Hermitian within kHermitianTol at construction.
class HermitianOperator {
public:
    explicit HermitianOperator(ComplexMatrix m);

    // Skips the hermiticity check; for internal constructions that are
    // Hermitian by algebra (sums of E M E^dag terms and the like).
    static HermitianOperator unchecked(ComplexMatrix m);

    int dim() const { return matrix_.rows(); }
    const ComplexMatrix &matrix() const { return matrix_; }

private:
    friend class DensityOperator;
    HermitianOperator() = default;
    ComplexMatrix matrix_;
};

// Hermitian, PSD within kPsdTol, unit trace within kTraceTol.
class DensityOperator {
public:
    explicit DensityOperator(HermitianOperator op);
    explicit DensityOperator(ComplexMatrix m) : DensityOperator(HermitianOperator(std::move(m))) {}

    // Trusts PSD/trace; for states produced by operations that preserve
    // both exactly (tensor of densities, unitary conjugation, ...).
    static DensityOperator unchecked(ComplexMatrix m);

    int dim() const { return op_.dim(); }
    const HermitianOperator &op() const { return op_; }
    const ComplexMatrix &matrix() const { return op_.matrix(); }

private:
    DensityOperator() = default;
    HermitianOperator op_;
};

// Kronecker product, row-major convention: joint index i = i_a * dim_b + i_b.
// Throws sizing_error if the product dimension exceeds max_dim.
ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b,
                     int max_dim = kDefaultMaxDim);

// Tensor of a list, left to right.
ComplexMatrix tensor_all(const std::vector<ComplexMatrix> &factors,
                         int max_dim = kDefaultMaxDim);

// Partial trace of a square matrix over the factors NOT listed in `keep`.
// `dims` are the tensor factor dimensions (product must equal m's dimension);
// `keep` holds factor indices, any order, duplicates rejected.  Kept factors
// stay in their original relative order.
ComplexMatrix partial_trace(const ComplexMatrix &m, const std::vector<int> &dims,
                            const std::vector<int> &keep);

// Reorders tensor factors: position i of the result carries original factor
// perm[i].  Inverse of itself when perm is an involution.
ComplexMatrix permute_factors(const ComplexMatrix &m, const std::vector<int> &dims,
                              const std::vector<int> &perm);

struct EigResult {
    std::vector<double> values; // ascending
    ComplexMatrix vectors;      // unitary; column j pairs with values[j]
    int sweeps = 0;
};

// Spectral decomposition of a Hermitian operator via cyclic complex Jacobi
// rotations.  Reconstruction V diag(values) V^dag matches the input within
// kEigTol; throws numerical_error (with the residual) past max_sweeps.
EigResult herm_eig(const HermitianOperator &h, int max_sweeps = kMaxJacobiSweeps);

// Unique PSD square root.  Eigenvalues in [-kPsdTol, 0) are clamped to zero;
// anything below -kPsdTol throws validation_error.
HermitianOperator psd_sqrt(const HermitianOperator &p);

// Sum of |eigenvalue| — the Schatten 1-norm restricted to Hermitian inputs,
// which is all the certification bounds ever need.
double trace_norm(const HermitianOperator &h);

// Smallest eigenvalue, used by the PSD checks.
double min_eigenvalue(const HermitianOperator &h);

// (m + m^dag)/2, for re-hermitizing algebraically Hermitian results.
ComplexMatrix hermitize(const ComplexMatrix &m);

} // namespace locert
