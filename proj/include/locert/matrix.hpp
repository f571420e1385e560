#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "locert/errors.hpp"

namespace locert {

using cx = std::complex<double>;

// Dense complex matrix, row-major.  The workhorse value type for every
// operator in the library; invariants (finiteness, size consistency) are
// checked on construction.
class ComplexMatrix {
public:
    ComplexMatrix() : rows_(0), cols_(0) {}
    ComplexMatrix(int rows, int cols);
    ComplexMatrix(int rows, int cols, std::vector<cx> entries);

    static ComplexMatrix identity(int dim);
    static ComplexMatrix zero(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cx &operator()(int r, int c) { return entries_[static_cast<std::size_t>(r) * cols_ + c]; }
    const cx &operator()(int r, int c) const {
        return entries_[static_cast<std::size_t>(r) * cols_ + c];
    }

    const std::vector<cx> &entries() const { return entries_; }
    std::vector<cx> &entries() { return entries_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    ComplexMatrix conj() const;
    cx trace() const;

    // Entrywise max modulus; the norm used by the hermiticity and
    // reconstruction tolerances.
    double max_norm() const;
    double frobenius_norm() const;

    // Throws validation_error on NaN/Inf entries.
    void check_finite() const;

    ComplexMatrix &operator+=(const ComplexMatrix &o);
    ComplexMatrix &operator-=(const ComplexMatrix &o);
    ComplexMatrix &operator*=(cx s);

private:
    int rows_;
    int cols_;
    std::vector<cx> entries_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b);
ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix operator*(cx s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, cx s);

// max |a_ij - b_ij|
double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b);

// Column vector |ψ><ψ| helper used all over the tests and constructions.
ComplexMatrix outer(const std::vector<cx> &psi);

// <ψ| M |ψ>
cx expectation(const ComplexMatrix &m, const std::vector<cx> &psi);

} // namespace locert
