#include "locert/matrix.hpp"

#include <cmath>
#include <string>

namespace locert {

ComplexMatrix::ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows <= 0 || cols <= 0)
        throw shape_error("ComplexMatrix: dimensions must be positive, got " +
                          std::to_string(rows) + "x" + std::to_string(cols));
    entries_.assign(static_cast<std::size_t>(rows) * cols, cx(0.0, 0.0));
}

ComplexMatrix::ComplexMatrix(int rows, int cols, std::vector<cx> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows <= 0 || cols <= 0)
        throw shape_error("ComplexMatrix: dimensions must be positive");
    if (entries_.size() != static_cast<std::size_t>(rows) * cols)
        throw shape_error("ComplexMatrix: entry count " + std::to_string(entries_.size()) +
                          " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
    check_finite();
}

ComplexMatrix ComplexMatrix::identity(int dim) {
    ComplexMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::zero(int rows, int cols) { return ComplexMatrix(rows, cols); }

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
}

ComplexMatrix ComplexMatrix::conj() const {
    ComplexMatrix out(rows_, cols_);
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = std::conj(entries_[i]);
    return out;
}

cx ComplexMatrix::trace() const {
    if (!is_square()) throw shape_error("trace: matrix is not square");
    cx t = 0.0;
    for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::max_norm() const {
    double m = 0.0;
    for (const cx &e : entries_) m = std::max(m, std::abs(e));
    return m;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const cx &e : entries_) s += std::norm(e);
    return std::sqrt(s);
}

void ComplexMatrix::check_finite() const {
    for (const cx &e : entries_)
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
            throw validation_error("ComplexMatrix: non-finite entry");
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw shape_error("matrix +: shape mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += o.entries_[i];
    return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw shape_error("matrix -: shape mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= o.entries_[i];
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(cx s) {
    for (cx &e : entries_) e *= s;
    return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols() != b.rows()) throw shape_error("matrix *: inner dimensions differ");
    ComplexMatrix out(a.rows(), b.cols());
    // i-k-j order keeps both reads row-contiguous.
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const cx aik = a(i, k);
            if (aik == cx(0.0, 0.0)) continue;
            for (int j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

ComplexMatrix operator*(cx s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(ComplexMatrix a, cx s) { return a *= s; }

double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw shape_error("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (int r = 0; r < a.rows(); ++r)
        for (int c = 0; c < a.cols(); ++c) m = std::max(m, std::abs(a(r, c) - b(r, c)));
    return m;
}

ComplexMatrix outer(const std::vector<cx> &psi) {
    const int d = static_cast<int>(psi.size());
    ComplexMatrix out(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out(i, j) = psi[i] * std::conj(psi[j]);
    return out;
}

cx expectation(const ComplexMatrix &m, const std::vector<cx> &psi) {
    if (!m.is_square() || m.rows() != static_cast<int>(psi.size()))
        throw shape_error("expectation: dimension mismatch");
    cx acc = 0.0;
    for (int i = 0; i < m.rows(); ++i) {
        cx row = 0.0;
        for (int j = 0; j < m.cols(); ++j) row += m(i, j) * psi[j];
        acc += std::conj(psi[i]) * row;
    }
    return acc;
}

} // namespace locert
