#include "locert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace locert {

namespace {

double hermiticity_residual(const ComplexMatrix &m) {
    double worst = 0.0;
    for (int r = 0; r < m.rows(); ++r)
        for (int c = r; c < m.cols(); ++c)
            worst = std::max(worst, std::abs(m(r, c) - std::conj(m(c, r))));
    return worst;
}

// Mixed-radix decode of a flat index against factor dimensions.
void decode_index(int flat, const std::vector<int> &dims, std::vector<int> &out) {
    for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
        out[i] = flat % dims[i];
        flat /= dims[i];
    }
}

} // namespace

HermitianOperator::HermitianOperator(ComplexMatrix m) {
    if (!m.is_square()) throw shape_error("HermitianOperator: matrix is not square");
    const double resid = hermiticity_residual(m);
    if (resid > kHermitianTol)
        throw validation_error("HermitianOperator: hermiticity residual " +
                               std::to_string(resid) + " exceeds tolerance");
    matrix_ = std::move(m);
}

HermitianOperator HermitianOperator::unchecked(ComplexMatrix m) {
    HermitianOperator h;
    h.matrix_ = std::move(m);
    return h;
}

DensityOperator::DensityOperator(HermitianOperator op) {
    const double tr = op.matrix().trace().real();
    if (std::abs(tr - 1.0) > kTraceTol)
        throw validation_error("DensityOperator: trace " + std::to_string(tr) + " is not 1");
    const double lo = min_eigenvalue(op);
    if (lo < -kPsdTol)
        throw validation_error("DensityOperator: eigenvalue " + std::to_string(lo) +
                               " below -psd_tol");
    op_ = std::move(op);
}

DensityOperator DensityOperator::unchecked(ComplexMatrix m) {
    DensityOperator d;
    d.op_ = HermitianOperator::unchecked(std::move(m));
    return d;
}

ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b, int max_dim) {
    const long long prows = static_cast<long long>(a.rows()) * b.rows();
    const long long pcols = static_cast<long long>(a.cols()) * b.cols();
    if (prows > max_dim || pcols > max_dim)
        throw sizing_error("tensor: product dimension " + std::to_string(std::max(prows, pcols)) +
                           " exceeds max_dim " + std::to_string(max_dim));
    ComplexMatrix out(static_cast<int>(prows), static_cast<int>(pcols));
    for (int ia = 0; ia < a.rows(); ++ia)
        for (int ja = 0; ja < a.cols(); ++ja) {
            const cx av = a(ia, ja);
            if (av == cx(0.0, 0.0)) continue;
            for (int ib = 0; ib < b.rows(); ++ib)
                for (int jb = 0; jb < b.cols(); ++jb)
                    out(ia * b.rows() + ib, ja * b.cols() + jb) = av * b(ib, jb);
        }
    return out;
}

ComplexMatrix tensor_all(const std::vector<ComplexMatrix> &factors, int max_dim) {
    if (factors.empty()) throw shape_error("tensor_all: empty factor list");
    ComplexMatrix acc = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) acc = tensor(acc, factors[i], max_dim);
    return acc;
}

ComplexMatrix partial_trace(const ComplexMatrix &m, const std::vector<int> &dims,
                            const std::vector<int> &keep) {
    if (!m.is_square()) throw shape_error("partial_trace: matrix is not square");
    long long total = 1;
    for (int d : dims) {
        if (d <= 0) throw shape_error("partial_trace: factor dimensions must be positive");
        total *= d;
    }
    if (total != m.rows())
        throw shape_error("partial_trace: factor dimensions multiply to " + std::to_string(total) +
                          ", matrix has dimension " + std::to_string(m.rows()));

    const int k = static_cast<int>(dims.size());
    std::vector<bool> kept(k, false);
    for (int idx : keep) {
        if (idx < 0 || idx >= k) throw shape_error("partial_trace: keep index out of range");
        if (kept[idx]) throw shape_error("partial_trace: duplicate keep index");
        kept[idx] = true;
    }

    std::vector<int> keep_sorted, traced;
    std::vector<int> keep_dims, traced_dims;
    for (int i = 0; i < k; ++i) {
        if (kept[i]) {
            keep_sorted.push_back(i);
            keep_dims.push_back(dims[i]);
        } else {
            traced.push_back(i);
            traced_dims.push_back(dims[i]);
        }
    }

    std::vector<long long> stride(k, 1);
    for (int i = k - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

    int keep_total = 1;
    for (int d : keep_dims) keep_total *= d;
    int traced_total = 1;
    for (int d : traced_dims) traced_total *= d;

    ComplexMatrix out(std::max(keep_total, 1), std::max(keep_total, 1));
    std::vector<int> kr(keep_dims.size()), kc(keep_dims.size()), t(traced_dims.size());
    for (int r = 0; r < keep_total; ++r) {
        if (!keep_dims.empty()) decode_index(r, keep_dims, kr);
        for (int c = 0; c < keep_total; ++c) {
            if (!keep_dims.empty()) decode_index(c, keep_dims, kc);
            cx acc = 0.0;
            for (int s = 0; s < traced_total; ++s) {
                if (!traced_dims.empty()) decode_index(s, traced_dims, t);
                long long row = 0, col = 0;
                for (std::size_t i = 0; i < keep_sorted.size(); ++i) {
                    row += kr[i] * stride[keep_sorted[i]];
                    col += kc[i] * stride[keep_sorted[i]];
                }
                for (std::size_t i = 0; i < traced.size(); ++i) {
                    row += t[i] * stride[traced[i]];
                    col += t[i] * stride[traced[i]];
                }
                acc += m(static_cast<int>(row), static_cast<int>(col));
            }
            out(r, c) = acc;
        }
    }
    return out;
}

ComplexMatrix permute_factors(const ComplexMatrix &m, const std::vector<int> &dims,
                              const std::vector<int> &perm) {
    if (!m.is_square()) throw shape_error("permute_factors: matrix is not square");
    const int k = static_cast<int>(dims.size());
    if (static_cast<int>(perm.size()) != k)
        throw shape_error("permute_factors: permutation length mismatch");
    std::vector<bool> seen(k, false);
    long long total = 1;
    for (int i = 0; i < k; ++i) {
        if (perm[i] < 0 || perm[i] >= k || seen[perm[i]])
            throw shape_error("permute_factors: invalid permutation");
        seen[perm[i]] = true;
        total *= dims[i];
    }
    if (total != m.rows()) throw shape_error("permute_factors: dimensions do not match matrix");

    std::vector<int> new_dims(k);
    for (int i = 0; i < k; ++i) new_dims[i] = dims[perm[i]];
    std::vector<long long> old_stride(k, 1), new_stride(k, 1);
    for (int i = k - 2; i >= 0; --i) {
        old_stride[i] = old_stride[i + 1] * dims[i + 1];
        new_stride[i] = new_stride[i + 1] * new_dims[i + 1];
    }

    const int n = m.rows();
    // map old flat index -> new flat index
    std::vector<int> remap(n);
    std::vector<int> digits(k);
    for (int f = 0; f < n; ++f) {
        decode_index(f, dims, digits);
        long long nf = 0;
        for (int i = 0; i < k; ++i) nf += digits[perm[i]] * new_stride[i];
        remap[f] = static_cast<int>(nf);
    }

    ComplexMatrix out(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) out(remap[r], remap[c]) = m(r, c);
    return out;
}

EigResult herm_eig(const HermitianOperator &h) {
    const int n = h.dim();
    ComplexMatrix a = h.matrix();
    ComplexMatrix v = ComplexMatrix::identity(n);

    EigResult res;
    if (n == 1) {
        res.values = {a(0, 0).real()};
        res.vectors = v;
        return res;
    }

    const double scale = std::max(1.0, a.frobenius_norm());
    const double conv_tol = 1e-13 * scale;
    const double skip_tol = conv_tol / (10.0 * n);

    auto off_norm = [&]() {
        double s = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) s += std::norm(a(p, q));
        return std::sqrt(2.0 * s);
    };

    int sweep = 0;
    double off = off_norm();
    while (off > conv_tol && sweep < kMaxJacobiSweeps) {
        ++sweep;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cx apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= skip_tol) continue;

                const cx u = apq / mag; // phase so that conj(u)*apq is real
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                double t;
                if (tau >= 0.0)
                    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
                else
                    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // A <- J^dag A J with J(p,p)=u c, J(p,q)=u s, J(q,p)=-s, J(q,q)=c
                for (int k = 0; k < n; ++k) {
                    const cx akp = a(k, p), akq = a(k, q);
                    a(k, p) = u * c * akp - s * akq;
                    a(k, q) = u * s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const cx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(u) * c * apk - s * aqk;
                    a(q, k) = std::conj(u) * s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = cx(a(p, p).real(), 0.0);
                a(q, q) = cx(a(q, q).real(), 0.0);
                for (int k = 0; k < n; ++k) {
                    const cx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = u * c * vkp - s * vkq;
                    v(k, q) = u * s * vkp + c * vkq;
                }
            }
        }
        off = off_norm();
    }

    if (off > conv_tol)
        throw numerical_error("herm_eig: no convergence after " + std::to_string(sweep) +
                              " sweeps, off-diagonal residual " + std::to_string(off));

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = a(i, i).real();
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return diag[x] < diag[y]; });

    res.values.resize(n);
    res.vectors = ComplexMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        res.values[j] = diag[order[j]];
        for (int i = 0; i < n; ++i) res.vectors(i, j) = v(i, order[j]);
    }
    res.sweeps = sweep;
    return res;
}

namespace {

// V f(diag) V^dag, hermitized against roundoff.
ComplexMatrix rebuild(const EigResult &eig, const std::vector<double> &f) {
    const int n = eig.vectors.rows();
    ComplexMatrix out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            cx acc = 0.0;
            for (int k = 0; k < n; ++k)
                acc += eig.vectors(i, k) * f[k] * std::conj(eig.vectors(j, k));
            out(i, j) = acc;
            out(j, i) = std::conj(acc);
        }
    for (int i = 0; i < n; ++i) out(i, i) = cx(out(i, i).real(), 0.0);
    return out;
}

} // namespace

HermitianOperator psd_sqrt(const HermitianOperator &p) {
    EigResult eig = herm_eig(p);
    std::vector<double> roots(eig.values.size());
    for (std::size_t i = 0; i < eig.values.size(); ++i) {
        double lam = eig.values[i];
        if (lam < -kPsdTol)
            throw validation_error("psd_sqrt: eigenvalue " + std::to_string(lam) +
                                   " below -psd_tol, operator is not PSD");
        roots[i] = lam > 0.0 ? std::sqrt(lam) : 0.0;
    }
    return HermitianOperator::unchecked(rebuild(eig, roots));
}

double trace_norm(const HermitianOperator &h) {
    EigResult eig = herm_eig(h);
    double s = 0.0;
    for (double lam : eig.values) s += std::abs(lam);
    return s;
}

double min_eigenvalue(const HermitianOperator &h) { return herm_eig(h).values.front(); }

ComplexMatrix hermitize(const ComplexMatrix &m) {
    if (!m.is_square()) throw shape_error("hermitize: matrix is not square");
    ComplexMatrix out(m.rows(), m.cols());
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c)
            out(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
        out(r, r) = cx(out(r, r).real(), 0.0);
    }
    return out;
}

} // namespace locert
