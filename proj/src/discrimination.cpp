#include "locert/discrimination.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace locert {

namespace {

double real_trace_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    cx acc = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) acc += a(i, j) * b(j, i);
    return acc.real();
}

// Pseudo-inverse square root on the support of a PSD operator.
ComplexMatrix pinv_sqrt(const HermitianOperator &h, double rel_cutoff = 1e-13) {
    EigResult eig = herm_eig(h);
    const double top = std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
    const double cutoff = top * rel_cutoff;
    const int n = h.dim();
    ComplexMatrix out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            cx acc = 0.0;
            for (int k = 0; k < n; ++k) {
                if (eig.values[k] <= cutoff) continue;
                acc += eig.vectors(i, k) * (1.0 / std::sqrt(eig.values[k])) *
                       std::conj(eig.vectors(j, k));
            }
            out(i, j) = acc;
            if (j != i) out(j, i) = std::conj(acc);
        }
    return out;
}

double primal_value(const std::vector<HermitianOperator> &povm,
                    const std::vector<HermitianOperator> &states) {
    double v = 0.0;
    for (std::size_t i = 0; i < povm.size(); ++i)
        v += real_trace_product(povm[i].matrix(), states[i].matrix());
    return v;
}

// Feasibility repair: add the negative part of every slack Y - rho_i back
// onto Y.  Y' - rho_j >= pos(Y - rho_j) >= 0, and the trace cost is just the
// summed violations rather than dim * worst violation.
HermitianOperator repair_certificate(const DiscriminationInstance &inst, ComplexMatrix y) {
    const int d = y.rows();
    ComplexMatrix correction(d, d);
    bool any = false;
    for (const auto &rho : inst.states) {
        EigResult eig = herm_eig(HermitianOperator::unchecked(hermitize(y - rho.matrix())));
        for (int k = 0; k < d && eig.values[k] < 0.0; ++k) {
            any = true;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    correction(i, j) +=
                        (-eig.values[k]) * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
        }
    }
    if (any) y += correction;
    return HermitianOperator::unchecked(hermitize(std::move(y)));
}

} // namespace

DiscriminationInstance::DiscriminationInstance(std::vector<HermitianOperator> states_)
    : states(std::move(states_)) {
    if (states.empty()) throw shape_error("DiscriminationInstance: no states");
    const int d = states.front().dim();
    total_trace = 0.0;
    for (const auto &s : states) {
        if (s.dim() != d)
            throw shape_error("DiscriminationInstance: states live on different spaces");
        const double lo = min_eigenvalue(s);
        if (lo < -kPsdTol)
            throw validation_error("DiscriminationInstance: state eigenvalue " +
                                   std::to_string(lo) + " below -psd_tol");
        total_trace += s.matrix().trace().real();
    }
}

PgmResult pgm_lower_bound(const DiscriminationInstance &inst) {
    const int d = inst.dim();
    ComplexMatrix sum(d, d);
    for (const auto &s : inst.states) sum += s.matrix();
    if (sum.max_norm() == 0.0)
        throw validation_error("pgm_lower_bound: degenerate all-zero instance");

    const ComplexMatrix root = pinv_sqrt(HermitianOperator::unchecked(hermitize(sum)));
    PgmResult res;
    res.povm.reserve(inst.states.size());
    ComplexMatrix acc(d, d);
    for (const auto &s : inst.states) {
        ComplexMatrix t = hermitize(root * s.matrix() * root);
        acc += t;
        res.povm.push_back(HermitianOperator::unchecked(std::move(t)));
    }
    // Off-support remainder goes to outcome 0.
    ComplexMatrix remainder = ComplexMatrix::identity(d) - acc;
    res.povm[0] = HermitianOperator::unchecked(hermitize(res.povm[0].matrix() + remainder));
    res.value = primal_value(res.povm, inst.states);
    return res;
}

DualCheck check_dual(const DiscriminationInstance &inst, const HermitianOperator &y) {
    if (y.dim() != inst.dim()) throw shape_error("check_dual: dimension mismatch");
    DualCheck out;
    double worst = 0.0;
    for (const auto &rho : inst.states) {
        const double lo =
            min_eigenvalue(HermitianOperator::unchecked(hermitize(y.matrix() - rho.matrix())));
        worst = std::min(worst, lo);
    }
    out.max_violation = worst < 0.0 ? -worst : 0.0;
    out.feasible = out.max_violation <= 1e-8;
    return out;
}

// ---- closed forms ----------------------------------------------------------

namespace {

DiscriminationResult dist_single(const DiscriminationInstance &inst) {
    DiscriminationResult res;
    res.value = inst.states[0].matrix().trace().real();
    res.povm.push_back(HermitianOperator::unchecked(ComplexMatrix::identity(inst.dim())));
    res.dual_certificate = repair_certificate(inst, inst.states[0].matrix());
    res.primal_dual_gap = res.dual_certificate.matrix().trace().real() - res.value;
    res.certified = true;
    return res;
}

DiscriminationResult dist_two_state(const DiscriminationInstance &inst) {
    const ComplexMatrix &r1 = inst.states[0].matrix();
    const ComplexMatrix &r2 = inst.states[1].matrix();
    const int d = inst.dim();
    EigResult eig = herm_eig(HermitianOperator::unchecked(hermitize(r1 - r2)));

    double norm1 = 0.0;
    ComplexMatrix pos(d, d); // projector onto the strictly-positive eigenspace
    ComplexMatrix abs_diff(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            cx pacc = 0.0, aacc = 0.0;
            for (int k = 0; k < d; ++k) {
                const double lam = eig.values[k];
                const cx w = eig.vectors(i, k) * std::conj(eig.vectors(j, k));
                if (lam > 0.0) pacc += w;
                aacc += std::abs(lam) * w;
            }
            pos(i, j) = pacc;
            abs_diff(i, j) = aacc;
            if (j != i) {
                pos(j, i) = std::conj(pacc);
                abs_diff(j, i) = std::conj(aacc);
            }
        }
    for (double lam : eig.values) norm1 += std::abs(lam);

    const double t1 = r1.trace().real(), t2 = r2.trace().real();
    DiscriminationResult res;
    res.value = 0.5 * (t1 + t2 + norm1);
    res.povm.push_back(HermitianOperator::unchecked(hermitize(pos)));
    res.povm.push_back(
        HermitianOperator::unchecked(hermitize(ComplexMatrix::identity(d) - pos)));

    // Y = (rho_1 + rho_2 + |rho_1 - rho_2|)/2 is feasible with Tr(Y) equal to
    // the primal value.
    res.dual_certificate = repair_certificate(inst, hermitize(0.5 * (r1 + r2 + abs_diff)));
    res.primal_dual_gap = res.dual_certificate.matrix().trace().real() - res.value;
    res.certified = true;
    return res;
}

// ---- interior-point polish for the stalling fixed-point cases --------------
//
// Dual problem: min Tr Y subject to Y >= rho_i.  On the central path of the
// log barrier, T_i = (1/t) (Y - rho_i)^{-1} is a strictly positive POVM up to
// the Newton residual, and the duality gap at the central point is n*dim/t.

constexpr int kPolishMaxDim = 32;

struct HermBasis {
    // Orthonormal basis of Hermitian d x d matrices: E_ii, then for i<j the
    // symmetric and antisymmetric pairs scaled by 1/sqrt(2).
    int d;
    int size() const { return d * d; }

    // <B_k, G> for Hermitian G.
    double coeff(int k, const ComplexMatrix &g) const {
        if (k < d) return g(k, k).real();
        int idx = k - d;
        const bool anti = idx >= d * (d - 1) / 2;
        if (anti) idx -= d * (d - 1) / 2;
        int i = 0, j = 0, run = idx;
        for (i = 0; i < d; ++i) {
            if (run < d - 1 - i) {
                j = i + 1 + run;
                break;
            }
            run -= d - 1 - i;
        }
        const double root2 = std::sqrt(2.0);
        return anti ? root2 * g(i, j).imag() : root2 * g(i, j).real();
    }

    void add_scaled(ComplexMatrix &acc, int k, double w) const {
        if (k < d) {
            acc(k, k) += w;
            return;
        }
        int idx = k - d;
        const bool anti = idx >= d * (d - 1) / 2;
        if (anti) idx -= d * (d - 1) / 2;
        int i = 0, j = 0, run = idx;
        for (i = 0; i < d; ++i) {
            if (run < d - 1 - i) {
                j = i + 1 + run;
                break;
            }
            run -= d - 1 - i;
        }
        const double s = w / std::sqrt(2.0);
        if (anti) {
            acc(i, j) += cx(0.0, s);
            acc(j, i) -= cx(0.0, s);
        } else {
            acc(i, j) += s;
            acc(j, i) += s;
        }
    }
};

// Solve the dense real SPD system in place by Gaussian elimination with
// partial pivoting; small (d^2 x d^2) systems only.
bool solve_real_system(std::vector<double> &a, std::vector<double> &b, int n) {
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
        if (std::abs(a[pivot * n + col]) < 1e-300) return false;
        if (pivot != col) {
            for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
            std::swap(b[col], b[pivot]);
        }
        const double inv = 1.0 / a[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] * inv;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            b[r] -= f * b[col];
        }
    }
    for (int r = n - 1; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < n; ++c) acc -= a[r * n + c] * b[c];
        b[r] = acc / a[r * n + r];
    }
    return true;
}

struct BarrierState {
    std::vector<EigResult> slack_eigs; // of S_i = Y - rho_i
    std::vector<ComplexMatrix> slack_inv;
    double logdet_sum = 0.0;
    double min_eig = 0.0;
};

bool eval_slacks(const DiscriminationInstance &inst, const ComplexMatrix &y, BarrierState &st) {
    st.slack_eigs.clear();
    st.slack_inv.clear();
    st.logdet_sum = 0.0;
    st.min_eig = 1e300;
    const int d = y.rows();
    for (const auto &rho : inst.states) {
        EigResult e = herm_eig(HermitianOperator::unchecked(hermitize(y - rho.matrix())));
        st.min_eig = std::min(st.min_eig, e.values.front());
        if (e.values.front() <= 0.0) return false;
        ComplexMatrix inv(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                cx acc = 0.0;
                for (int k = 0; k < d; ++k)
                    acc += e.vectors(i, k) * (1.0 / e.values[k]) * std::conj(e.vectors(j, k));
                inv(i, j) = acc;
                if (j != i) inv(j, i) = std::conj(acc);
            }
        for (double lam : e.values) st.logdet_sum += std::log(lam);
        st.slack_eigs.push_back(std::move(e));
        st.slack_inv.push_back(std::move(inv));
    }
    return true;
}

// One centering run of Newton's method on t*TrY - sum_i logdet(Y - rho_i).
// Returns false if the linear algebra gives up.
bool center(const DiscriminationInstance &inst, ComplexMatrix &y, double t, int max_newton) {
    const int d = inst.dim();
    const HermBasis basis{d};
    const int nb = basis.size();
    BarrierState st;
    if (!eval_slacks(inst, y, st)) return false;

    for (int step = 0; step < max_newton; ++step) {
        // gradient of -phi: G = sum_i S_i^{-1} - t I
        ComplexMatrix g(d, d);
        for (const auto &inv : st.slack_inv) g += inv;
        for (int i = 0; i < d; ++i) g(i, i) -= t;

        // Hessian columns: C_l = sum_i S_i^{-1} B_l S_i^{-1} built from
        // outer products of S^{-1} columns (B_l has at most two entries).
        std::vector<double> h(static_cast<std::size_t>(nb) * nb, 0.0);
        std::vector<double> rhs(nb, 0.0);
        for (int l = 0; l < nb; ++l) {
            ComplexMatrix bl(d, d);
            basis.add_scaled(bl, l, 1.0);
            ComplexMatrix cl(d, d);
            for (const auto &inv : st.slack_inv) {
                // inv * bl * inv with bl sparse
                ComplexMatrix tmp(d, d);
                for (int p = 0; p < d; ++p)
                    for (int q = 0; q < d; ++q) {
                        const cx w = bl(p, q);
                        if (w == cx(0.0, 0.0)) continue;
                        for (int i = 0; i < d; ++i)
                            for (int j = 0; j < d; ++j)
                                tmp(i, j) += inv(i, p) * w * inv(q, j);
                    }
                cl += tmp;
            }
            for (int k = 0; k < nb; ++k) h[static_cast<std::size_t>(k) * nb + l] =
                basis.coeff(k, cl);
            rhs[l] = basis.coeff(l, g);
        }

        std::vector<double> delta = rhs;
        if (!solve_real_system(h, delta, nb)) return false;

        double decrement_sq = 0.0;
        for (int k = 0; k < nb; ++k) decrement_sq += delta[k] * rhs[k];
        if (decrement_sq <= 1e-18) return true;

        ComplexMatrix dy(d, d);
        for (int k = 0; k < nb; ++k) basis.add_scaled(dy, k, delta[k]);

        const double phi0 = t * y.trace().real() - st.logdet_sum;
        double alpha = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 60; ++bt) {
            ComplexMatrix cand = y + alpha * dy;
            BarrierState cand_st;
            if (eval_slacks(inst, cand, cand_st)) {
                const double phi = t * cand.trace().real() - cand_st.logdet_sum;
                if (phi <= phi0 - 0.25 * alpha * decrement_sq + 1e-12 * std::abs(phi0)) {
                    y = std::move(cand);
                    st = std::move(cand_st);
                    moved = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if (!moved) return true; // stuck at numerical precision; current point is centered enough
        if (decrement_sq <= 1e-12) return true;
    }
    return true;
}

// Extract a strictly feasible primal/dual pair from the (approximate) central
// point at parameter t.
bool extract_candidate(const DiscriminationInstance &inst, const ComplexMatrix &y, double t,
                       DiscriminationResult &out) {
    const int d = inst.dim();
    BarrierState st;
    if (!eval_slacks(inst, y, st)) return false;

    std::vector<ComplexMatrix> raw;
    ComplexMatrix total(d, d);
    for (const auto &inv : st.slack_inv) {
        ComplexMatrix ti = (1.0 / t) * inv;
        total += ti;
        raw.push_back(std::move(ti));
    }
    // Renormalize sum_i T_i to the identity exactly.
    ComplexMatrix fix = pinv_sqrt(HermitianOperator::unchecked(hermitize(total)), 1e-15);
    out.povm.clear();
    for (auto &ti : raw)
        out.povm.push_back(HermitianOperator::unchecked(hermitize(fix * ti * fix)));
    out.value = primal_value(out.povm, inst.states);
    out.dual_certificate = repair_certificate(inst, y);
    out.primal_dual_gap = out.dual_certificate.matrix().trace().real() - out.value;
    return out.primal_dual_gap >= -1e-12;
}

// Push a stalled iterate to the requested gap with a short-path barrier run.
bool barrier_polish(const DiscriminationInstance &inst, double start_gap, double gap_target,
                    DiscriminationResult &out) {
    const int d = inst.dim();
    if (d > kPolishMaxDim) return false;
    const int n = inst.n();

    double scale = 1e-3;
    for (const auto &rho : inst.states)
        scale = std::max(scale, std::abs(rho.matrix().trace().real()));

    // Strictly feasible start: shift the identity above every rho_i.
    double top = 0.0;
    for (const auto &rho : inst.states) {
        EigResult e = herm_eig(rho);
        top = std::max(top, e.values.back());
    }
    ComplexMatrix y(d, d);
    for (int i = 0; i < d; ++i) y(i, i) = top + 0.1 * scale;

    double t = n * d / std::max(std::min(start_gap, 1.0 * scale), 1e-6);
    for (int round = 0; round < 30; ++round) {
        if (!center(inst, y, t, 40)) return false;
        if (n * d / t <= 0.25 * gap_target) {
            DiscriminationResult cand;
            cand.iterations = out.iterations;
            if (extract_candidate(inst, y, t, cand) && cand.primal_dual_gap <= gap_target) {
                cand.certified = true;
                out = std::move(cand);
                return true;
            }
        }
        t *= 10.0;
    }
    return false;
}

} // namespace

DiscriminationResult dist_iterative(const DiscriminationInstance &inst, double tol,
                                    int max_iters) {
    const int d = inst.dim();
    const int n = inst.n();
    const double gap_target = tol * std::max(1.0, inst.total_trace);

    PgmResult seed = pgm_lower_bound(inst);
    std::vector<HermitianOperator> povm = seed.povm;

    DiscriminationResult best;
    best.value = -1.0;
    best.primal_dual_gap = 1e300;

    // Generic instances certify in the fixed-point phase within tens of
    // iterations; after kStallIters we try the barrier polish once, since
    // near-degenerate optima make the fixed point crawl.
    constexpr int kStallIters = 400;
    bool polish_tried = false;

    for (int iter = 0; iter <= max_iters; ++iter) {
        ComplexMatrix y(d, d);
        for (int i = 0; i < n; ++i) y += inst.states[i].matrix() * povm[i].matrix();
        HermitianOperator cert = repair_certificate(inst, hermitize(y));

        const double value = primal_value(povm, inst.states);
        const double gap = cert.matrix().trace().real() - value;
        if (gap < best.primal_dual_gap) {
            best.value = value;
            best.povm = povm;
            best.dual_certificate = cert;
            best.primal_dual_gap = gap;
            best.iterations = iter;
        }
        if (gap <= gap_target) {
            best.certified = true;
            return best;
        }
        if (iter >= kStallIters && !polish_tried) {
            polish_tried = true;
            DiscriminationResult polished = best;
            if (barrier_polish(inst, best.primal_dual_gap, gap_target, polished) &&
                polished.value >= best.value - gap_target)
                return polished;
        }
        if (iter == max_iters) break;

        // T_i <- L^{-1/2} rho_i T_i rho_i L^{-1/2},  L = sum_j rho_j T_j rho_j.
        std::vector<ComplexMatrix> lifted(n);
        ComplexMatrix big_l(d, d);
        for (int i = 0; i < n; ++i) {
            lifted[i] = inst.states[i].matrix() * povm[i].matrix() * inst.states[i].matrix();
            big_l += lifted[i];
        }
        const ComplexMatrix l_root = pinv_sqrt(HermitianOperator::unchecked(hermitize(big_l)));
        ComplexMatrix total(d, d);
        for (int i = 0; i < n; ++i) {
            ComplexMatrix ti = hermitize(l_root * lifted[i] * l_root);
            total += ti;
            povm[i] = HermitianOperator::unchecked(std::move(ti));
        }
        // The update resolves the identity only on the support of L; park the
        // remainder on outcome 0.
        povm[0] = HermitianOperator::unchecked(
            hermitize(povm[0].matrix() + ComplexMatrix::identity(d) - total));
    }
    return best;
}

DiscriminationResult dist(const DiscriminationInstance &inst, double tol) {
    // Zero operators never win weight; solve the reduced instance and give
    // them zero POVM elements so padding is exactly neutral.
    std::vector<int> live;
    for (int i = 0; i < inst.n(); ++i)
        if (inst.states[i].matrix().max_norm() > 0.0) live.push_back(i);

    if (live.empty()) {
        DiscriminationResult res;
        res.value = 0.0;
        res.povm.assign(inst.states.size(),
                        HermitianOperator::unchecked(ComplexMatrix(inst.dim(), inst.dim())));
        res.povm[0] = HermitianOperator::unchecked(ComplexMatrix::identity(inst.dim()));
        res.dual_certificate = HermitianOperator::unchecked(ComplexMatrix(inst.dim(), inst.dim()));
        res.primal_dual_gap = 0.0;
        res.certified = true;
        return res;
    }

    DiscriminationResult reduced;
    if (static_cast<int>(live.size()) < inst.n()) {
        std::vector<HermitianOperator> kept;
        kept.reserve(live.size());
        for (int idx : live) kept.push_back(inst.states[idx]);
        reduced = dist(DiscriminationInstance(std::move(kept)), tol);
        DiscriminationResult res = reduced;
        res.povm.assign(inst.states.size(),
                        HermitianOperator::unchecked(ComplexMatrix(inst.dim(), inst.dim())));
        for (std::size_t k = 0; k < live.size(); ++k) res.povm[live[k]] = reduced.povm[k];
        return res;
    }

    if (inst.n() == 1) return dist_single(inst);
    if (inst.n() == 2) return dist_two_state(inst);
    return dist_iterative(inst, tol);
}

} // namespace locert
