#include "locert/strategies.hpp"

#include <cmath>
#include <string>

namespace locert {

namespace {

// Tr[(A (x) B) m] contracted directly from the factors.
cx trace_kron_product(const ComplexMatrix &a, const ComplexMatrix &b, const ComplexMatrix &m) {
    const int da = a.rows(), db = b.rows();
    cx acc = 0.0;
    for (int i1 = 0; i1 < da; ++i1)
        for (int j1 = 0; j1 < da; ++j1) {
            const cx av = a(i1, j1);
            if (av == cx(0.0, 0.0)) continue;
            cx inner = 0.0;
            for (int i2 = 0; i2 < db; ++i2)
                for (int j2 = 0; j2 < db; ++j2)
                    inner += b(i2, j2) * m(j1 * db + j2, i1 * db + i2);
            acc += av * inner;
        }
    return acc;
}

// Tr_D[(A (x) I_E) m] as an operator on E.
ComplexMatrix partial_trace_d_left(const ComplexMatrix &a, const ComplexMatrix &m, int dE) {
    const int dD = a.rows();
    ComplexMatrix out(dE, dE);
    for (int e1 = 0; e1 < dE; ++e1)
        for (int e2 = 0; e2 < dE; ++e2) {
            cx acc = 0.0;
            for (int d1 = 0; d1 < dD; ++d1)
                for (int d2 = 0; d2 < dD; ++d2)
                    acc += a(d1, d2) * m(d2 * dE + e1, d1 * dE + e2);
            out(e1, e2) = acc;
        }
    return out;
}

} // namespace

PovmResiduals measurement_residuals(int dim, const std::vector<HermitianOperator> &elements) {
    PovmResiduals r;
    r.min_eigenvalue = 0.0;
    ComplexMatrix sum(dim, dim);
    for (const auto &e : elements) {
        if (e.dim() != dim) throw shape_error("measurement_residuals: element dimension mismatch");
        r.min_eigenvalue = std::min(r.min_eigenvalue, min_eigenvalue(e));
        sum += e.matrix();
    }
    r.completeness = max_abs_diff(sum, ComplexMatrix::identity(dim));
    for (std::size_t i = 0; i < elements.size(); ++i) {
        const ComplexMatrix &ei = elements[i].matrix();
        r.idempotence = std::max(r.idempotence, max_abs_diff(ei * ei, ei));
        for (std::size_t j = i + 1; j < elements.size(); ++j)
            r.orthogonality =
                std::max(r.orthogonality, (ei * elements[j].matrix()).max_norm());
    }
    return r;
}

PovmFamily::PovmFamily(int dim, std::vector<std::vector<HermitianOperator>> elements)
    : dim_(dim), elements_(std::move(elements)) {
    if (dim <= 0) throw shape_error("PovmFamily: dimension must be positive");
    if (elements_.empty() || elements_.front().empty())
        throw shape_error("PovmFamily: needs at least one setting and one outcome");
    const std::size_t n_out = elements_.front().size();
    residuals_ = PovmResiduals{};
    for (const auto &setting : elements_) {
        if (setting.size() != n_out)
            throw shape_error("PovmFamily: inconsistent outcome counts across settings");
        PovmResiduals r = measurement_residuals(dim_, setting);
        residuals_.min_eigenvalue = std::min(residuals_.min_eigenvalue, r.min_eigenvalue);
        residuals_.completeness = std::max(residuals_.completeness, r.completeness);
        residuals_.idempotence = std::max(residuals_.idempotence, r.idempotence);
        residuals_.orthogonality = std::max(residuals_.orthogonality, r.orthogonality);
    }
    if (residuals_.min_eigenvalue < -kPsdTol)
        throw validation_error("PovmFamily: element eigenvalue " +
                               std::to_string(residuals_.min_eigenvalue) + " below -psd_tol");
    if (residuals_.completeness > kPovmTol)
        throw validation_error("PovmFamily: completeness residual " +
                               std::to_string(residuals_.completeness) + " exceeds tolerance");
    is_projective_ =
        residuals_.idempotence <= kProjectiveTol && residuals_.orthogonality <= kProjectiveTol;
}

Strategy::Strategy(int dD_, int dE_, PovmFamily alice_, PovmFamily bob_, DensityOperator gamma_)
    : dD(dD_), dE(dE_), alice(std::move(alice_)), bob(std::move(bob_)),
      gamma(std::move(gamma_)) {
    if (alice.dim() != dD) throw shape_error("Strategy: Alice POVMs are not on D");
    if (bob.dim() != dE) throw shape_error("Strategy: Bob POVMs are not on E");
    if (gamma.dim() != dD * dE)
        throw shape_error("Strategy: shared state dimension " + std::to_string(gamma.dim()) +
                          " differs from dD*dE = " + std::to_string(dD * dE));
}

Correlation achieved_correlation(const Strategy &s) {
    const int nA = s.nA(), nB = s.nB(), nX = s.nX(), nY = s.nY();
    std::vector<double> p(static_cast<std::size_t>(nA) * nB * nX * nY);
    for (int a = 0; a < nA; ++a)
        for (int b = 0; b < nB; ++b)
            for (int x = 0; x < nX; ++x)
                for (int y = 0; y < nY; ++y) {
                    const cx v = trace_kron_product(s.alice.element(a, x).matrix(),
                                                    s.bob.element(b, y).matrix(),
                                                    s.gamma.matrix());
                    p[((static_cast<std::size_t>(a) * nB + b) * nX + x) * nY + y] = v.real();
                }
    return Correlation(nA, nB, nX, nY, std::move(p));
}

SecondPlayerStates second_player_states(const Strategy &s) {
    const int nA = s.nA(), nB = s.nB(), nX = s.nX(), nY = s.nY();
    SecondPlayerStates out;
    out.nA = nA;
    out.nB = nB;
    out.nX = nX;
    out.nY = nY;
    out.dim = s.dE;
    out.rho_pre.reserve(static_cast<std::size_t>(nA) * nX);
    out.rho.reserve(static_cast<std::size_t>(nA) * nB * nX * nY);

    // rho_a^x = Tr_D[(sqrt(R) (x) I) gamma (sqrt(R) (x) I)] = Tr_D[(R (x) I) gamma],
    // using that the partial trace is cyclic for operators local to D.
    for (int a = 0; a < nA; ++a)
        for (int x = 0; x < nX; ++x)
            out.rho_pre.push_back(HermitianOperator::unchecked(hermitize(
                partial_trace_d_left(s.alice.element(a, x).matrix(), s.gamma.matrix(), s.dE))));

    // sqrt(R (x) S) = sqrt(R) (x) sqrt(S), so
    // rho_ab^xy = sqrt(S_b^y) rho_a^x sqrt(S_b^y).
    std::vector<ComplexMatrix> sqrt_s;
    sqrt_s.reserve(static_cast<std::size_t>(nB) * nY);
    for (int b = 0; b < nB; ++b)
        for (int y = 0; y < nY; ++y)
            sqrt_s.push_back(psd_sqrt(s.bob.element(b, y)).matrix());

    for (int a = 0; a < nA; ++a)
        for (int b = 0; b < nB; ++b)
            for (int x = 0; x < nX; ++x)
                for (int y = 0; y < nY; ++y) {
                    const ComplexMatrix &root = sqrt_s[b * nY + y];
                    out.rho.push_back(HermitianOperator::unchecked(
                        hermitize(root * out.pre(a, x).matrix() * root)));
                }
    return out;
}

ComplexMatrix qubit_projector(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    ComplexMatrix m(2, 2);
    m(0, 0) = c * c;
    m(0, 1) = c * s;
    m(1, 0) = c * s;
    m(1, 1) = s * s;
    return m;
}

Strategy chsh_optimal_strategy() {
    const double pi = std::acos(-1.0);
    std::vector<std::vector<HermitianOperator>> alice, bob;
    for (double theta : {0.0, pi / 4.0})
        alice.push_back({HermitianOperator(qubit_projector(theta)),
                         HermitianOperator(qubit_projector(theta + pi / 2.0))});
    for (double theta : {pi / 8.0, -pi / 8.0})
        bob.push_back({HermitianOperator(qubit_projector(theta)),
                       HermitianOperator(qubit_projector(theta + pi / 2.0))});

    const double r = 1.0 / std::sqrt(2.0);
    ComplexMatrix phi_plus = outer({r, 0.0, 0.0, r});
    return Strategy(2, 2, PovmFamily(2, std::move(alice)), PovmFamily(2, std::move(bob)),
                    DensityOperator(std::move(phi_plus)));
}

namespace {

// Unitary on D (x) C^nX whose action on |psi>|0> is sum_x (sqrt(R^x)|psi>)|x>,
// remaining columns filled from standard basis vectors by Gram-Schmidt.
ComplexMatrix naimark_unitary(const std::vector<ComplexMatrix> &sqrt_elements, int dD, int nX) {
    const int dim = dD * nX;
    ComplexMatrix iso(dim, dD);
    for (int d = 0; d < dD; ++d)
        for (int x = 0; x < nX; ++x)
            for (int dp = 0; dp < dD; ++dp) iso(dp * nX + x, d) = sqrt_elements[x](dp, d);

    // The Gram matrix equals sum_x R^x, identity only up to the POVM
    // completeness residual; a Loewdin correction iso * G^{-1/2} makes the
    // columns orthonormal to machine precision.
    EigResult gram = herm_eig(HermitianOperator(hermitize(iso.adjoint() * iso)));
    std::vector<double> inv_roots(gram.values.size());
    for (std::size_t i = 0; i < gram.values.size(); ++i) {
        if (gram.values[i] <= 0.0)
            throw numerical_error("projectivize: degenerate isometry Gram matrix");
        inv_roots[i] = 1.0 / std::sqrt(gram.values[i]);
    }
    ComplexMatrix g_inv_root(dD, dD);
    for (int i = 0; i < dD; ++i)
        for (int j = 0; j < dD; ++j) {
            cx acc = 0.0;
            for (int k = 0; k < dD; ++k)
                acc += gram.vectors(i, k) * inv_roots[k] * std::conj(gram.vectors(j, k));
            g_inv_root(i, j) = acc;
        }
    iso = iso * g_inv_root;

    std::vector<std::vector<cx>> columns;
    columns.reserve(dim);
    for (int d = 0; d < dD; ++d) {
        std::vector<cx> col(dim, cx(0.0, 0.0));
        for (int i = 0; i < dim; ++i) col[i] = iso(i, d);
        columns.push_back(std::move(col));
    }

    auto project_out = [&](std::vector<cx> &vec) {
        for (const auto &col : columns) {
            cx overlap = 0.0;
            for (int i = 0; i < dim; ++i) overlap += std::conj(col[i]) * vec[i];
            for (int i = 0; i < dim; ++i) vec[i] -= overlap * col[i];
        }
    };

    for (int cand = 0; cand < dim && static_cast<int>(columns.size()) < dim; ++cand) {
        std::vector<cx> vec(dim, cx(0.0, 0.0));
        vec[cand] = 1.0;
        project_out(vec);
        project_out(vec); // second pass tightens orthogonality
        double norm = 0.0;
        for (const cx &v : vec) norm += std::norm(v);
        norm = std::sqrt(norm);
        if (norm < 1e-4) continue;
        for (cx &v : vec) v /= norm;
        columns.push_back(std::move(vec));
    }
    if (static_cast<int>(columns.size()) != dim)
        throw numerical_error("projectivize: Gram-Schmidt completion failed");

    // Isometry columns sit at ancilla value 0; completion columns fill the
    // remaining slots in index order.
    ComplexMatrix u(dim, dim);
    int extra = dD;
    for (int d = 0; d < dD; ++d)
        for (int x = 0; x < nX; ++x) {
            const int slot = d * nX + x;
            const auto &col = x == 0 ? columns[d] : columns[extra++];
            for (int i = 0; i < dim; ++i) u(i, slot) = col[i];
        }
    return u;
}

} // namespace

Strategy projectivize(const Strategy &s, int max_dim) {
    const int nA = s.nA(), nX = s.nX();
    long long anc_dim = 1;
    for (int a = 0; a < nA; ++a) {
        anc_dim *= nX;
        if (anc_dim * s.dD * s.dE > max_dim)
            throw sizing_error("projectivize: dilated dimension exceeds max_dim " +
                               std::to_string(max_dim));
    }
    const int dAnc = static_cast<int>(anc_dim);
    const int dDp = s.dD * dAnc;

    // Per-setting unitaries on D (x) A_a.
    std::vector<ComplexMatrix> unitaries;
    unitaries.reserve(nA);
    for (int a = 0; a < nA; ++a) {
        std::vector<ComplexMatrix> roots;
        roots.reserve(nX);
        for (int x = 0; x < nX; ++x) roots.push_back(psd_sqrt(s.alice.element(a, x)).matrix());
        unitaries.push_back(naimark_unitary(roots, s.dD, nX));
    }

    // Dilated projective elements, embedded into D (x) A_0 (x) ... (x) A_{nA-1}.
    const int rest_dim = dAnc / nX; // product of the other ancillas
    std::vector<int> built_dims = {s.dD, nX};
    for (int j = 0; j < nA - 1; ++j) built_dims.push_back(nX);

    std::vector<std::vector<HermitianOperator>> alice_elements(nA);
    for (int a = 0; a < nA; ++a) {
        const ComplexMatrix &u = unitaries[a];
        const ComplexMatrix udag = u.adjoint();
        for (int x = 0; x < nX; ++x) {
            ComplexMatrix marker(nX, nX);
            marker(x, x) = 1.0;
            ComplexMatrix q = udag * tensor(ComplexMatrix::identity(s.dD), marker, max_dim) * u;
            ComplexMatrix embedded = rest_dim > 1
                                         ? tensor(q, ComplexMatrix::identity(rest_dim), max_dim)
                                         : q;
            if (nA > 1) {
                // Built factor order is (D, A_a, A_others ascending); restore
                // (D, A_0, ..., A_{nA-1}).
                std::vector<int> perm(nA + 1);
                perm[0] = 0;
                for (int j = 0; j < nA; ++j) {
                    if (j == a)
                        perm[1 + j] = 1;
                    else
                        perm[1 + j] = 2 + (j < a ? j : j - 1);
                }
                embedded = permute_factors(embedded, built_dims, perm);
            }
            alice_elements[a].push_back(HermitianOperator(hermitize(embedded)));
        }
    }

    // gamma' = gamma (x) |0...0><0...0| reordered to (D, ancillas, E).
    ComplexMatrix anc_zero(dAnc, dAnc);
    anc_zero(0, 0) = 1.0;
    ComplexMatrix gamma_big = tensor(s.gamma.matrix(), anc_zero, max_dim);
    gamma_big = permute_factors(gamma_big, {s.dD, s.dE, dAnc}, {0, 2, 1});

    return Strategy(dDp, s.dE, PovmFamily(dDp, std::move(alice_elements)), s.bob,
                    DensityOperator::unchecked(std::move(gamma_big)));
}

} // namespace locert
