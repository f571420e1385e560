#include "locert/certify.hpp"

#include <cmath>
#include <string>

namespace locert {

namespace {

void require_complete_support(const Game &g, const char *who) {
    if (!g.complete_support())
        throw validation_error(std::string(who) + ": game must have complete support");
}

void require_matching_alphabets(const Game &g, const Strategy &s, const char *who) {
    if (g.nA() != s.nA() || g.nB() != s.nB() || g.nX() != s.nX() || g.nY() != s.nY())
        throw shape_error(std::string(who) + ": game and strategy alphabets differ");
}

// delta_ab and solver bookkeeping shared by the weighted and uniform paths.
GuessingAnalysis analyze_guessing(const Strategy &s, const std::vector<double> &weights,
                                  int nB, double tol) {
    const SecondPlayerStates states = second_player_states(s);
    GuessingAnalysis out;
    out.per_input_delta.assign(weights.size(), 0.0);
    for (int a = 0; a < states.nA; ++a)
        for (int b = 0; b < nB; ++b) {
            double dist_sum = 0.0;
            for (int y = 0; y < states.nY; ++y) {
                std::vector<HermitianOperator> hyp;
                hyp.reserve(states.nX);
                for (int x = 0; x < states.nX; ++x) hyp.push_back(states.at(a, b, x, y));
                DiscriminationResult r = dist(DiscriminationInstance(std::move(hyp)), tol);
                dist_sum += r.value;
                out.dist_gap_budget += std::max(r.primal_dual_gap, 0.0);
                out.all_certified = out.all_certified && r.certified;
            }
            out.per_input_delta[a * nB + b] = 1.0 - dist_sum;
        }
    out.epsilon = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i)
        out.epsilon += weights[i] * out.per_input_delta[i];
    return out;
}

} // namespace

double c_g(const Game &g) {
    require_complete_support(g, "c_g");
    double sum = 0.0;
    for (int a = 0; a < g.nA(); ++a)
        for (int b = 0; b < g.nB(); ++b) {
            const double qb = g.q_bob(b);
            sum += qb * qb / g.q(a, b);
        }
    return 1.5 * std::sqrt(sum);
}

GuessingAnalysis guessing_epsilon(const Game &g, const Strategy &s, double tol) {
    require_complete_support(g, "guessing_epsilon");
    require_matching_alphabets(g, s, "guessing_epsilon");
    std::vector<double> weights(static_cast<std::size_t>(g.nA()) * g.nB());
    for (int a = 0; a < g.nA(); ++a)
        for (int b = 0; b < g.nB(); ++b) weights[a * g.nB() + b] = g.q(a, b);
    return analyze_guessing(s, weights, g.nB(), tol);
}

GuessingAnalysis uniform_delta_analysis(const Strategy &s, double tol) {
    const double w = 1.0 / (static_cast<double>(s.nA()) * s.nB());
    std::vector<double> weights(static_cast<std::size_t>(s.nA()) * s.nB(), w);
    return analyze_guessing(s, weights, s.nB(), tol);
}

double uniform_delta(const Strategy &s, double tol) {
    return uniform_delta_analysis(s, tol).epsilon;
}

ComplexMatrix pinch(const std::vector<HermitianOperator> &f, const ComplexMatrix &m) {
    ComplexMatrix out(m.rows(), m.cols());
    for (const auto &e : f) out += e.matrix() * m * e.matrix();
    return out;
}

DisturbanceResult measurement_disturbance(const DensityOperator &lambda, int dA, int dB,
                                          const std::vector<HermitianOperator> &f, double tol) {
    if (dA * dB != lambda.dim())
        throw shape_error("measurement_disturbance: dA*dB does not match the state");
    PovmResiduals r = measurement_residuals(dA, f);
    if (r.completeness > kProjectiveTol || r.idempotence > kProjectiveTol ||
        r.orthogonality > kProjectiveTol)
        throw validation_error("measurement_disturbance: measurement is not projective "
                               "(idempotence residual " + std::to_string(r.idempotence) + ")");

    // Induced states Lambda^B_i = Tr_A[(F_i (x) I) Lambda].
    const ComplexMatrix eye_b = ComplexMatrix::identity(dB);
    std::vector<HermitianOperator> induced;
    induced.reserve(f.size());
    for (const auto &fi : f) {
        ComplexMatrix m = tensor(fi.matrix(), eye_b) * lambda.matrix();
        induced.push_back(HermitianOperator::unchecked(
            hermitize(partial_trace(m, {dA, dB}, {1}))));
    }
    DiscriminationResult d = dist(DiscriminationInstance(std::move(induced)));

    DisturbanceResult out;
    out.delta = 1.0 - d.value;
    out.dist_gap = std::max(d.primal_dual_gap, 0.0);

    const ComplexMatrix lam_a = partial_trace(lambda.matrix(), {dA, dB}, {0});
    out.disturbance =
        trace_norm(HermitianOperator::unchecked(hermitize(pinch(f, lam_a) - lam_a)));

    const double delta_eff = std::max(out.delta, 0.0) + out.dist_gap;
    out.bound = 2.0 * std::sqrt(delta_eff) + delta_eff;
    out.bound_holds = out.disturbance <= out.bound + tol;
    return out;
}

DeclassicalizeResult declassicalize(const Game &g, const Strategy &s, double tol, int max_dim) {
    require_matching_alphabets(g, s, "declassicalize");
    if (!s.alice.is_projective())
        throw validation_error("declassicalize: Alice's measurements must be projective; "
                               "run projectivize first");
    const int nA = s.nA(), nB = s.nB(), nX = s.nX(), nY = s.nY();

    long long reg_dim = 1;
    for (int a = 0; a < nA; ++a) {
        reg_dim *= nX;
        if (reg_dim * s.dD * s.dE > max_dim)
            throw sizing_error("declassicalize: state dimension exceeds max_dim " +
                               std::to_string(max_dim) + "; reduce the instance");
    }

    // Apply the nondestructive measurements Phi_a in declared input order,
    // growing the state from D (x) E to V_0 (x) ... (x) V_{nA-1} (x) D (x) E.
    ComplexMatrix lam = s.gamma.matrix();
    int pre_dim = 1;
    for (int a = 0; a < nA; ++a) {
        const int cur = lam.rows();
        ComplexMatrix next(cur * nX, cur * nX);
        for (int x = 0; x < nX; ++x) {
            const ComplexMatrix k =
                pre_dim > 1
                    ? tensor(ComplexMatrix::identity(pre_dim),
                             tensor(s.alice.element(a, x).matrix(),
                                    ComplexMatrix::identity(s.dE), max_dim),
                             max_dim)
                    : tensor(s.alice.element(a, x).matrix(), ComplexMatrix::identity(s.dE),
                             max_dim);
            ComplexMatrix marker(nX, nX);
            marker(x, x) = 1.0;
            next += tensor(marker, k * lam * k, max_dim);
        }
        // New register was prepended; move it behind the earlier ones.
        lam = pre_dim > 1 ? permute_factors(next, {nX, pre_dim, s.dD, s.dE}, {1, 0, 2, 3})
                          : std::move(next);
        pre_dim *= nX;
    }

    // pbar(x,y|a,b) = Tr[(proj of V_a onto x) (x) I_D (x) S_b^y applied to lam]
    const int n_regs = pre_dim; // nX^nA
    const int de = s.dE;
    const int dd = s.dD;
    std::vector<double> pbar(static_cast<std::size_t>(nA) * nB * nX * nY, 0.0);
    std::vector<int> reg_digits(nA);
    for (int v = 0; v < n_regs; ++v) {
        int rem = v;
        for (int i = nA - 1; i >= 0; --i) {
            reg_digits[i] = rem % nX;
            rem /= nX;
        }
        for (int d = 0; d < dd; ++d) {
            const int base = (v * dd + d) * de;
            for (int b = 0; b < nB; ++b)
                for (int y = 0; y < nY; ++y) {
                    const ComplexMatrix &sby = s.bob.element(b, y).matrix();
                    cx acc = 0.0;
                    for (int e1 = 0; e1 < de; ++e1)
                        for (int e2 = 0; e2 < de; ++e2)
                            acc += sby(e1, e2) * lam(base + e2, base + e1);
                    for (int a = 0; a < nA; ++a) {
                        const int x = reg_digits[a];
                        pbar[((static_cast<std::size_t>(a) * nB + b) * nX + x) * nY + y] +=
                            acc.real();
                    }
                }
        }
    }

    const Correlation p = achieved_correlation(s);
    GuessingAnalysis ud = uniform_delta_analysis(s, tol);

    double l1 = 0.0;
    for (int a = 0; a < nA; ++a)
        for (int b = 0; b < nB; ++b)
            for (int x = 0; x < nX; ++x)
                for (int y = 0; y < nY; ++y)
                    l1 += std::abs(p.p(a, b, x, y) -
                                   pbar[((static_cast<std::size_t>(a) * nB + b) * nX + x) * nY +
                                        y]);

    DeclassicalizeResult out{Correlation(nA, nB, nX, nY, std::move(pbar)), 0.0, 0.0, 0.0,
                             0.0, false};
    out.distance = l1 / (static_cast<double>(nA) * nB);
    out.delta = ud.epsilon;
    out.dist_gap_budget = ud.dist_gap_budget;
    const double delta_eff = std::max(ud.epsilon, 0.0) + ud.dist_gap_budget;
    out.bound = std::sqrt(3.0 * delta_eff) * nA;
    out.bound_holds = out.distance <= out.bound + tol;
    return out;
}

double guess_bound_from(double omega_c, double cg, double w, FgMode mode) {
    if (w < omega_c) return 1.0;
    const double excess = w - omega_c;
    if (mode == FgMode::literal) return 1.0 - excess * excess / cg;
    const double eps = excess / cg;
    return 1.0 - eps * eps;
}

double guess_bound(const Game &g, double w, FgMode mode) {
    require_complete_support(g, "guess_bound");
    if (w < 0.0 || w > 1.0) throw validation_error("guess_bound: score outside [0,1]");
    return guess_bound_from(classical_value(g).value, c_g(g), w, mode);
}

CertificationReport theorem_gap_check(const Game &g, const Strategy &s,
                                      const TheoremCheckOptions &opts) {
    require_complete_support(g, "theorem_gap_check");
    require_matching_alphabets(g, s, "theorem_gap_check");

    CertificationReport rep;
    rep.tol = opts.tol;
    rep.fg_mode = opts.fg_mode;
    rep.score = score(g, achieved_correlation(s));
    rep.omega_c = classical_value(g).value;
    rep.c_g = c_g(g);

    GuessingAnalysis ga = guessing_epsilon(g, s, opts.tol);
    rep.epsilon = ga.epsilon;
    rep.dist_gap_budget = ga.dist_gap_budget;
    rep.epsilon_certified = ga.all_certified;

    const double eps_eff = std::max(ga.epsilon, 0.0) + ga.dist_gap_budget;
    rep.theorem_bound_holds = rep.score - rep.omega_c <= rep.c_g * std::sqrt(eps_eff) + opts.tol;
    rep.guess_bound = guess_bound_from(rep.omega_c, rep.c_g, rep.score, opts.fg_mode);

    if (opts.run_declassicalize) {
        long long lam_dim = s.dD;
        if (!s.alice.is_projective())
            for (int a = 0; a < s.nA(); ++a) lam_dim *= s.nX(); // dilation first
        lam_dim *= s.dE;
        for (int a = 0; a < s.nA(); ++a) lam_dim *= s.nX();
        if (lam_dim <= opts.max_dim) {
            const Strategy &proj =
                s.alice.is_projective() ? s : projectivize(s, opts.max_dim);
            DeclassicalizeResult d = declassicalize(g, proj, opts.tol, opts.max_dim);
            DeclassicalSummary sum;
            sum.distance = d.distance;
            sum.bound = d.bound;
            sum.delta = d.delta;
            sum.gap_budget = d.dist_gap_budget;
            sum.bound_holds = d.bound_holds;
            sum.pbar_score = score(g, d.pbar);
            sum.classical_score_holds = sum.pbar_score <= rep.omega_c + 1e-9;
            rep.declassical = sum;
        }
    }
    return rep;
}

} // namespace locert
