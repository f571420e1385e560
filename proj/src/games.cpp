#include "locert/games.hpp"

#include <algorithm>
#include <cmath>

namespace locert {

namespace {

void check_alphabets(int nA, int nB, int nX, int nY) {
    if (nA <= 0 || nB <= 0 || nX <= 0 || nY <= 0)
        throw shape_error("alphabet sizes must be positive");
}

} // namespace

Game::Game(int nA, int nB, int nX, int nY, std::vector<double> q, std::vector<double> H)
    : nA_(nA), nB_(nB), nX_(nX), nY_(nY), q_(std::move(q)), H_(std::move(H)) {
    check_alphabets(nA, nB, nX, nY);
    if (q_.size() != static_cast<std::size_t>(nA) * nB)
        throw shape_error("Game: q has wrong size");
    if (H_.size() != static_cast<std::size_t>(nA) * nB * nX * nY)
        throw shape_error("Game: H has wrong size");

    double total = 0.0;
    double min_q = 1.0;
    for (double v : q_) {
        if (!std::isfinite(v) || v < 0.0)
            throw validation_error("Game: q entries must be finite and nonnegative");
        total += v;
        min_q = std::min(min_q, v);
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw validation_error("Game: q sums to " + std::to_string(total) + ", expected 1");
    for (double v : H_)
        if (!std::isfinite(v) || v < 0.0 || v > 1.0)
            throw validation_error("Game: H entries must lie in [0,1]");
    complete_support_ = min_q > 0.0;
}

double Game::q_alice(int a) const {
    double s = 0.0;
    for (int b = 0; b < nB_; ++b) s += q(a, b);
    return s;
}

double Game::q_bob(int b) const {
    double s = 0.0;
    for (int a = 0; a < nA_; ++a) s += q(a, b);
    return s;
}

Correlation::Correlation(int nA, int nB, int nX, int nY, std::vector<double> p)
    : nA_(nA), nB_(nB), nX_(nX), nY_(nY), p_(std::move(p)) {
    check_alphabets(nA, nB, nX, nY);
    if (p_.size() != static_cast<std::size_t>(nA) * nB * nX * nY)
        throw shape_error("Correlation: p has wrong size");
    for (double v : p_)
        if (!std::isfinite(v) || v < -1e-12)
            throw validation_error("Correlation: entries must be >= -1e-12 and finite");
    for (int a = 0; a < nA_; ++a)
        for (int b = 0; b < nB_; ++b) {
            double s = 0.0;
            for (int x = 0; x < nX_; ++x)
                for (int y = 0; y < nY_; ++y) s += this->p(a, b, x, y);
            if (std::abs(s - 1.0) > 1e-9)
                throw validation_error("Correlation: outputs for inputs (" + std::to_string(a) +
                                       "," + std::to_string(b) + ") sum to " + std::to_string(s));
        }
}

double score(const Game &g, const Correlation &c) {
    if (g.nA() != c.nA() || g.nB() != c.nB() || g.nX() != c.nX() || g.nY() != c.nY())
        throw shape_error("score: game and correlation alphabets differ");
    double s = 0.0;
    for (int a = 0; a < g.nA(); ++a)
        for (int b = 0; b < g.nB(); ++b) {
            const double w = g.q(a, b);
            if (w == 0.0) continue;
            double inner = 0.0;
            for (int x = 0; x < g.nX(); ++x)
                for (int y = 0; y < g.nY(); ++y) inner += g.H(a, b, x, y) * c.p(a, b, x, y);
            s += w * inner;
        }
    return s;
}

Marginals marginals(const Correlation &c) {
    Marginals m;
    m.alice.assign(static_cast<std::size_t>(c.nA()) * c.nX(), 0.0);
    m.bob.assign(static_cast<std::size_t>(c.nB()) * c.nY(), 0.0);
    for (int a = 0; a < c.nA(); ++a)
        for (int x = 0; x < c.nX(); ++x) {
            double s = 0.0;
            for (int b = 0; b < c.nB(); ++b)
                for (int y = 0; y < c.nY(); ++y) s += c.p(a, b, x, y);
            m.alice[a * c.nX() + x] = s / c.nB();
        }
    for (int b = 0; b < c.nB(); ++b)
        for (int y = 0; y < c.nY(); ++y) {
            double s = 0.0;
            for (int a = 0; a < c.nA(); ++a)
                for (int x = 0; x < c.nX(); ++x) s += c.p(a, b, x, y);
            m.bob[b * c.nY() + y] = s / c.nA();
        }
    return m;
}

NonSignalingCheck is_nonsignaling(const Correlation &c, double tol) {
    double worst = 0.0;
    // Alice's marginal for (a,x) must agree across Bob inputs b, b'.
    for (int a = 0; a < c.nA(); ++a)
        for (int x = 0; x < c.nX(); ++x)
            for (int b = 0; b + 1 < c.nB(); ++b)
                for (int b2 = b + 1; b2 < c.nB(); ++b2) {
                    double s1 = 0.0, s2 = 0.0;
                    for (int y = 0; y < c.nY(); ++y) {
                        s1 += c.p(a, b, x, y);
                        s2 += c.p(a, b2, x, y);
                    }
                    worst = std::max(worst, std::abs(s1 - s2));
                }
    for (int b = 0; b < c.nB(); ++b)
        for (int y = 0; y < c.nY(); ++y)
            for (int a = 0; a + 1 < c.nA(); ++a)
                for (int a2 = a + 1; a2 < c.nA(); ++a2) {
                    double s1 = 0.0, s2 = 0.0;
                    for (int x = 0; x < c.nX(); ++x) {
                        s1 += c.p(a, b, x, y);
                        s2 += c.p(a2, b, x, y);
                    }
                    worst = std::max(worst, std::abs(s1 - s2));
                }
    return {worst <= tol, worst};
}

double deterministic_score(const Game &g, const std::vector<int> &alice_assignment,
                           const std::vector<int> &bob_assignment) {
    if (static_cast<int>(alice_assignment.size()) != g.nA() ||
        static_cast<int>(bob_assignment.size()) != g.nB())
        throw shape_error("deterministic_score: assignment length mismatch");
    double s = 0.0;
    for (int a = 0; a < g.nA(); ++a)
        for (int b = 0; b < g.nB(); ++b)
            s += g.q(a, b) * g.H(a, b, alice_assignment[a], bob_assignment[b]);
    return s;
}

ClassicalValue classical_value(const Game &g, std::uint64_t budget) {
    // Count deterministic pairs, watching for overflow.
    long double pairs = 1.0L;
    for (int a = 0; a < g.nA(); ++a) pairs *= g.nX();
    for (int b = 0; b < g.nB(); ++b) pairs *= g.nY();
    if (pairs > static_cast<long double>(budget))
        throw budget_error("classical_value: " + std::to_string(static_cast<double>(pairs)) +
                           " deterministic pairs exceed the enumeration budget; "
                           "reduce the alphabet sizes");

    std::vector<int> f(g.nA(), 0), best_f;
    ClassicalValue best;
    best.value = -1.0;

    // Iterate Alice assignments in lexicographic order; for each, Bob's
    // optimum separates per input, which keeps ties lexicographic as well.
    bool more_f = true;
    while (more_f) {
        std::vector<int> gb(g.nB(), 0);
        double total = 0.0;
        for (int b = 0; b < g.nB(); ++b) {
            double best_val = -1.0;
            int best_y = 0;
            for (int y = 0; y < g.nY(); ++y) {
                double v = 0.0;
                for (int a = 0; a < g.nA(); ++a) v += g.q(a, b) * g.H(a, b, f[a], y);
                if (v > best_val) {
                    best_val = v;
                    best_y = y;
                }
            }
            gb[b] = best_y;
            total += best_val;
        }
        if (total > best.value) {
            best.value = total;
            best.alice_assignment = f;
            best.bob_assignment = gb;
        }
        // next f in lexicographic order
        int pos = g.nA() - 1;
        while (pos >= 0) {
            if (++f[pos] < g.nX()) break;
            f[pos] = 0;
            --pos;
        }
        more_f = pos >= 0;
    }
    return best;
}

Game chsh() {
    const int n = 2;
    std::vector<double> q(4, 0.25);
    std::vector<double> H(16, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y)
                    if ((x ^ y) == (a & b)) H[((a * n + b) * n + x) * n + y] = 1.0;
    return Game(2, 2, 2, 2, std::move(q), std::move(H));
}

Correlation pr_box() {
    const int n = 2;
    std::vector<double> p(16, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int x = 0; x < n; ++x)
                for (int y = 0; y < n; ++y)
                    if ((x ^ y) == (a & b)) p[((a * n + b) * n + x) * n + y] = 0.5;
    return Correlation(2, 2, 2, 2, std::move(p));
}

} // namespace locert
