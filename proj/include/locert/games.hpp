#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "locert/config.hpp"
#include "locert/errors.hpp"

namespace locert {

// Two-player game: referee samples inputs (a,b) ~ q, players answer (x,y),
// score H(a,b,x,y) in [0,1].  Input alphabets are index ranges 0..n-1 whose
// order is fixed by the defining file; the declassicalization construction
// depends on Alice's order, so it is part of the value.
class Game {
public:
    Game(int nA, int nB, int nX, int nY, std::vector<double> q, std::vector<double> H);

    int nA() const { return nA_; }
    int nB() const { return nB_; }
    int nX() const { return nX_; }
    int nY() const { return nY_; }

    double q(int a, int b) const { return q_[a * nB_ + b]; }
    double H(int a, int b, int x, int y) const {
        return H_[((static_cast<std::size_t>(a) * nB_ + b) * nX_ + x) * nY_ + y];
    }

    // Marginals q(a) = sum_b q(a,b), q(b) = sum_a q(a,b).
    double q_alice(int a) const;
    double q_bob(int b) const;

    bool complete_support() const { return complete_support_; }

private:
    int nA_, nB_, nX_, nY_;
    std::vector<double> q_; // [a][b]
    std::vector<double> H_; // [a][b][x][y]
    bool complete_support_;
};

// Conditional output distribution p(x,y | a,b), stored [a][b][x][y].
class Correlation {
public:
    Correlation(int nA, int nB, int nX, int nY, std::vector<double> p);

    int nA() const { return nA_; }
    int nB() const { return nB_; }
    int nX() const { return nX_; }
    int nY() const { return nY_; }

    double p(int a, int b, int x, int y) const {
        return p_[((static_cast<std::size_t>(a) * nB_ + b) * nX_ + x) * nY_ + y];
    }
    const std::vector<double> &raw() const { return p_; }

private:
    int nA_, nB_, nX_, nY_;
    std::vector<double> p_;
};

// sum_{abxy} q(a,b) H(a,b,x,y) p(x,y|a,b)
double score(const Game &g, const Correlation &c);

struct Marginals {
    std::vector<double> alice; // [a][x], averaged over Bob's inputs
    std::vector<double> bob;   // [b][y], averaged over Alice's inputs
};

Marginals marginals(const Correlation &c);

struct NonSignalingCheck {
    bool ok = false;
    double max_violation = 0.0;
};

// Alice's marginal must not depend on b, and symmetrically for Bob.
NonSignalingCheck is_nonsignaling(const Correlation &c, double tol = 1e-9);

struct ClassicalValue {
    double value = 0.0;
    std::vector<int> alice_assignment; // a -> x
    std::vector<int> bob_assignment;   // b -> y
};

// Exact classical value by enumerating all deterministic strategy pairs,
// lexicographically smallest maximizer reported.  Throws budget_error when
// nX^nA * nY^nB exceeds the budget.
ClassicalValue classical_value(const Game &g,
                               std::uint64_t budget = kDefaultEnumerationBudget);

// Score of the deterministic pair (a -> x, b -> y).
double deterministic_score(const Game &g, const std::vector<int> &alice_assignment,
                           const std::vector<int> &bob_assignment);

// Canonical instances: the CHSH game (uniform inputs, win iff x + y = a AND b
// mod 2) and the PR box that wins it with certainty.
Game chsh();
Correlation pr_box();

} // namespace locert
