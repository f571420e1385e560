#pragma once

#include <vector>

#include "locert/games.hpp"
#include "locert/linalg.hpp"

namespace locert {

struct PovmResiduals {
    double min_eigenvalue = 0.0;    // most negative eigenvalue across elements
    double completeness = 0.0;      // max-norm residual of sum-to-identity, worst setting
    double idempotence = 0.0;       // max ||E^2 - E||_max
    double orthogonality = 0.0;     // max ||E_i E_j||_max, i != j within a setting
};

// A family of POVMs, one per measurement setting, on a common space.
class PovmFamily {
public:
    PovmFamily(int dim, std::vector<std::vector<HermitianOperator>> elements);

    int n_settings() const { return static_cast<int>(elements_.size()); }
    int n_outcomes() const { return static_cast<int>(elements_.front().size()); }
    int dim() const { return dim_; }
    bool is_projective() const { return is_projective_; }
    const HermitianOperator &element(int setting, int outcome) const {
        return elements_[setting][outcome];
    }
    const PovmResiduals &residuals() const { return residuals_; }

private:
    int dim_;
    std::vector<std::vector<HermitianOperator>> elements_; // [setting][outcome]
    bool is_projective_;
    PovmResiduals residuals_;
};

// Shared-state quantum strategy: Alice measures on D, Bob on E, with a joint
// density operator on D (x) E.
struct Strategy {
    int dD;
    int dE;
    PovmFamily alice;
    PovmFamily bob;
    DensityOperator gamma;

    Strategy(int dD_, int dE_, PovmFamily alice_, PovmFamily bob_, DensityOperator gamma_);

    int nA() const { return alice.n_settings(); }
    int nB() const { return bob.n_settings(); }
    int nX() const { return alice.n_outcomes(); }
    int nY() const { return bob.n_outcomes(); }
};

// Bob's subnormalized post-measurement states rho[a][b][x][y] (on E, trace
// p(x,y|a,b)) and the pre-measurement states rho_pre[a][x] he holds before
// measuring.
struct SecondPlayerStates {
    int nA, nB, nX, nY, dim;
    std::vector<HermitianOperator> rho;     // [a][b][x][y]
    std::vector<HermitianOperator> rho_pre; // [a][x]

    const HermitianOperator &at(int a, int b, int x, int y) const {
        return rho[((static_cast<std::size_t>(a) * nB + b) * nX + x) * nY + y];
    }
    const HermitianOperator &pre(int a, int x) const { return rho_pre[a * nX + x]; }
};

// p(x,y|a,b) = Tr[(R_a^x (x) S_b^y) gamma]
Correlation achieved_correlation(const Strategy &s);

SecondPlayerStates second_player_states(const Strategy &s);

// Naimark dilation of Alice's POVMs to a projective family on
// D (x) C^{nX (x) nA}: one fresh nX-dimensional ancilla per setting,
// isometry |psi>|0> -> sum_x (sqrt(R_a^x)|psi>)|x> completed to a unitary by
// Gram-Schmidt over standard basis vectors in index order.  The achieved
// correlation is preserved; Bob is untouched.
Strategy projectivize(const Strategy &s, int max_dim = kDefaultMaxDim);

// The optimal CHSH strategy: maximally entangled pair, Alice measures at
// angles {0, pi/4}, Bob at {pi/8, -pi/8}.  Scores cos^2(pi/8).
Strategy chsh_optimal_strategy();

// Rank-1 projector onto cos(theta)|0> + sin(theta)|1>.
ComplexMatrix qubit_projector(double theta);

// Residuals of an arbitrary element list against the projective-measurement
// requirements (PSD, completeness, idempotence, orthogonality).
PovmResiduals measurement_residuals(int dim, const std::vector<HermitianOperator> &elements);

} // namespace locert
