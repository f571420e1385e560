#include "locert/sweep.hpp"

#include <cmath>
#include <limits>

#include "locert/serialization.hpp"

namespace locert {

SweepCheck sweep_check_from_name(const std::string &name) {
    if (name == "disturbance") return SweepCheck::disturbance;
    if (name == "declassical") return SweepCheck::declassical;
    if (name == "theorem") return SweepCheck::theorem;
    throw validation_error("unknown sweep check \"" + name +
                           "\" (expected disturbance, declassical or theorem)");
}

std::string sweep_check_name(SweepCheck c) {
    switch (c) {
    case SweepCheck::disturbance: return "disturbance";
    case SweepCheck::declassical: return "declassical";
    default: return "theorem";
    }
}

namespace {

constexpr std::size_t kMaxStoredFailures = 5;

struct Recorder {
    const SweepOptions &opts;
    SweepResult &result;
    const nlohmann::json *instance = nullptr;
    std::uint64_t trial = 0;

    // One inequality lhs <= rhs; the sweep applies the rhs scale and slack.
    void check(const std::string &name, double lhs, double rhs) {
        const double scaled = opts.rhs_scale * rhs + opts.check_tol;
        const double margin = scaled - lhs;
        if (margin < result.worst_margin) {
            result.worst_margin = margin;
            result.worst_check = name;
            result.worst_trial = trial;
        }
        if (lhs > scaled) {
            ++result.failures;
            if (result.failure_examples.size() < kMaxStoredFailures && instance)
                result.failure_examples.push_back({trial, name, lhs, scaled, *instance});
        }
    }
};

void disturbance_trial(const SweepOptions &opts, std::uint64_t trial, Recorder &rec) {
    Rng rng = Rng::for_trial(opts.seed, trial);
    const int da = rng.uniform_int(opts.dim_lo, opts.dim_hi);
    const int db = rng.uniform_int(opts.dim_lo, opts.dim_hi);
    const int n_out = rng.uniform_int(2, 4);

    // Every fourth instance is a pure-product state, the regime where the
    // disturbance approaches 2 sqrt(delta) and the bound is nearly tight.
    DensityOperator lambda = (trial % 4 == 3)
                                 ? DensityOperator::unchecked(
                                       tensor(random_pure_density(da, rng).matrix(),
                                              random_density(db, rng).matrix()))
                                 : random_density(da * db, rng);
    std::vector<HermitianOperator> f = random_projective_measurement(da, n_out, rng);

    DisturbanceResult res = measurement_disturbance(lambda, da, db, f, /*tol=*/0.0);

    nlohmann::json inst{{"type", "disturbance_instance"},
                        {"dA", da},
                        {"dB", db},
                        {"lambda", matrix_to_json(lambda.matrix())},
                        {"f", nlohmann::json::array()}};
    for (const auto &e : f) inst["f"].push_back(matrix_to_json(e.matrix()));
    rec.instance = &inst;
    rec.check("disturbance_le_2sqrtdelta_plus_delta", res.disturbance, res.bound);
    rec.instance = nullptr;
}

void declassical_trial(const SweepOptions &opts, std::uint64_t trial, Recorder &rec,
                       const Game &game, double omega_c) {
    Rng rng = Rng::for_trial(opts.seed, trial);
    StrategyShape shape;
    shape.dD = rng.uniform_int(opts.dim_lo, opts.dim_hi);
    shape.dE = rng.uniform_int(opts.dim_lo, opts.dim_hi);
    shape.projective_alice = true;
    shape.projective_bob = trial % 2 == 0;
    Strategy s = random_strategy(shape, rng);

    DeclassicalizeResult d = declassicalize(game, s, opts.solver_tol, opts.max_dim);
    const double pbar_score = score(game, d.pbar);

    nlohmann::json inst{{"type", "declassical_instance"},
                        {"game", game_to_json(game)},
                        {"strategy", strategy_to_json(s)}};
    rec.instance = &inst;
    rec.check("distance_le_sqrt3delta_nA", d.distance, d.bound);
    rec.check("pbar_score_le_omega_c", pbar_score, omega_c);
    rec.instance = nullptr;
}

void theorem_trial(const SweepOptions &opts, std::uint64_t trial, Recorder &rec,
                   const Game &chsh_game) {
    Rng rng = Rng::for_trial(opts.seed, trial);
    const Game game =
        trial % 3 == 2 ? random_complete_support_game(2, 2, 2, 2, rng) : chsh_game;
    StrategyShape shape;
    shape.dD = rng.uniform_int(opts.dim_lo, opts.dim_hi);
    shape.dE = rng.uniform_int(opts.dim_lo, opts.dim_hi);
    shape.projective_alice = trial % 2 == 0;
    shape.projective_bob = false;
    Strategy s = random_strategy(shape, rng);

    TheoremCheckOptions topts;
    topts.tol = 0.0;
    topts.max_dim = opts.max_dim;
    CertificationReport rep = theorem_gap_check(game, s, topts);

    nlohmann::json inst{{"type", "theorem_instance"},
                        {"game", game_to_json(game)},
                        {"strategy", strategy_to_json(s)}};
    rec.instance = &inst;
    const double eps_eff = std::max(rep.epsilon, 0.0) + rep.dist_gap_budget;
    rec.check("gap_le_cg_sqrt_epsilon", rep.score - rep.omega_c,
              rep.c_g * std::sqrt(eps_eff));
    if (rep.declassical) {
        rec.check("distance_le_sqrt3delta_nA", rep.declassical->distance,
                  rep.declassical->bound);
        rec.check("pbar_score_le_omega_c", rep.declassical->pbar_score, rep.omega_c);
    }
    rec.instance = nullptr;
}

} // namespace

SweepResult run_sweep(const SweepOptions &opts) {
    if (opts.trials < 0) throw validation_error("run_sweep: negative trial count");
    SweepResult result;
    result.trials = opts.trials;
    result.worst_margin = std::numeric_limits<double>::infinity();

    const Game chsh_game = chsh();
    const double chsh_omega_c = classical_value(chsh_game).value;

    Recorder rec{opts, result};
    for (std::uint64_t t = 0; t < static_cast<std::uint64_t>(opts.trials); ++t) {
        rec.trial = t;
        switch (opts.check) {
        case SweepCheck::disturbance:
            disturbance_trial(opts, t, rec);
            break;
        case SweepCheck::declassical:
            declassical_trial(opts, t, rec, chsh_game, chsh_omega_c);
            break;
        case SweepCheck::theorem:
            theorem_trial(opts, t, rec, chsh_game);
            break;
        }
    }
    if (opts.trials == 0) result.worst_margin = 0.0;
    return result;
}

} // namespace locert
