#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "locert/serialization.hpp"
#include "locert/sweep.hpp"

namespace {

// Exit codes: 0 all checks pass, 1 a certified bound failed, 2 parse or
// validation error, 3 shape mismatch, 4 budget exceeded.
enum ExitCode { kOk = 0, kBoundFailed = 1, kParseError = 2, kShapeError = 3, kBudgetError = 4 };

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void parse_dims(const std::string &spec, int &lo, int &hi) {
    const auto dash = spec.find('-');
    try {
        if (dash == std::string::npos) {
            lo = hi = std::stoi(spec);
        } else {
            lo = std::stoi(spec.substr(0, dash));
            hi = std::stoi(spec.substr(dash + 1));
        }
    } catch (const std::exception &) {
        throw locert::validation_error("bad --dims spec \"" + spec + "\", expected e.g. 2-4");
    }
    if (lo < 1 || hi < lo) throw locert::validation_error("bad --dims range");
}

void emit(const std::string &out_path, const std::string &text) {
    if (out_path.empty())
        std::cout << text;
    else
        locert::write_text_file(out_path, text);
}

int cmd_classical_value(const std::string &game_path) {
    locert::Game g = locert::load_game(game_path);
    locert::ClassicalValue cv = locert::classical_value(g);
    std::cout << "omega_c = " << fmt17(cv.value) << "\n";
    std::cout << "alice assignment (a -> x):";
    for (int x : cv.alice_assignment) std::cout << " " << x;
    std::cout << "\nbob assignment (b -> y):";
    for (int y : cv.bob_assignment) std::cout << " " << y;
    std::cout << "\n";
    return kOk;
}

void report_povm_residuals(const locert::Strategy &s) {
    const locert::PovmResiduals &a = s.alice.residuals();
    const locert::PovmResiduals &b = s.bob.residuals();
    std::cerr << "loaded strategy: alice POVM residuals completeness=" << fmt17(a.completeness)
              << " min_eig=" << fmt17(a.min_eigenvalue)
              << (s.alice.is_projective() ? " (projective)" : "")
              << "; bob completeness=" << fmt17(b.completeness)
              << " min_eig=" << fmt17(b.min_eigenvalue)
              << (s.bob.is_projective() ? " (projective)" : "") << "\n";
}

int cmd_analyze(const std::string &game_path, const std::string &strategy_path, double tol,
                std::uint64_t seed, const std::string &out_path, int max_dim,
                const std::string &fg_mode) {
    locert::Game g = locert::load_game(game_path);
    locert::Strategy s = locert::load_strategy(strategy_path);
    report_povm_residuals(s);

    locert::TheoremCheckOptions opts;
    opts.tol = tol;
    opts.max_dim = max_dim;
    opts.fg_mode = fg_mode == "literal" ? locert::FgMode::literal : locert::FgMode::theorem;
    locert::CertificationReport rep = locert::theorem_gap_check(g, s, opts);

    emit(out_path, locert::canonical_dump(locert::report_to_json(rep, seed)));
    return rep.all_checks_hold() && rep.epsilon_certified ? kOk : kBoundFailed;
}

int cmd_declassicalize(const std::string &game_path, const std::string &strategy_path,
                       double tol, const std::string &out_path, int max_dim) {
    locert::Game g = locert::load_game(game_path);
    locert::Strategy s = locert::load_strategy(strategy_path);
    report_povm_residuals(s);
    if (!s.alice.is_projective()) s = locert::projectivize(s, max_dim);

    locert::DeclassicalizeResult d = locert::declassicalize(g, s, tol, max_dim);
    emit(out_path, locert::canonical_dump(locert::correlation_to_json(d.pbar)));
    std::cerr << "distance = " << fmt17(d.distance) << "  bound = " << fmt17(d.bound)
              << "  delta = " << fmt17(d.delta) << "  holds = " << (d.bound_holds ? "yes" : "no")
              << "\n";
    return d.bound_holds ? kOk : kBoundFailed;
}

int cmd_dist(const std::string &instance_path, double tol) {
    locert::DiscriminationInstance inst = locert::load_instance(instance_path);
    locert::DiscriminationResult r = locert::dist(inst, tol);
    std::cout << "dist = " << fmt17(r.value) << "\n";
    std::cout << "primal_dual_gap = " << fmt17(r.primal_dual_gap) << "\n";
    std::cout << "certified = " << (r.certified ? "yes" : "no") << "\n";
    return r.certified ? kOk : kBoundFailed;
}

int cmd_sweep(const locert::SweepOptions &opts, const std::string &out_path) {
    locert::SweepResult res = locert::run_sweep(opts);
    if (res.trials == 0)
        std::cout << "warning: 0 trials requested, vacuous pass\n";
    std::cout << "check=" << locert::sweep_check_name(opts.check) << " trials=" << res.trials
              << " failures=" << res.failures;
    if (res.trials > 0)
        std::cout << " worst_margin=" << fmt17(res.worst_margin) << " (" << res.worst_check
                  << ", trial " << res.worst_trial << ")";
    std::cout << "\n";

    if (res.failures > 0 && !res.failure_examples.empty()) {
        const std::string path =
            out_path.empty() ? "counterexample_" + locert::sweep_check_name(opts.check) +
                                   "_trial" + std::to_string(res.failure_examples[0].trial) +
                                   ".json"
                             : out_path;
        nlohmann::json report{{"type", "sweep_counterexamples"},
                              {"check", locert::sweep_check_name(opts.check)},
                              {"seed", opts.seed},
                              {"rhs_scale", opts.rhs_scale},
                              {"failures", nlohmann::json::array()}};
        for (const auto &f : res.failure_examples)
            report["failures"].push_back(nlohmann::json{{"trial", f.trial},
                                                        {"check", f.check_name},
                                                        {"lhs", f.lhs},
                                                        {"rhs", f.rhs},
                                                        {"instance", f.instance}});
        locert::write_text_file(path, locert::canonical_dump(report));
        std::cout << "counterexamples written to " << path << "\n";
    }
    return res.failures == 0 ? kOk : kBoundFailed;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"locert: nonlocal games, guessing bounds and declassicalization checks"};
    app.require_subcommand(1);

    std::string game_path, strategy_path, instance_path, out_path;
    double tol = locert::kDefaultDistTol;
    std::uint64_t seed = 1;
    int max_dim = locert::kDefaultMaxDim;
    std::string fg_mode = "theorem";

    auto *cv = app.add_subcommand("classical-value", "exact classical value of a game file");
    cv->add_option("game", game_path, "game JSON file")->required();

    auto *an = app.add_subcommand("analyze", "full certification report for (game, strategy)");
    an->add_option("game", game_path, "game JSON file")->required();
    an->add_option("strategy", strategy_path, "strategy JSON file")->required();
    an->add_option("--tol", tol, "discrimination solver tolerance");
    an->add_option("--seed", seed, "seed recorded in the report");
    an->add_option("--out", out_path, "write the report here instead of stdout");
    an->add_option("--max-dim", max_dim, "operator dimension cap");
    an->add_option("--fg-mode", fg_mode, "guess bound form: theorem | literal")
        ->check(CLI::IsMember({"theorem", "literal"}));

    auto *de = app.add_subcommand("declassicalize",
                                  "emit the copied-register classical correlation");
    de->add_option("game", game_path, "game JSON file")->required();
    de->add_option("strategy", strategy_path, "strategy JSON file")->required();
    de->add_option("--tol", tol, "discrimination solver tolerance");
    de->add_option("--out", out_path, "write the correlation here instead of stdout");
    de->add_option("--max-dim", max_dim, "operator dimension cap");

    auto *di = app.add_subcommand("dist", "optimal discrimination value of an instance file");
    di->add_option("instance", instance_path, "instance JSON file")->required();
    di->add_option("--tol", tol, "primal-dual gap target");

    locert::SweepOptions sweep_opts;
    std::string check_name = "disturbance", dims_spec = "2-4";
    auto *sw = app.add_subcommand("sweep", "seeded randomized verification of a bound family");
    sw->add_option("--check", check_name, "disturbance | declassical | theorem")->required();
    sw->add_option("--trials", sweep_opts.trials, "number of random instances");
    sw->add_option("--seed", sweep_opts.seed, "master seed");
    sw->add_option("--dims", dims_spec, "per-factor dimension range, e.g. 2-4");
    sw->add_option("--tol", sweep_opts.solver_tol, "discrimination solver tolerance");
    sw->add_option("--check-tol", sweep_opts.check_tol, "slack added to each bound");
    sw->add_option("--rhs-scale", sweep_opts.rhs_scale,
                   "scale every right-hand side (mutation self-test knob)");
    sw->add_option("--max-dim", sweep_opts.max_dim, "operator dimension cap");
    sw->add_option("--out", out_path, "counterexample file path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cv->parsed()) return cmd_classical_value(game_path);
        if (an->parsed())
            return cmd_analyze(game_path, strategy_path, tol, seed, out_path, max_dim, fg_mode);
        if (de->parsed())
            return cmd_declassicalize(game_path, strategy_path, tol, out_path, max_dim);
        if (di->parsed()) return cmd_dist(instance_path, tol);
        if (sw->parsed()) {
            sweep_opts.check = locert::sweep_check_from_name(check_name);
            parse_dims(dims_spec, sweep_opts.dim_lo, sweep_opts.dim_hi);
            return cmd_sweep(sweep_opts, out_path);
        }
    } catch (const locert::parse_error &e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParseError;
    } catch (const locert::shape_error &e) {
        std::cerr << "shape error: " << e.what() << "\n";
        return kShapeError;
    } catch (const locert::sizing_error &e) {
        std::cerr << "size budget error: " << e.what() << "\n";
        return kBudgetError;
    } catch (const locert::budget_error &e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return kBudgetError;
    } catch (const locert::validation_error &e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kParseError;
    } catch (const locert::error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParseError;
    }
    return kOk;
}
