#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "locert/certify.hpp"
#include "locert/serialization.hpp"

namespace py = pybind11;
using namespace locert;

namespace {

using CxArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;
using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

ComplexMatrix to_matrix(const CxArray &arr) {
    if (arr.ndim() != 2) throw shape_error("expected a 2-d complex array");
    ComplexMatrix m(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)));
    auto r = arr.unchecked<2>();
    for (py::ssize_t i = 0; i < arr.shape(0); ++i)
        for (py::ssize_t j = 0; j < arr.shape(1); ++j)
            m(static_cast<int>(i), static_cast<int>(j)) = r(i, j);
    return m;
}

py::array_t<std::complex<double>> to_numpy(const ComplexMatrix &m) {
    py::array_t<std::complex<double>> out({m.rows(), m.cols()});
    auto w = out.mutable_unchecked<2>();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) w(i, j) = m(i, j);
    return out;
}

std::vector<double> flatten(const RealArray &arr, std::initializer_list<int> shape,
                            const char *what) {
    if (arr.ndim() != static_cast<py::ssize_t>(shape.size()))
        throw shape_error(std::string(what) + ": wrong rank");
    py::ssize_t expected = 1;
    int axis = 0;
    for (int s : shape) {
        if (arr.shape(axis) != s) throw shape_error(std::string(what) + ": wrong shape");
        expected *= s;
        ++axis;
    }
    std::vector<double> out(static_cast<std::size_t>(expected));
    std::memcpy(out.data(), arr.data(), sizeof(double) * out.size());
    return out;
}

Game make_game(int nA, int nB, int nX, int nY, const RealArray &q, const RealArray &H) {
    return Game(nA, nB, nX, nY, flatten(q, {nA, nB}, "q"), flatten(H, {nA, nB, nX, nY}, "H"));
}

Strategy make_strategy(int dD, int dE, const std::vector<std::vector<CxArray>> &R,
                       const std::vector<std::vector<CxArray>> &S, const CxArray &gamma) {
    auto family = [](const std::vector<std::vector<CxArray>> &src, int dim) {
        std::vector<std::vector<HermitianOperator>> out;
        for (const auto &setting : src) {
            std::vector<HermitianOperator> elems;
            for (const auto &arr : setting) elems.emplace_back(to_matrix(arr));
            out.push_back(std::move(elems));
        }
        return PovmFamily(dim, std::move(out));
    };
    return Strategy(dD, dE, family(R, dD), family(S, dE), DensityOperator(to_matrix(gamma)));
}

FgMode fg_mode_from(const std::string &name) {
    if (name == "theorem") return FgMode::theorem;
    if (name == "literal") return FgMode::literal;
    throw validation_error("fg_mode must be 'theorem' or 'literal'");
}

py::array_t<double> real_array(const std::vector<double> &v, std::vector<py::ssize_t> shape) {
    py::array_t<double> out(shape);
    std::memcpy(out.mutable_data(), v.data(), sizeof(double) * v.size());
    return out;
}

DiscriminationInstance make_instance(const std::vector<CxArray> &states) {
    std::vector<HermitianOperator> ops;
    ops.reserve(states.size());
    for (const auto &arr : states) ops.emplace_back(to_matrix(arr));
    return DiscriminationInstance(std::move(ops));
}

} // namespace

PYBIND11_MODULE(_locert, m) {
    m.doc() = "Nonlocal games, guessing bounds, state discrimination and the "
              "declassicalization construction";

    py::register_exception<locert::error>(m, "Error", PyExc_ValueError);

    // ---- linalg -------------------------------------------------------------
    m.def(
        "tensor",
        [](const CxArray &a, const CxArray &b, int max_dim) {
            return to_numpy(tensor(to_matrix(a), to_matrix(b), max_dim));
        },
        py::arg("a"), py::arg("b"), py::arg("max_dim") = kDefaultMaxDim,
        "Kronecker product, row-major index convention");
    m.def(
        "partial_trace",
        [](const CxArray &mat, const std::vector<int> &dims, const std::vector<int> &keep) {
            return to_numpy(partial_trace(to_matrix(mat), dims, keep));
        },
        py::arg("m"), py::arg("dims"), py::arg("keep"));
    m.def(
        "herm_eig",
        [](const CxArray &h) {
            EigResult e = herm_eig(HermitianOperator(to_matrix(h)));
            return py::make_tuple(
                real_array(e.values, {static_cast<py::ssize_t>(e.values.size())}),
                to_numpy(e.vectors));
        },
        py::arg("h"), "ascending eigenvalues and a unitary of eigenvectors");
    m.def(
        "psd_sqrt",
        [](const CxArray &p) { return to_numpy(psd_sqrt(HermitianOperator(to_matrix(p))).matrix()); },
        py::arg("p"));
    m.def(
        "trace_norm",
        [](const CxArray &h) { return trace_norm(HermitianOperator(to_matrix(h))); },
        py::arg("h"));

    // ---- games --------------------------------------------------------------
    py::class_<Game>(m, "Game")
        .def(py::init(&make_game), py::arg("nA"), py::arg("nB"), py::arg("nX"), py::arg("nY"),
             py::arg("q"), py::arg("H"))
        .def_property_readonly("nA", &Game::nA)
        .def_property_readonly("nB", &Game::nB)
        .def_property_readonly("nX", &Game::nX)
        .def_property_readonly("nY", &Game::nY)
        .def_property_readonly("complete_support", &Game::complete_support)
        .def("q", &Game::q, py::arg("a"), py::arg("b"))
        .def("H", &Game::H, py::arg("a"), py::arg("b"), py::arg("x"), py::arg("y"))
        .def("to_json", [](const Game &g) { return canonical_dump(game_to_json(g)); });

    py::class_<Correlation>(m, "Correlation")
        .def(py::init([](int nA, int nB, int nX, int nY, const RealArray &p) {
                 return Correlation(nA, nB, nX, nY, flatten(p, {nA, nB, nX, nY}, "p"));
             }),
             py::arg("nA"), py::arg("nB"), py::arg("nX"), py::arg("nY"), py::arg("p"))
        .def_property_readonly("nA", &Correlation::nA)
        .def_property_readonly("nB", &Correlation::nB)
        .def_property_readonly("nX", &Correlation::nX)
        .def_property_readonly("nY", &Correlation::nY)
        .def("p", &Correlation::p, py::arg("a"), py::arg("b"), py::arg("x"), py::arg("y"))
        .def("as_array", [](const Correlation &c) {
            return real_array(c.raw(), {c.nA(), c.nB(), c.nX(), c.nY()});
        });

    m.def("chsh", &chsh);
    m.def("pr_box", &pr_box);
    m.def("score", &score, py::arg("game"), py::arg("correlation"));
    m.def(
        "marginals",
        [](const Correlation &c) {
            Marginals mg = marginals(c);
            return py::make_tuple(real_array(mg.alice, {c.nA(), c.nX()}),
                                  real_array(mg.bob, {c.nB(), c.nY()}));
        },
        py::arg("correlation"));
    m.def(
        "is_nonsignaling",
        [](const Correlation &c, double tol) {
            NonSignalingCheck r = is_nonsignaling(c, tol);
            return py::make_tuple(r.ok, r.max_violation);
        },
        py::arg("correlation"), py::arg("tol") = 1e-9);
    m.def(
        "classical_value",
        [](const Game &g) {
            ClassicalValue cv = classical_value(g);
            return py::make_tuple(cv.value, cv.alice_assignment, cv.bob_assignment);
        },
        py::arg("game"), "exact deterministic maximum with its maximizer");

    // ---- strategies ----------------------------------------------------------
    py::class_<Strategy>(m, "Strategy")
        .def(py::init(&make_strategy), py::arg("dD"), py::arg("dE"), py::arg("R"), py::arg("S"),
             py::arg("gamma"))
        .def_readonly("dD", &Strategy::dD)
        .def_readonly("dE", &Strategy::dE)
        .def_property_readonly("nA", &Strategy::nA)
        .def_property_readonly("nB", &Strategy::nB)
        .def_property_readonly("nX", &Strategy::nX)
        .def_property_readonly("nY", &Strategy::nY)
        .def_property_readonly("alice_projective",
                               [](const Strategy &s) { return s.alice.is_projective(); })
        .def_property_readonly("bob_projective",
                               [](const Strategy &s) { return s.bob.is_projective(); })
        .def("alice_element",
             [](const Strategy &s, int a, int x) { return to_numpy(s.alice.element(a, x).matrix()); },
             py::arg("a"), py::arg("x"))
        .def("bob_element",
             [](const Strategy &s, int b, int y) { return to_numpy(s.bob.element(b, y).matrix()); },
             py::arg("b"), py::arg("y"))
        .def_property_readonly("gamma",
                               [](const Strategy &s) { return to_numpy(s.gamma.matrix()); })
        .def("to_json", [](const Strategy &s) { return canonical_dump(strategy_to_json(s)); });

    m.def("chsh_optimal_strategy", &chsh_optimal_strategy);
    m.def("achieved_correlation", &achieved_correlation, py::arg("strategy"));
    m.def("projectivize", &projectivize, py::arg("strategy"), py::arg("max_dim") = kDefaultMaxDim);
    m.def(
        "second_player_states",
        [](const Strategy &s) {
            SecondPlayerStates sp = second_player_states(s);
            py::list rho, pre;
            for (int a = 0; a < sp.nA; ++a)
                for (int b = 0; b < sp.nB; ++b)
                    for (int x = 0; x < sp.nX; ++x)
                        for (int y = 0; y < sp.nY; ++y)
                            rho.append(
                                py::make_tuple(a, b, x, y, to_numpy(sp.at(a, b, x, y).matrix())));
            for (int a = 0; a < sp.nA; ++a)
                for (int x = 0; x < sp.nX; ++x)
                    pre.append(py::make_tuple(a, x, to_numpy(sp.pre(a, x).matrix())));
            return py::make_tuple(rho, pre);
        },
        py::arg("strategy"),
        "post-measurement states as (a,b,x,y,matrix) tuples plus (a,x,matrix) "
        "pre-measurement states");

    // ---- discrimination -------------------------------------------------------
    py::class_<DiscriminationResult>(m, "DiscriminationResult")
        .def_readonly("value", &DiscriminationResult::value)
        .def_readonly("primal_dual_gap", &DiscriminationResult::primal_dual_gap)
        .def_readonly("certified", &DiscriminationResult::certified)
        .def_readonly("iterations", &DiscriminationResult::iterations)
        .def_property_readonly("povm",
                               [](const DiscriminationResult &r) {
                                   py::list out;
                                   for (const auto &t : r.povm) out.append(to_numpy(t.matrix()));
                                   return out;
                               })
        .def_property_readonly("dual_certificate", [](const DiscriminationResult &r) {
            return to_numpy(r.dual_certificate.matrix());
        });

    m.def(
        "dist",
        [](const std::vector<CxArray> &states, double tol) { return dist(make_instance(states), tol); },
        py::arg("states"), py::arg("tol") = kDefaultDistTol,
        "optimal discrimination weight of PSD, possibly subnormalized states");
    m.def(
        "dist_iterative",
        [](const std::vector<CxArray> &states, double tol) {
            return dist_iterative(make_instance(states), tol);
        },
        py::arg("states"), py::arg("tol") = kDefaultDistTol);
    m.def(
        "pgm_lower_bound",
        [](const std::vector<CxArray> &states) {
            PgmResult r = pgm_lower_bound(make_instance(states));
            py::list povm;
            for (const auto &t : r.povm) povm.append(to_numpy(t.matrix()));
            return py::make_tuple(r.value, povm);
        },
        py::arg("states"));
    m.def(
        "check_dual",
        [](const std::vector<CxArray> &states, const CxArray &y) {
            DualCheck c = check_dual(make_instance(states), HermitianOperator(to_matrix(y)));
            return py::make_tuple(c.feasible, c.max_violation);
        },
        py::arg("states"), py::arg("y"));

    // ---- certify ---------------------------------------------------------------
    py::class_<GuessingAnalysis>(m, "GuessingAnalysis")
        .def_readonly("epsilon", &GuessingAnalysis::epsilon)
        .def_readonly("dist_gap_budget", &GuessingAnalysis::dist_gap_budget)
        .def_readonly("all_certified", &GuessingAnalysis::all_certified)
        .def_readonly("per_input_delta", &GuessingAnalysis::per_input_delta);

    py::class_<DisturbanceResult>(m, "DisturbanceResult")
        .def_readonly("delta", &DisturbanceResult::delta)
        .def_readonly("disturbance", &DisturbanceResult::disturbance)
        .def_readonly("bound", &DisturbanceResult::bound)
        .def_readonly("dist_gap", &DisturbanceResult::dist_gap)
        .def_readonly("bound_holds", &DisturbanceResult::bound_holds);

    py::class_<DeclassicalizeResult>(m, "DeclassicalizeResult")
        .def_readonly("pbar", &DeclassicalizeResult::pbar)
        .def_readonly("distance", &DeclassicalizeResult::distance)
        .def_readonly("bound", &DeclassicalizeResult::bound)
        .def_readonly("delta", &DeclassicalizeResult::delta)
        .def_readonly("dist_gap_budget", &DeclassicalizeResult::dist_gap_budget)
        .def_readonly("bound_holds", &DeclassicalizeResult::bound_holds);

    py::class_<DeclassicalSummary>(m, "DeclassicalSummary")
        .def_readonly("distance", &DeclassicalSummary::distance)
        .def_readonly("bound", &DeclassicalSummary::bound)
        .def_readonly("delta", &DeclassicalSummary::delta)
        .def_readonly("gap_budget", &DeclassicalSummary::gap_budget)
        .def_readonly("bound_holds", &DeclassicalSummary::bound_holds)
        .def_readonly("pbar_score", &DeclassicalSummary::pbar_score)
        .def_readonly("classical_score_holds", &DeclassicalSummary::classical_score_holds);

    py::class_<CertificationReport>(m, "CertificationReport")
        .def_readonly("score", &CertificationReport::score)
        .def_readonly("omega_c", &CertificationReport::omega_c)
        .def_readonly("c_g", &CertificationReport::c_g)
        .def_readonly("epsilon", &CertificationReport::epsilon)
        .def_readonly("theorem_bound_holds", &CertificationReport::theorem_bound_holds)
        .def_readonly("guess_bound", &CertificationReport::guess_bound)
        .def_readonly("dist_gap_budget", &CertificationReport::dist_gap_budget)
        .def_readonly("epsilon_certified", &CertificationReport::epsilon_certified)
        .def_readonly("declassical", &CertificationReport::declassical)
        .def("all_checks_hold", &CertificationReport::all_checks_hold)
        .def(
            "to_json",
            [](const CertificationReport &rep, std::uint64_t seed) {
                return canonical_dump(report_to_json(rep, seed));
            },
            py::arg("seed") = 0);

    m.def("c_g", &c_g, py::arg("game"), "the constant (3/2) sqrt(sum_ab q(b)^2/q(a,b))");
    m.def("guessing_epsilon", &guessing_epsilon, py::arg("game"), py::arg("strategy"),
          py::arg("tol") = kDefaultDistTol);
    m.def("uniform_delta", &uniform_delta, py::arg("strategy"), py::arg("tol") = kDefaultDistTol);
    m.def(
        "measurement_disturbance",
        [](const CxArray &lambda, int dA, int dB, const std::vector<CxArray> &f, double tol) {
            std::vector<HermitianOperator> elems;
            for (const auto &arr : f) elems.emplace_back(to_matrix(arr));
            return measurement_disturbance(DensityOperator(to_matrix(lambda)), dA, dB, elems, tol);
        },
        py::arg("lam"), py::arg("dA"), py::arg("dB"), py::arg("f"), py::arg("tol") = 1e-6);
    m.def("declassicalize", &declassicalize, py::arg("game"), py::arg("strategy"),
          py::arg("tol") = kDefaultDistTol, py::arg("max_dim") = kDefaultMaxDim);
    m.def(
        "theorem_gap_check",
        [](const Game &g, const Strategy &s, double tol, bool run_declassicalize, int max_dim,
           const std::string &fg_mode) {
            TheoremCheckOptions opts;
            opts.tol = tol;
            opts.run_declassicalize = run_declassicalize;
            opts.max_dim = max_dim;
            opts.fg_mode = fg_mode_from(fg_mode);
            return theorem_gap_check(g, s, opts);
        },
        py::arg("game"), py::arg("strategy"), py::arg("tol") = kDefaultDistTol,
        py::arg("run_declassicalize") = true, py::arg("max_dim") = kDefaultMaxDim,
        py::arg("fg_mode") = "theorem");
    m.def(
        "guess_bound",
        [](const Game &g, double w, const std::string &mode) {
            return guess_bound(g, w, fg_mode_from(mode));
        },
        py::arg("game"), py::arg("w"), py::arg("mode") = "theorem");

    // ---- file I/O ---------------------------------------------------------------
    m.def("load_game", &load_game, py::arg("path"));
    m.def("load_strategy", &load_strategy, py::arg("path"));
    m.def("load_correlation", &load_correlation, py::arg("path"));
}
