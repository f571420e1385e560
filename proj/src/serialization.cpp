#include "locert/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace locert {

namespace {

void dump_number(std::string &out, const json &j) {
    if (j.is_number_integer()) {
        out += std::to_string(j.get<long long>());
        return;
    }
    if (j.is_number_unsigned()) {
        out += std::to_string(j.get<unsigned long long>());
        return;
    }
    double v = j.get<double>();
    if (v == 0.0) v = 0.0; // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

void dump_value(std::string &out, const json &j, int depth) {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    const std::string pad_in(static_cast<std::size_t>(depth + 1) * 2, ' ');
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        std::size_t i = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++i) {
            out += pad_in;
            out += json(it.key()).dump();
            out += ": ";
            dump_value(out, it.value(), depth + 1);
            if (i + 1 < j.size()) out += ",";
            out += "\n";
        }
        out += pad + "}";
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        // Scalar-only arrays stay on one line; nested ones get a line each.
        bool flat = true;
        for (const auto &e : j)
            if (e.is_structured()) flat = false;
        if (flat) {
            out += "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                dump_value(out, j[i], depth);
                if (i + 1 < j.size()) out += ", ";
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            out += pad_in;
            dump_value(out, j[i], depth + 1);
            if (i + 1 < j.size()) out += ",";
            out += "\n";
        }
        out += pad + "]";
        return;
    }
    case json::value_t::string:
        out += j.dump();
        return;
    case json::value_t::boolean:
        out += j.get<bool>() ? "true" : "false";
        return;
    case json::value_t::null:
        out += "null";
        return;
    default:
        dump_number(out, j);
        return;
    }
}

double require_number(const json &j, const char *what) {
    if (!j.is_number()) throw parse_error(std::string("expected a number for ") + what);
    return j.get<double>();
}

int require_positive_int(const json &j, const char *what) {
    if (!j.is_number_integer() || j.get<long long>() <= 0)
        throw parse_error(std::string("expected a positive integer for ") + what);
    return static_cast<int>(j.get<long long>());
}

const json &require_field(const json &j, const char *key) {
    auto it = j.find(key);
    if (it == j.end()) throw parse_error(std::string("missing field \"") + key + "\"");
    return *it;
}

} // namespace

std::string canonical_dump(const json &j) {
    std::string out;
    dump_value(out, j, 0);
    out += "\n";
    return out;
}

json matrix_to_json(const ComplexMatrix &m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c)
            row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const json &j) {
    if (!j.is_array() || j.empty()) throw parse_error("matrix must be a nonempty array of rows");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    ComplexMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const json &row = j[r];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            throw parse_error("matrix rows have inconsistent lengths");
        for (int c = 0; c < cols; ++c) {
            const json &e = row[c];
            if (!e.is_array() || e.size() != 2)
                throw parse_error("matrix entries must be [re, im] pairs");
            m(r, c) = cx(require_number(e[0], "matrix entry"),
                         require_number(e[1], "matrix entry"));
        }
    }
    m.check_finite();
    return m;
}

json game_to_json(const Game &g) {
    json q = json::array();
    for (int a = 0; a < g.nA(); ++a) {
        json row = json::array();
        for (int b = 0; b < g.nB(); ++b) row.push_back(g.q(a, b));
        q.push_back(std::move(row));
    }
    json h = json::array();
    for (int a = 0; a < g.nA(); ++a) {
        json ha = json::array();
        for (int b = 0; b < g.nB(); ++b) {
            json hb = json::array();
            for (int x = 0; x < g.nX(); ++x) {
                json hx = json::array();
                for (int y = 0; y < g.nY(); ++y) hx.push_back(g.H(a, b, x, y));
                hb.push_back(std::move(hx));
            }
            ha.push_back(std::move(hb));
        }
        h.push_back(std::move(ha));
    }
    return json{{"type", "game"}, {"nA", g.nA()}, {"nB", g.nB()}, {"nX", g.nX()},
                {"nY", g.nY()}, {"q", std::move(q)}, {"H", std::move(h)}};
}

Game game_from_json(const json &j) {
    const int nA = require_positive_int(require_field(j, "nA"), "nA");
    const int nB = require_positive_int(require_field(j, "nB"), "nB");
    const int nX = require_positive_int(require_field(j, "nX"), "nX");
    const int nY = require_positive_int(require_field(j, "nY"), "nY");
    const json &q = require_field(j, "q");
    const json &h = require_field(j, "H");

    std::vector<double> qflat;
    qflat.reserve(static_cast<std::size_t>(nA) * nB);
    if (!q.is_array() || static_cast<int>(q.size()) != nA)
        throw parse_error("q must be an nA x nB array");
    for (const json &row : q) {
        if (!row.is_array() || static_cast<int>(row.size()) != nB)
            throw parse_error("q must be an nA x nB array");
        for (const json &v : row) qflat.push_back(require_number(v, "q"));
    }

    std::vector<double> hflat;
    hflat.reserve(static_cast<std::size_t>(nA) * nB * nX * nY);
    if (!h.is_array() || static_cast<int>(h.size()) != nA)
        throw parse_error("H must be an nA x nB x nX x nY array");
    for (const json &ha : h) {
        if (!ha.is_array() || static_cast<int>(ha.size()) != nB)
            throw parse_error("H has a wrong nB extent");
        for (const json &hb : ha) {
            if (!hb.is_array() || static_cast<int>(hb.size()) != nX)
                throw parse_error("H has a wrong nX extent");
            for (const json &hx : hb) {
                if (!hx.is_array() || static_cast<int>(hx.size()) != nY)
                    throw parse_error("H has a wrong nY extent");
                for (const json &v : hx) hflat.push_back(require_number(v, "H"));
            }
        }
    }
    return Game(nA, nB, nX, nY, std::move(qflat), std::move(hflat));
}

json correlation_to_json(const Correlation &c) {
    json p = json::array();
    for (int a = 0; a < c.nA(); ++a) {
        json pa = json::array();
        for (int b = 0; b < c.nB(); ++b) {
            json pb = json::array();
            for (int x = 0; x < c.nX(); ++x) {
                json px = json::array();
                for (int y = 0; y < c.nY(); ++y) px.push_back(c.p(a, b, x, y));
                pb.push_back(std::move(px));
            }
            pa.push_back(std::move(pb));
        }
        p.push_back(std::move(pa));
    }
    return json{{"type", "correlation"}, {"nA", c.nA()}, {"nB", c.nB()}, {"nX", c.nX()},
                {"nY", c.nY()}, {"p", std::move(p)}};
}

Correlation correlation_from_json(const json &j) {
    const int nA = require_positive_int(require_field(j, "nA"), "nA");
    const int nB = require_positive_int(require_field(j, "nB"), "nB");
    const int nX = require_positive_int(require_field(j, "nX"), "nX");
    const int nY = require_positive_int(require_field(j, "nY"), "nY");
    const json &p = require_field(j, "p");
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(nA) * nB * nX * nY);
    if (!p.is_array() || static_cast<int>(p.size()) != nA)
        throw parse_error("p must be an nA x nB x nX x nY array");
    for (const json &pa : p)
        for (const json &pb : pa)
            for (const json &px : pb)
                for (const json &v : px) flat.push_back(require_number(v, "p"));
    if (flat.size() != static_cast<std::size_t>(nA) * nB * nX * nY)
        throw parse_error("p has a wrong number of entries");
    return Correlation(nA, nB, nX, nY, std::move(flat));
}

json strategy_to_json(const Strategy &s) {
    json r = json::array();
    for (int a = 0; a < s.nA(); ++a) {
        json by_x = json::array();
        for (int x = 0; x < s.nX(); ++x) by_x.push_back(matrix_to_json(s.alice.element(a, x).matrix()));
        r.push_back(std::move(by_x));
    }
    json t = json::array();
    for (int b = 0; b < s.nB(); ++b) {
        json by_y = json::array();
        for (int y = 0; y < s.nY(); ++y) by_y.push_back(matrix_to_json(s.bob.element(b, y).matrix()));
        t.push_back(std::move(by_y));
    }
    return json{{"type", "strategy"}, {"dD", s.dD}, {"dE", s.dE}, {"R", std::move(r)},
                {"S", std::move(t)}, {"gamma", matrix_to_json(s.gamma.matrix())}};
}

namespace {

std::vector<std::vector<HermitianOperator>> povm_family_from_json(const json &j, int dim,
                                                                  const char *who) {
    if (!j.is_array() || j.empty())
        throw parse_error(std::string(who) + " must be a nonempty array of settings");
    std::vector<std::vector<HermitianOperator>> out;
    for (const json &setting : j) {
        if (!setting.is_array() || setting.empty())
            throw parse_error(std::string(who) + " settings must be nonempty arrays");
        std::vector<HermitianOperator> elems;
        for (const json &m : setting) {
            ComplexMatrix mat = matrix_from_json(m);
            if (mat.rows() != dim || mat.cols() != dim)
                throw parse_error(std::string(who) + " element has wrong dimension");
            elems.emplace_back(std::move(mat));
        }
        out.push_back(std::move(elems));
    }
    return out;
}

} // namespace

Strategy strategy_from_json(const json &j) {
    const int dD = require_positive_int(require_field(j, "dD"), "dD");
    const int dE = require_positive_int(require_field(j, "dE"), "dE");
    auto alice = povm_family_from_json(require_field(j, "R"), dD, "R");
    auto bob = povm_family_from_json(require_field(j, "S"), dE, "S");
    ComplexMatrix gamma = matrix_from_json(require_field(j, "gamma"));
    if (gamma.rows() != dD * dE)
        throw parse_error("gamma has dimension " + std::to_string(gamma.rows()) +
                          ", expected dD*dE");
    return Strategy(dD, dE, PovmFamily(dD, std::move(alice)), PovmFamily(dE, std::move(bob)),
                    DensityOperator(std::move(gamma)));
}

json instance_to_json(const DiscriminationInstance &inst) {
    json states = json::array();
    for (const auto &s : inst.states) states.push_back(matrix_to_json(s.matrix()));
    return json{{"type", "instance"}, {"states", std::move(states)}};
}

DiscriminationInstance instance_from_json(const json &j) {
    const json &states = require_field(j, "states");
    if (!states.is_array() || states.empty())
        throw parse_error("states must be a nonempty array of matrices");
    std::vector<HermitianOperator> ops;
    for (const json &m : states) ops.emplace_back(matrix_from_json(m));
    return DiscriminationInstance(std::move(ops));
}

json report_to_json(const CertificationReport &rep, std::uint64_t seed) {
    json j{{"type", "report"},
           {"score", rep.score},
           {"omega_c", rep.omega_c},
           {"c_g", rep.c_g},
           {"epsilon", rep.epsilon},
           {"theorem_bound_holds", rep.theorem_bound_holds},
           {"guess_bound", rep.guess_bound},
           {"dist_gap_budget", rep.dist_gap_budget},
           {"epsilon_certified", rep.epsilon_certified},
           {"tol", rep.tol},
           {"seed", seed},
           {"fg_mode", rep.fg_mode == FgMode::theorem ? "theorem" : "literal"},
           {"all_checks_hold", rep.all_checks_hold()}};
    if (rep.declassical) {
        const DeclassicalSummary &d = *rep.declassical;
        j["declassical"] = json{{"distance", d.distance},
                                {"bound", d.bound},
                                {"delta", d.delta},
                                {"gap_budget", d.gap_budget},
                                {"bound_holds", d.bound_holds},
                                {"pbar_score", d.pbar_score},
                                {"classical_score_holds", d.classical_score_holds}};
    } else {
        j["declassical"] = nullptr;
    }
    return j;
}

json load_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception &e) {
        throw parse_error(path + ": " + e.what());
    }
    if (!j.is_object()) throw parse_error(path + ": top level must be an object");
    return j;
}

void write_text_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write " + path);
    out << content;
}

Game load_game(const std::string &path) {
    try {
        return game_from_json(load_json_file(path));
    } catch (const json::exception &e) {
        throw parse_error(path + ": " + e.what());
    }
}

Strategy load_strategy(const std::string &path) {
    try {
        return strategy_from_json(load_json_file(path));
    } catch (const json::exception &e) {
        throw parse_error(path + ": " + e.what());
    }
}

Correlation load_correlation(const std::string &path) {
    try {
        return correlation_from_json(load_json_file(path));
    } catch (const json::exception &e) {
        throw parse_error(path + ": " + e.what());
    }
}

DiscriminationInstance load_instance(const std::string &path) {
    try {
        return instance_from_json(load_json_file(path));
    } catch (const json::exception &e) {
        throw parse_error(path + ": " + e.what());
    }
}

} // namespace locert
