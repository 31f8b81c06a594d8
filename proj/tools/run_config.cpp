#include "run_config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>

#include "sovlab/sampler.hpp"

namespace sovlab::cli {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw Error(ErrorKind::ConfigError, where + ": " + what);
}

double parse_number_text(const std::string& s, const std::string& where) {
    const auto slash = s.find('/');
    auto one = [&](const std::string& t) {
        if (t.empty()) bad(where, "empty number in '" + s + "'");
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(t.c_str(), &end);
        if (errno != 0 || end != t.c_str() + t.size()) bad(where, "cannot read '" + s + "' as a number");
        return v;
    };
    if (slash == std::string::npos) return one(s);
    const double den = one(s.substr(slash + 1));
    if (den == 0.0) bad(where, "zero denominator in '" + s + "'");
    return one(s.substr(0, slash)) / den;
}

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) bad(where, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) bad(where, "unknown key '" + it.key() + "'");
}

std::vector<cplx> parse_complex_list(const json& v, const std::string& where) {
    if (!v.is_array()) bad(where, "expected a list");
    std::vector<cplx> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(parse_complex(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

int parse_int(const json& v, const std::string& where) {
    if (!v.is_number_integer()) bad(where, "expected an integer");
    return v.get<int>();
}

std::uint64_t parse_seed(const json& v, const std::string& where) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) bad(where, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

void parse_twist(const json& t, RunConfig& rc, int n) {
    only_keys(t, {"matrix", "w", "k_jordan", "eigenvalues"}, "twist");
    const int forms = static_cast<int>(t.contains("matrix")) + static_cast<int>(t.contains("k_jordan")) +
                      static_cast<int>(t.contains("eigenvalues"));
    if (forms != 1) bad("twist", "give exactly one of matrix, {w, k_jordan} or eigenvalues");
    rc.twist_w = CMatrix::Identity(n, n);
    if (t.contains("matrix")) {
        if (t.contains("w")) bad("twist", "w does not combine with matrix");
        rc.twist_form = TwistForm::Matrix;
        rc.twist_matrix = parse_matrix(t["matrix"], n, "twist.matrix");
        return;
    }
    if (t.contains("w")) rc.twist_w = parse_matrix(t["w"], n, "twist.w");
    if (t.contains("k_jordan")) {
        if (!t.contains("w")) bad("twist", "k_jordan needs w");
        rc.twist_form = TwistForm::Jordan;
        rc.twist_jordan = parse_matrix(t["k_jordan"], n, "twist.k_jordan");
        return;
    }
    rc.twist_form = TwistForm::Eigenvalues;
    rc.twist_eigenvalues = parse_complex_list(t["eigenvalues"], "twist.eigenvalues");
    if (static_cast<int>(rc.twist_eigenvalues.size()) != n) bad("twist.eigenvalues", "expected " + std::to_string(n) + " values");
}

CMatrix conjugate(const CMatrix& w, const CMatrix& inner) {
    if (std::abs(w.determinant()) < 1e-12) bad("twist.w", "W is singular");
    return w * inner * w.inverse();
}

TwistData gl3_twist(const RunConfig& rc) {
    try {
        switch (rc.twist_form) {
            case TwistForm::Matrix: return twist_from_matrix(rc.twist_matrix);
            case TwistForm::Jordan: return twist_from_jordan(rc.twist_w, rc.twist_jordan);
            case TwistForm::Eigenvalues:
                return twist_from_eigenvalues(rc.twist_eigenvalues[0], rc.twist_eigenvalues[1], rc.twist_eigenvalues[2], rc.twist_w);
            case TwistForm::None: break;
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ConfigError) throw;
        bad("twist", e.what());
    }
    bad("twist", "missing");
}

CMatrix gl2_twist(const RunConfig& rc) {
    switch (rc.twist_form) {
        case TwistForm::Matrix: return rc.twist_matrix;
        case TwistForm::Jordan: return conjugate(rc.twist_w, rc.twist_jordan);
        case TwistForm::Eigenvalues:
            return conjugate(rc.twist_w, Eigen::Vector2cd(rc.twist_eigenvalues[0], rc.twist_eigenvalues[1]).asDiagonal());
        case TwistForm::None: break;
    }
    bad("twist", "missing");
}

}  // namespace

double parse_real(const json& v, const std::string& where) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return parse_number_text(v.get<std::string>(), where);
    bad(where, "expected a number or a \"p/q\" string");
}

cplx parse_complex(const json& v, const std::string& where) {
    if (v.is_array()) {
        if (v.size() != 2) bad(where, "complex numbers are [re, im]");
        return {parse_real(v[0], where + ".re"), parse_real(v[1], where + ".im")};
    }
    return {parse_real(v, where), 0.0};
}

CMatrix parse_matrix(const json& v, int n, const std::string& where) {
    if (!v.is_array() || static_cast<int>(v.size()) != n) bad(where, "expected " + std::to_string(n) + " rows");
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i) {
        const json& row = v[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != n) bad(where, "row " + std::to_string(i) + " needs " + std::to_string(n) + " entries");
        for (int k = 0; k < n; ++k)
            m(i, k) = parse_complex(row[static_cast<std::size_t>(k)], where + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
    return m;
}

RunConfig parse_run_config(const json& j) {
    only_keys(j, {"algebra", "sites", "seed", "eta", "xi", "twist", "reference", "tolerance", "tolerance_overrides", "tasks", "output"},
              "config");
    RunConfig rc;
    if (j.contains("algebra")) {
        const json& a = j["algebra"];
        if (a == "gl3") rc.algebra = Algebra::Gl3;
        else if (a == "gl2") rc.algebra = Algebra::Gl2;
        else bad("algebra", "expected \"gl3\" or \"gl2\"");
    }
    const int n = rc.algebra == Algebra::Gl2 ? 2 : 3;
    if (j.contains("sites")) rc.sites = parse_int(j["sites"], "sites");
    if (rc.sites < 1) bad("sites", "must be >= 1");
    if (j.contains("seed")) rc.seed = parse_seed(j["seed"], "seed");
    if (j.contains("eta")) rc.eta = parse_complex(j["eta"], "eta");

    if (j.contains("xi")) {
        const json& x = j["xi"];
        if (x.is_array()) {
            rc.xi = parse_complex_list(x, "xi");
            if (static_cast<int>(rc.xi->size()) != rc.sites) bad("xi", "expected one entry per site");
        } else {
            only_keys(x, {"seed", "grid"}, "xi");
            XiGrid g;
            g.seed = x.contains("seed") ? parse_seed(x["seed"], "xi.seed") : rc.seed;
            if (x.contains("grid")) {
                const json& gr = x["grid"];
                if (!gr.is_array() || gr.size() != 3) bad("xi.grid", "expected [span, q_re, q_im]");
                g.span = parse_int(gr[0], "xi.grid[0]");
                g.q_re = parse_int(gr[1], "xi.grid[1]");
                g.q_im = parse_int(gr[2], "xi.grid[2]");
            }
            rc.xi_grid = g;
        }
    }
    if (j.contains("twist")) parse_twist(j["twist"], rc, n);
    if (j.contains("reference")) {
        rc.reference = parse_complex_list(j["reference"], "reference");
        if (static_cast<int>(rc.reference->size()) != n) bad("reference", "expected " + std::to_string(n) + " components");
    }
    if (j.contains("tolerance")) rc.tol = parse_real(j["tolerance"], "tolerance");
    if (j.contains("tolerance_overrides")) {
        const json& o = j["tolerance_overrides"];
        if (!o.is_object()) bad("tolerance_overrides", "expected an object");
        for (auto it = o.begin(); it != o.end(); ++it) rc.tol_overrides[it.key()] = parse_real(it.value(), "tolerance_overrides." + it.key());
    }
    if (j.contains("tasks")) {
        const json& t = j["tasks"];
        if (!t.is_array()) bad("tasks", "expected a list of suite names");
        for (const auto& name : t) {
            if (!name.is_string() || !is_suite(name.get<std::string>())) bad("tasks", "unknown suite " + name.dump());
            rc.tasks.push_back(name.get<std::string>());
        }
    }
    if (j.contains("output")) {
        if (!j["output"].is_string()) bad("output", "expected a directory name");
        rc.output = j["output"].get<std::string>();
    }
    return rc;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ConfigError, "cannot open config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ConfigError, "malformed JSON in '" + path + "': " + e.what());
    }
    return parse_run_config(j);
}

SuiteConfig resolve(const RunConfig& rc) {
    SuiteConfig sc;
    sc.algebra = rc.algebra;
    sc.seed = rc.seed;
    sc.sites = rc.sites;
    sc.tol = rc.tol;
    sc.tol_overrides = rc.tol_overrides;
    sc.keep_matrices = true;
    if (!rc.has_model_fields()) return sc;

    Sampler s(rc.seed);
    const cplx eta = rc.eta ? *rc.eta : s.draw_eta();
    std::vector<cplx> xi;
    if (rc.xi) {
        xi = *rc.xi;
    } else if (rc.xi_grid) {
        Sampler g(rc.xi_grid->seed);
        xi = g.draw_xi(rc.sites, eta, rc.xi_grid->span, rc.xi_grid->q_re, rc.xi_grid->q_im);
    } else {
        xi = s.draw_xi(rc.sites, eta);
    }

    if (rc.algebra == Algebra::Gl2) {
        Gl2Params p;
        if (rc.twist_form == TwistForm::None) {
            Sampler t(rc.seed);
            p = t.draw_gl2_params(rc.sites);
        } else {
            p.k = gl2_twist(rc);
        }
        p.sites = rc.sites;
        p.eta = eta;
        p.xi = xi;
        if (rc.reference) p.ref = {(*rc.reference)[0], (*rc.reference)[1]};
        p.validate();
        sc.gl2 = p;
        return sc;
    }

    ModelParams p;
    p.sites = rc.sites;
    p.eta = eta;
    p.xi = xi;
    p.twist = rc.twist_form == TwistForm::None ? s.draw_twist(TwistCase::I) : gl3_twist(rc);
    p.validate();
    sc.model = p;
    sc.xyz = rc.reference ? Xyz{(*rc.reference)[0], (*rc.reference)[1], (*rc.reference)[2]} : s.draw_xyz();
    return sc;
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const CMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
        rows.push_back(row);
    }
    return rows;
}

json resolved_json(const RunConfig& rc, const SuiteConfig& sc) {
    json j;
    j["algebra"] = to_string(rc.algebra);
    j["sites"] = rc.sites;
    j["seed"] = rc.seed;
    j["tasks"] = rc.tasks;
    j["output"] = rc.output;
    j["tolerance"] = rc.tol ? json(*rc.tol) : json(nullptr);
    j["tolerance_overrides"] = rc.tol_overrides;
    auto xi_json = [](const std::vector<cplx>& xi) {
        json a = json::array();
        for (const cplx x : xi) a.push_back(to_json(x));
        return a;
    };
    if (sc.model) {
        const ModelParams& p = *sc.model;
        j["mode"] = "explicit";
        j["model"] = {{"eta", to_json(p.eta)},
                      {"xi", xi_json(p.xi)},
                      {"twist",
                       {{"case", to_string(p.twist.kind)},
                        {"matrix", to_json(p.twist.k_matrix)},
                        {"w", to_json(p.twist.w)},
                        {"k_jordan", to_json(p.twist.k_jordan)}}},
                      {"reference", json::array({to_json((*sc.xyz)[0]), to_json((*sc.xyz)[1]), to_json((*sc.xyz)[2])})}};
    } else if (sc.gl2) {
        const Gl2Params& p = *sc.gl2;
        j["mode"] = "explicit";
        j["model"] = {{"eta", to_json(p.eta)},
                      {"xi", xi_json(p.xi)},
                      {"twist", {{"matrix", to_json(p.k)}}},
                      {"reference", json::array({to_json(p.ref[0]), to_json(p.ref[1])})}};
    } else {
        // every task records the seed of the draw it used
        j["mode"] = "sampled";
        j["model"] = nullptr;
    }
    return j;
}

}  // namespace sovlab::cli
