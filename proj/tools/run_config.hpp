#pragma once

// JSON run configuration of the command line driver.
//
// Complex numbers are [re, im]; any real field also accepts a rational string
// "p/q". Model fields that are left out are drawn from the sampler seeded with
// `seed`; with no model fields at all every suite samples its own draw (and may
// redraw degenerate ones).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "sovlab/suites.hpp"

namespace sovlab::cli {

using json = nlohmann::json;

enum class TwistForm { None, Matrix, Jordan, Eigenvalues };

struct XiGrid {
    std::uint64_t seed = 0;
    int span = 8;
    int q_re = 5;
    int q_im = 7;
};

struct RunConfig {
    Algebra algebra = Algebra::Gl3;
    int sites = 2;
    std::uint64_t seed = 7;
    std::optional<cplx> eta;
    std::optional<std::vector<cplx>> xi;
    std::optional<XiGrid> xi_grid;
    TwistForm twist_form = TwistForm::None;
    CMatrix twist_matrix;    ///< Matrix form
    CMatrix twist_w;         ///< Jordan / Eigenvalues form (identity when omitted)
    CMatrix twist_jordan;    ///< Jordan form
    std::vector<cplx> twist_eigenvalues;
    std::optional<std::vector<cplx>> reference;
    std::optional<double> tol;
    std::map<std::string, double> tol_overrides;
    std::vector<std::string> tasks;
    std::string output = "sovlab-out";

    bool has_model_fields() const { return eta || xi || xi_grid || twist_form != TwistForm::None || reference; }
};

double parse_real(const json& v, const std::string& where);
cplx parse_complex(const json& v, const std::string& where);
CMatrix parse_matrix(const json& v, int n, const std::string& where);

/// Throws ConfigError on unknown keys, malformed values, several twist forms,
/// shape mismatches and unregistered task names.
RunConfig parse_run_config(const json& j);
RunConfig load_run_config(const std::string& path);

/// Resolves the model (sampling what is missing) into suite settings.
SuiteConfig resolve(const RunConfig& rc);

json to_json(cplx z);
json to_json(const CMatrix& m);
/// Resolved configuration as embedded in every report.
json resolved_json(const RunConfig& rc, const SuiteConfig& sc);

}  // namespace sovlab::cli
