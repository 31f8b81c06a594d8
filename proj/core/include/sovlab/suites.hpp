#pragma once

// Named verification suites shared by the command line driver and the tests.
// Every suite draws its model from a seeded Sampler unless explicit parameters
// are supplied, records residuals as metrics with a bound, and retries with a
// derived seed when a draw is degenerate (each retry is logged).

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sovlab/gl2_model.hpp"
#include "sovlab/gl3_model.hpp"
#include "sovlab/sov_bases.hpp"

namespace sovlab {

enum class Algebra { Gl3, Gl2 };
const char* to_string(Algebra a);

struct SuiteConfig {
    Algebra algebra = Algebra::Gl3;
    std::uint64_t seed = 7;
    int sites = 2;
    std::optional<double> tol;              ///< replaces every upper bound when set
    std::map<std::string, double> tol_overrides;  ///< per metric name, wins over tol
    std::optional<ModelParams> model;       ///< explicit gl(3) chain
    std::optional<Xyz> xyz;                 ///< explicit gl(3) reference co-vector
    std::optional<Gl2Params> gl2;           ///< explicit gl(2) chain
    int max_retries = 8;
    bool keep_matrices = false;             ///< fill SuiteResult::gram / measure
};

enum class Bound { AtMost, AtLeast };

struct Metric {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    Bound bound = Bound::AtMost;
    bool pass() const { return bound == Bound::AtMost ? value <= limit : value > limit; }
};

struct SuiteResult {
    std::string suite;
    std::uint64_t seed = 0;       ///< seed of the attempt that produced the metrics
    int sites = 0;
    bool passed = false;
    std::string error;            ///< non-empty when the suite threw
    std::vector<Metric> metrics;
    std::vector<std::pair<std::string, cplx>> extracted;
    std::vector<std::string> notes;      ///< skipped parts
    std::vector<std::string> retry_log;
    std::optional<CMatrix> gram;         ///< set by gram / measure when keep_matrices
    std::optional<CMatrix> measure;
    int index_base = 3;                  ///< digit base of the matrix row / column labels
    double seconds = 0.0;

    const Metric* find(const std::string& name) const;
};

/// Registered names in canonical order.
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

/// Runs one suite; never throws for numerical trouble, which ends up in `error`.
/// Unknown names throw ConfigError.
SuiteResult run_suite(const std::string& name, const SuiteConfig& cfg);

/// Seed of retry attempt k.
std::uint64_t attempt_seed(std::uint64_t seed, int attempt);

}  // namespace sovlab
