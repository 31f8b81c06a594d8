#pragma once

#include <string>
#include <vector>

#include "run_config.hpp"

namespace sovlab::cli {

/// One task entry; keys come out sorted, wall time is kept apart in "timing".
json task_json(const SuiteResult& r);

/// {config, passed, tasks, timing, version}.
json report_json(const RunConfig& rc, const SuiteConfig& sc, const std::vector<SuiteResult>& results);

/// Square complex matrix as CSV: header row of flat indices, cells "re,im" quoted.
std::string matrix_csv(const CMatrix& m);

/// Creates the directory if needed; throws ConfigError when that fails.
void ensure_dir(const std::string& dir);
void write_text(const std::string& path, const std::string& text);

/// Writes report.json plus gram.csv / measure.csv from the first task carrying them.
void write_outputs(const std::string& dir, const json& report, const std::vector<SuiteResult>& results);

/// Same report with wall-clock fields removed; equal across repeated runs.
json strip_timing(json report);

}  // namespace sovlab::cli
