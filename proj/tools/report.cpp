#include "report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace sovlab::cli {

namespace {

std::string cell(cplx z) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "\"%.17g,%.17g\"", z.real(), z.imag());
    return buf;
}

}  // namespace

json task_json(const SuiteResult& r) {
    json metrics = json::object();
    for (const auto& m : r.metrics)
        metrics[m.name] = {{"value", m.value}, {"limit", m.limit}, {"bound", m.bound == Bound::AtMost ? "<=" : ">"}, {"pass", m.pass()}};
    json extracted = json::object();
    for (const auto& [name, v] : r.extracted) extracted[name] = to_json(v);
    json t;
    t["suite"] = r.suite;
    t["passed"] = r.passed;
    t["seed"] = r.seed;
    t["sites"] = r.sites;
    t["error"] = r.error.empty() ? json(nullptr) : json(r.error);
    t["metrics"] = metrics;
    t["extracted"] = extracted;
    t["notes"] = r.notes;
    t["retry_log"] = r.retry_log;
    return t;
}

json report_json(const RunConfig& rc, const SuiteConfig& sc, const std::vector<SuiteResult>& results) {
    json j;
    j["version"] = SOVLAB_VERSION;
    j["config"] = resolved_json(rc, sc);
    j["tasks"] = json::array();
    json timing = json::object();
    bool passed = true;
    for (const auto& r : results) {
        j["tasks"].push_back(task_json(r));
        timing[r.suite] = r.seconds;
        passed = passed && r.passed;
    }
    j["timing"] = timing;
    j["passed"] = passed;
    return j;
}

std::string matrix_csv(const CMatrix& m) {
    std::string out = "h\\k";
    for (Eigen::Index k = 0; k < m.cols(); ++k) out += "," + std::to_string(k);
    out += "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out += std::to_string(i);
        for (Eigen::Index k = 0; k < m.cols(); ++k) out += "," + cell(m(i, k));
        out += "\n";
    }
    return out;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::ConfigError, "cannot create output directory '" + dir + "': " + ec.message());
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::ConfigError, "cannot write '" + path + "'");
    out << text;
}

void write_outputs(const std::string& dir, const json& report, const std::vector<SuiteResult>& results) {
    ensure_dir(dir);
    write_text(dir + "/report.json", report.dump(2) + "\n");
    bool gram_done = false, measure_done = false;
    for (const auto& r : results) {
        if (r.gram && !gram_done) {
            write_text(dir + "/gram.csv", matrix_csv(*r.gram));
            gram_done = true;
        }
        if (r.measure && !measure_done) {
            write_text(dir + "/measure.csv", matrix_csv(*r.measure));
            measure_done = true;
        }
    }
}

json strip_timing(json report) {
    report.erase("timing");
    return report;
}

}  // namespace sovlab::cli
