#include <cstdio>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "bench_table.hpp"
#include "report.hpp"
#include "run_config.hpp"

namespace {

using namespace sovlab;
using namespace sovlab::cli;

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> sites;
    std::optional<double> tol;
    std::optional<std::string> out;
    std::string suites;
    bool all = false;
    bool parallel = false;
};

void add_common(CLI::App* app, Options& o) {
    app->add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
    app->add_option("--seed", o.seed, "sampler seed");
    app->add_option("-N,--sites", o.sites, "number of sites")->check(CLI::PositiveNumber);
    app->add_option("--tol", o.tol, "replace every residual bound");
    app->add_option("--out", o.out, "output directory");
    app->add_flag("--parallel", o.parallel, "per-task parallelism (SOVLAB_THREADS, default all cores)");
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<std::string> default_tasks(Algebra a) {
    if (a == Algebra::Gl2) return {"bases", "gram", "measure", "gl2"};
    return suite_names();
}

RunConfig configure(const Options& o, const std::vector<std::string>& fixed_tasks) {
    RunConfig rc = o.config.empty() ? RunConfig{} : load_run_config(o.config);
    if (o.seed) rc.seed = *o.seed;
    if (o.sites) {
        if (rc.xi && static_cast<int>(rc.xi->size()) != *o.sites)
            throw Error(ErrorKind::ConfigError, "-N disagrees with the explicit xi list");
        rc.sites = *o.sites;
    }
    if (o.tol) rc.tol = *o.tol;
    if (o.out) rc.output = *o.out;
    if (!fixed_tasks.empty()) {
        rc.tasks = fixed_tasks;
    } else if (o.all) {
        rc.tasks = default_tasks(rc.algebra);
    } else if (!o.suites.empty()) {
        rc.tasks.clear();
        for (const auto& name : split(o.suites)) {
            if (!is_suite(name)) throw Error(ErrorKind::ConfigError, "unknown suite '" + name + "'");
            rc.tasks.push_back(name);
        }
    } else if (rc.tasks.empty()) {
        rc.tasks = default_tasks(rc.algebra);
    }
    return rc;
}

void enable_parallel(bool on) {
    if (!on || std::getenv("SOVLAB_THREADS")) return;
    const unsigned n = std::max(1u, std::thread::hardware_concurrency());
    setenv("SOVLAB_THREADS", std::to_string(n).c_str(), 0);
}

std::string worst_metric(const SuiteResult& r) {
    const Metric* worst = nullptr;
    double worst_ratio = -1.0;
    for (const auto& m : r.metrics) {
        const double ratio = m.bound == Bound::AtMost ? m.value / std::max(m.limit, 1e-300) : m.limit / std::max(m.value, 1e-300);
        if (ratio > worst_ratio) {
            worst_ratio = ratio;
            worst = &m;
        }
    }
    if (!worst) return "no metrics";
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s %.2e %s %.0e", worst->name.c_str(), worst->value, worst->bound == Bound::AtMost ? "<=" : ">",
                  worst->limit);
    return buf;
}

int run_tasks(const Options& o, const std::vector<std::string>& fixed_tasks) {
    enable_parallel(o.parallel);
    const RunConfig rc = configure(o, fixed_tasks);
    const SuiteConfig sc = resolve(rc);
    for (const auto& t : rc.tasks)
        if (rc.algebra == Algebra::Gl2 && t != "bases" && t != "gram" && t != "measure" && t != "gl2")
            throw Error(ErrorKind::ConfigError, "suite '" + t + "' needs algebra gl3");

    std::vector<SuiteResult> results;
    for (const auto& t : rc.tasks) {
        results.push_back(run_suite(t, sc));
        const SuiteResult& r = results.back();
        std::printf("%s  %-14s N=%d seed=%llu  %s%s\n", r.passed ? "PASS" : "FAIL", r.suite.c_str(), r.sites,
                    static_cast<unsigned long long>(r.seed), r.error.empty() ? worst_metric(r).c_str() : r.error.c_str(),
                    r.retry_log.empty() ? "" : ("  (" + std::to_string(r.retry_log.size()) + " redraws)").c_str());
        for (const auto& m : r.metrics)
            if (!m.pass())
                std::printf("      %s = %.3e, bound %s %.1e\n", m.name.c_str(), m.value, m.bound == Bound::AtMost ? "<=" : ">", m.limit);
    }
    const json report = report_json(rc, sc, results);
    write_outputs(rc.output, report, results);
    const bool ok = report["passed"].get<bool>();
    std::printf("%s: %zu task(s), report in %s/report.json\n", ok ? "all passed" : "FAILED", results.size(), rc.output.c_str());
    return ok ? 0 : kExitFailure;
}

int run_bench_cmd(const Options& o, int from, int to, int repeats) {
    enable_parallel(o.parallel);
    const std::uint64_t seed = o.seed.value_or(7);
    const auto rows = run_bench(seed, from, to, repeats);
    const std::string csv = bench_csv(rows);
    const std::string dir = o.out.value_or("sovlab-out");
    ensure_dir(dir);
    write_text(dir + "/bench.csv", csv);
    std::fputs(csv.c_str(), stdout);
    return 0;
}

int show_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ConfigError, "cannot open report '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ConfigError, "malformed report '" + path + "': " + e.what());
    }
    std::printf("sovlab %s, %s, N=%d, seed %llu\n", j.value("version", "?").c_str(), j["config"].value("algebra", "?").c_str(),
                j["config"].value("sites", 0), static_cast<unsigned long long>(j["config"].value("seed", std::uint64_t{0})));
    for (const auto& t : j["tasks"]) {
        std::printf("  %s  %-14s seed=%llu", t["passed"].get<bool>() ? "PASS" : "FAIL", t["suite"].get<std::string>().c_str(),
                    static_cast<unsigned long long>(t["seed"].get<std::uint64_t>()));
        if (!t["error"].is_null()) std::printf("  %s", t["error"].get<std::string>().c_str());
        std::printf("\n");
        for (auto it = t["metrics"].begin(); it != t["metrics"].end(); ++it)
            std::printf("      %-34s %.3e %s %.1e\n", it.key().c_str(), it.value()["value"].is_null() ? NAN : it.value()["value"].get<double>(),
                        it.value()["bound"].get<std::string>().c_str(), it.value()["limit"].get<double>());
    }
    const bool ok = j.value("passed", false);
    std::printf("%s\n", ok ? "all passed" : "FAILED");
    return ok ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sovlab: separation-of-variables checks for rational gl(3) and gl(2) chains"};
    app.require_subcommand(1);
    app.set_version_flag("--version", SOVLAB_VERSION);

    Options o;
    auto* verify = app.add_subcommand("verify", "run verification suites and write report.json");
    add_common(verify, o);
    verify->add_flag("--all", o.all, "every registered suite");
    verify->add_option("--suite", o.suites, "comma separated suite names");

    auto* gram = app.add_subcommand("gram", "Gram matrix of the SoV bases (gram.csv)");
    add_common(gram, o);
    auto* measure = app.add_subcommand("measure", "SoV measure (gram.csv, measure.csv)");
    add_common(measure, o);
    auto* scalar = app.add_subcommand("scalar-product", "determinant scalar products for a singular twist");
    add_common(scalar, o);

    int from = 4, to = 9, repeats = 3;
    auto* bench = app.add_subcommand("bench", "dense versus matrix-free transfer matrix (bench.csv)");
    add_common(bench, o);
    bench->add_option("--from", from, "smallest N")->check(CLI::PositiveNumber);
    bench->add_option("--to", to, "largest N")->check(CLI::PositiveNumber);
    bench->add_option("--repeats", repeats, "matrix-free applies per N")->check(CLI::PositiveNumber);

    std::string report_path;
    auto* report = app.add_subcommand("report", "summarize an existing report.json");
    report->add_option("path", report_path, "report.json or a directory holding one")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (verify->parsed()) return run_tasks(o, {});
        if (gram->parsed()) return run_tasks(o, {"gram"});
        if (measure->parsed()) return run_tasks(o, {"measure"});
        if (scalar->parsed()) return run_tasks(o, {"scalarproducts"});
        if (bench->parsed()) return run_bench_cmd(o, from, to, repeats);
        if (report->parsed()) {
            const bool is_dir = std::filesystem::is_directory(report_path);
            return show_report(is_dir ? report_path + "/report.json" : report_path);
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "sovlab: %s\n", e.what());
        return e.kind() == ErrorKind::ConfigError ? kExitConfig : kExitFailure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "sovlab: %s\n", e.what());
        return kExitFailure;
    }
    return kExitFailure;
}
