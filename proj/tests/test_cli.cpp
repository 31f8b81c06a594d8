#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bench_table.hpp"
#include "report.hpp"
#include "run_config.hpp"

using namespace sovlab;
using namespace sovlab::cli;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::TaskFailure;
}

std::size_t count(const std::string& s, char c) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), c)); }

}  // namespace

TEST_CASE("rational strings and complex pairs") {
    CHECK(parse_real(json("1/4"), "x") == 0.25);
    CHECK(parse_real(json("-3/2"), "x") == -1.5);
    CHECK(parse_real(json(0.5), "x") == 0.5);
    CHECK(parse_complex(json::array({"1/2", -2}), "z") == cplx(0.5, -2.0));
    CHECK(parse_complex(json(3), "z") == cplx(3.0, 0.0));
    CHECK(kind_of([] { parse_real(json("1/0"), "x"); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_real(json("abc"), "x"); }) == ErrorKind::ConfigError);
}

TEST_CASE("config rejects several twist forms") {
    const json j = json::parse(R"({"algebra": "gl3", "sites": 2,
        "twist": {"matrix": [[1,0,0],[0,2,0],[0,0,3]], "eigenvalues": [1, 2, 3]}})");
    CHECK(kind_of([&] { parse_run_config(j); }) == ErrorKind::ConfigError);
}

TEST_CASE("config rejects unknown keys and tasks") {
    CHECK(kind_of([] { parse_run_config(json::parse(R"({"sitez": 2})")); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_run_config(json::parse(R"({"tasks": ["nosuch"]})")); }) == ErrorKind::ConfigError);
    CHECK(kind_of([] { parse_run_config(json::parse(R"({"twist": {"k_jordan": [[1,1,0],[0,1,0],[0,0,2]]}})")); }) ==
          ErrorKind::ConfigError);
}

TEST_CASE("explicit model fields resolve to an explicit chain") {
    const json j = json::parse(R"({"algebra": "gl3", "sites": 2, "eta": [1, 0], "xi": [[0.1, 0.2], ["1/3", -0.5]],
        "twist": {"eigenvalues": [1, [2, 1], -0.5]}})");
    const RunConfig rc = parse_run_config(j);
    const SuiteConfig sc = resolve(rc);
    REQUIRE(sc.model);
    CHECK(sc.model->xi[1] == cplx(1.0 / 3.0, -0.5));
    CHECK(std::abs(sc.model->twist.c - cplx(-1.0, -0.5)) < 1e-12);
    CHECK(resolved_json(rc, sc)["mode"] == "explicit");
}

TEST_CASE("no model fields leaves sampling to the suites") {
    const RunConfig rc = parse_run_config(json::parse(R"({"sites": 3, "seed": 9})"));
    const SuiteConfig sc = resolve(rc);
    CHECK_FALSE(sc.model);
    CHECK(sc.seed == 9);
    CHECK(sc.sites == 3);
}

TEST_CASE("gl2 measure at N = 2 writes a 4 x 4 gram.csv") {
    const RunConfig rc = parse_run_config(json::parse(R"({"algebra": "gl2", "sites": 2, "eta": 1,
        "xi": [[0.1, 0.2], [1.7, -0.4]], "twist": {"matrix": [[1.2, 0.4], [-0.7, 0.3]]},
        "reference": [1, 0.5], "tasks": ["measure"]})"));
    SuiteConfig sc = resolve(rc);
    sc.keep_matrices = true;
    const SuiteResult r = run_suite("measure", sc);
    CHECK(r.passed);
    REQUIRE(r.gram);
    const std::string csv = matrix_csv(*r.gram);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "h\\k,0,1,2,3");
    int rows = 0;
    std::size_t cells = 0;
    while (std::getline(in, line)) {
        ++rows;
        cells += count(line, '"') / 2;
    }
    CHECK(rows == 4);
    CHECK(cells == 16);
}

TEST_CASE("repeated runs give identical reports apart from timing") {
    const RunConfig rc = parse_run_config(json::parse(R"({"sites": 2, "seed": 3, "tasks": ["gram", "det0"]})"));
    const SuiteConfig sc = resolve(rc);
    auto once = [&] {
        std::vector<SuiteResult> rs;
        for (const auto& t : rc.tasks) rs.push_back(run_suite(t, sc));
        return strip_timing(report_json(rc, sc, rs));
    };
    const json a = once(), b = once();
    CHECK(a.dump() == b.dump());
    CHECK_FALSE(a.contains("timing"));
    CHECK(a["passed"] == true);
}

TEST_CASE("report files land in the output directory") {
    const std::string dir = (std::filesystem::temp_directory_path() / "sovlab-test-out").string();
    std::filesystem::remove_all(dir);
    const RunConfig rc = parse_run_config(json::parse(R"({"sites": 1, "tasks": ["gram"]})"));
    SuiteConfig sc = resolve(rc);
    sc.keep_matrices = true;
    const std::vector<SuiteResult> rs{run_suite("gram", sc)};
    write_outputs(dir, report_json(rc, sc, rs), rs);
    CHECK(std::filesystem::exists(dir + "/report.json"));
    CHECK(std::filesystem::exists(dir + "/gram.csv"));
    std::ifstream in(dir + "/report.json");
    const json j = json::parse(in);
    CHECK(j["tasks"].size() == 1);
    std::filesystem::remove_all(dir);
}

TEST_CASE("bench: paths agree and the dense path stops at the cap") {
    const auto rows = run_bench(7, 3, 4, 1);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 0; i < rows.size(); i += 2) {
        CHECK(rows[i].status == "ok");
        CHECK(std::abs(rows[i].checksum - rows[i + 1].checksum) < 1e-9 * std::abs(rows[i + 1].checksum));
    }
    const auto capped = run_bench(7, 4, 4, 1, 27);
    CHECK(capped[0].status == "SizeCap");
    CHECK(capped[1].status == "ok");
    CHECK(bench_csv(rows, false) == bench_csv(run_bench(7, 3, 4, 1), false));
}

TEST_CASE("bench refuses N = 9 densely with the default cap") {
    const auto rows = run_bench(7, 9, 9, 1);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].status == "SizeCap");
    CHECK(rows[1].status == "ok");
}
