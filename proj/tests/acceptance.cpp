// Acceptance run: one PASS/FAIL line per criterion. Bounds are pinned here,
// independently of the defaults inside the suites, and every criterion runs on
// three fixed seeds.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "sovlab/suites.hpp"

namespace {

using namespace sovlab;

const std::vector<std::uint64_t> kSeeds{1, 2, 3};

struct Check {
    std::string metric;
    double bound;
    bool upper = true;  ///< value <= bound, otherwise value > bound
};

struct Outcome {
    bool pass = true;
    std::string worst = "-";
    double worst_ratio = -1.0;
    double seconds = 0.0;
    std::vector<std::string> problems;

    void fold(const std::string& where, const Check& c, const SuiteResult& r) {
        const Metric* m = r.find(c.metric);
        if (!m) {
            pass = false;
            problems.push_back(where + ": metric " + c.metric + " missing");
            return;
        }
        const bool ok = c.upper ? m->value <= c.bound : m->value > c.bound;
        const double ratio = c.upper ? m->value / c.bound : c.bound / std::max(m->value, 1e-300);
        if (!ok) {
            pass = false;
            char buf[200];
            std::snprintf(buf, sizeof buf, "%s: %s = %.2e vs %s %.0e", where.c_str(), c.metric.c_str(), m->value, c.upper ? "<=" : ">", c.bound);
            problems.push_back(buf);
        }
        if (ratio > worst_ratio) {
            worst_ratio = ratio;
            char buf[200];
            std::snprintf(buf, sizeof buf, "%s %.1e (%s %.0e)", c.metric.c_str(), m->value, c.upper ? "<=" : ">", c.bound);
            worst = buf;
        }
    }
};

SuiteResult run(const std::string& suite, int n, std::uint64_t seed, Outcome& o) {
    SuiteConfig cfg;
    cfg.sites = n;
    cfg.seed = seed;
    SuiteResult r = run_suite(suite, cfg);
    o.seconds += r.seconds;
    if (!r.error.empty()) {
        o.pass = false;
        o.problems.push_back(suite + " N=" + std::to_string(n) + " seed " + std::to_string(seed) + ": " + r.error);
    }
    return r;
}

void sweep(Outcome& o, const std::string& suite, const std::vector<int>& sizes, const std::vector<Check>& checks) {
    for (const int n : sizes)
        for (const auto seed : kSeeds) {
            const SuiteResult r = run(suite, n, seed, o);
            if (!r.error.empty()) continue;
            const std::string where = suite + " N=" + std::to_string(n) + " seed " + std::to_string(seed);
            for (const auto& c : checks) o.fold(where, c, r);
        }
}

void time_limit(Outcome& o, double limit) {
    if (o.seconds < limit) return;
    o.pass = false;
    o.problems.push_back("runtime " + std::to_string(o.seconds) + " s exceeds " + std::to_string(limit) + " s");
}

bool same_numbers(const SuiteResult& a, const SuiteResult& b) {
    if (a.metrics.size() != b.metrics.size() || a.extracted.size() != b.extracted.size() || a.seed != b.seed) return false;
    for (std::size_t i = 0; i < a.metrics.size(); ++i)
        if (a.metrics[i].name != b.metrics[i].name || a.metrics[i].value != b.metrics[i].value) return false;
    for (std::size_t i = 0; i < a.extracted.size(); ++i)
        if (a.extracted[i] != b.extracted[i]) return false;
    return true;
}

const std::vector<int> kUpTo3{1, 2, 3};

}  // namespace

int main() {
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"Yang-Baxter, RTT and scalar Yang-Baxter residuals",
         [] {
             Outcome o;
             sweep(o, "yangbaxter", kUpTo3, {{"yang_baxter", 1e-11}, {"rtt", 1e-11}, {"scalar_yang_baxter", 1e-11}});
             time_limit(o, 1.0);
             return o;
         }},
        {"quantum determinant closed form at 5 points",
         [] {
             Outcome o;
             sweep(o, "fusion", kUpTo3, {{"quantum_determinant", 1e-10}});
             time_limit(o, 5.0);
             return o;
         }},
        {"fusion identities, central zeros, T2 interpolation",
         [] {
             Outcome o;
             sweep(o, "fusion", kUpTo3,
                   {{"fusion_t1t1", 1e-10}, {"fusion_t1t2", 1e-10}, {"central_zero", 1e-10}, {"t2_interpolation", 1e-9}});
             return o;
         }},
        {"SoV families full rank in twist cases i, ii, iii",
         [] {
             Outcome o;
             std::vector<Check> c;
             for (const char* k : {"case_i", "case_ii", "case_iii"}) {
                 c.push_back({std::string("rank_left.") + k, 1e-9, false});
                 c.push_back({std::string("rank_right.") + k, 1e-9, false});
             }
             sweep(o, "bases", kUpTo3, c);
             return o;
         }},
        {"closed-form |0>: <k|0> = delta, local reference vectors",
         [] {
             Outcome o;
             std::vector<Check> c;
             for (const char* k : {"case_i", "case_ii", "case_iii"}) {
                 c.push_back({std::string("ref_delta.") + k, 1e-10});
                 c.push_back({std::string("local_reference.") + k, 1e-11});
             }
             sweep(o, "bases", kUpTo3, c);
             return o;
         }},
        {"Gram pattern at N = 3 (729 cells)",
         [] {
             Outcome o;
             sweep(o, "gram", {3}, {{"zero_cells", 1e-9}, {"offdiag_cells", 1e-6, false}, {"diag_formula", 1e-8}});
             time_limit(o, 30.0);
             return o;
         }},
        {"det K scaling: integer slopes, constant coefficients",
         [] {
             Outcome o;
             sweep(o, "gram", {2, 3, 4}, {{"det_k_slope", 1e-3}, {"det_k_coefficient_spread", 1e-6}});
             return o;
         }},
        {"one-pair coefficient, closed form against the Gram matrix",
         [] {
             Outcome o;
             sweep(o, "gram", {2, 3}, {{"one_pair_coefficient", 1e-8}});
             return o;
         }},
        {"dual bases: M N = I, B recursion, recursions r = 0, 1",
         [] {
             Outcome o;
             sweep(o, "measure", {2, 3, 4}, {{"inverse", 1e-8}});
             sweep(o, "dual", {4}, {{"b_recursion", 1e-7}});
             sweep(o, "appendixC", {2, 3}, {{"recursion_r0", 1e-8}});
             sweep(o, "appendixC", {4}, {{"recursion_r1", 1e-8}});
             return o;
         }},
        {"det K = 0: diagonal Gram, measure, interpolated actions",
         [] {
             Outcome o;
             sweep(o, "det0", kUpTo3,
                   {{"offdiag", 1e-9}, {"diag_formula", 1e-8}, {"action_left", 1e-8}, {"action_right", 1e-8}});
             return o;
         }},
        {"factorized eigenstates, scalar products and norms",
         [] {
             Outcome o;
             sweep(o, "scalarproducts", {2},
                   {{"factorization_right", 1e-7}, {"factorization_left", 1e-7}, {"scalar_product_determinant", 1e-7},
                    {"norm_determinant", 1e-7}});
             sweep(o, "scalarproducts", {3}, {{"scalar_product_determinant", 1e-7}, {"norm_determinant", 1e-7}});
             time_limit(o, 120.0);
             return o;
         }},
        {"charges: fusion, orthogonal bases, determinant formulas",
         [] {
             Outcome o;
             sweep(o, "ttcharges", {2},
                   {{"fusion_t2t1", 1e-8}, {"fusion_t2t2", 1e-8}, {"fusion_t1t1", 1e-8}, {"central_zero", 1e-8},
                    {"offdiag", 1e-8}, {"diag_formula", 1e-8}, {"factorization_right", 1e-7}, {"factorization_left", 1e-7},
                    {"scalar_product_determinant", 1e-7}, {"norm_determinant", 1e-7}});
             return o;
         }},
        {"product formula for T1 at coinciding points, N = 3",
         [] {
             Outcome o;
             sweep(o, "appendixA", {3}, {{"product_formula", 1e-10}});
             return o;
         }},
        {"gl(2): orthogonality, measure, eigenstate representations",
         [] {
             Outcome o;
             sweep(o, "gl2", kUpTo3,
                   {{"offdiag", 1e-9}, {"diag_formula", 1e-9}, {"eigen_right", 1e-7}, {"eigen_left", 1e-7},
                    {"n_t_formula", 1e-7}, {"n_t_nonzero", 1e-12, false}});
             return o;
         }},
        {"determinism and full default suite runtime",
         [] {
             Outcome o;
             const auto start = std::chrono::steady_clock::now();
             for (const auto& name : suite_names()) {
                 SuiteConfig cfg;
                 const SuiteResult a = run_suite(name, cfg);
                 const SuiteResult b = run_suite(name, cfg);
                 if (!a.passed || !b.passed || !same_numbers(a, b)) {
                     o.pass = false;
                     o.problems.push_back(name + ": repeated run differs or fails");
                 }
             }
             o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
             char buf[80];
             std::snprintf(buf, sizeof buf, "12 suites twice, bitwise equal");
             o.worst = buf;
             time_limit(o, 600.0);
             return o;
         }},
    };

    int failed = 0;
    const auto start = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const Outcome o = criteria[i].second();
        std::printf("criterion %2zu: %s  %-58s worst %s  [%.2f s]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    o.worst.c_str(), o.seconds);
        for (const auto& p : o.problems) std::printf("              %s\n", p.c_str());
        if (!o.pass) ++failed;
    }
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%d of %zu criteria failed, %.1f s\n", failed, criteria.size(), total);
    return failed == 0 ? 0 : 1;
}
