#include "bench_table.hpp"

#include <chrono>
#include <cstdio>

#include "sovlab/sampler.hpp"

namespace sovlab::cli {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

CVector probe_vector(std::size_t dim) {
    CVector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(1.0 + 0.25 * static_cast<double>(i % 7), 0.5 - 0.125 * static_cast<double>(i % 5));
    return v;
}

}  // namespace

std::vector<BenchRow> run_bench(std::uint64_t seed, int from, int to, int repeats, std::size_t dense_cap) {
    if (from < 1 || to < from) throw Error(ErrorKind::ConfigError, "bench range needs 1 <= from <= to");
    if (repeats < 1) throw Error(ErrorKind::ConfigError, "bench needs at least one repeat");
    std::vector<BenchRow> rows;
    for (int n = from; n <= to; ++n) {
        Sampler s(seed);
        const ModelParams p = s.draw_params(n);
        const ChainData c = p.chain();
        const cplx lambda = p.xi.front() + cplx(0.3125, 0.1875);
        const CVector v = probe_vector(p.dim());

        BenchRow dense{n, "dense"};
        try {
            const auto t0 = Clock::now();
            const CMatrix t = chain_transfer_columns(c, 1, lambda, dense_cap);
            const CVector y = t * v;
            dense.seconds = since(t0);
            dense.applies_per_second = 1.0 / std::max(dense.seconds, 1e-12);
            dense.checksum = y.sum();
        } catch (const Error& e) {
            dense.status = to_string(e.kind());
        }
        rows.push_back(dense);

        BenchRow free{n, "free"};
        const auto t0 = Clock::now();
        CVector y;
        for (int r = 0; r < repeats; ++r) y = chain_apply_transfer(c, 1, lambda, v);
        free.seconds = since(t0);
        free.applies_per_second = repeats / std::max(free.seconds, 1e-12);
        free.checksum = y.sum();
        rows.push_back(free);
    }
    return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows, bool with_timing) {
    std::string out = "N,path,status,wall_seconds,applies_per_second,checksum_re,checksum_im\n";
    char buf[256];
    for (const auto& r : rows) {
        const double secs = with_timing ? r.seconds : 0.0;
        const double rate = with_timing ? r.applies_per_second : 0.0;
        std::snprintf(buf, sizeof buf, "%d,%s,%s,%.6g,%.6g,%.17g,%.17g\n", r.sites, r.path.c_str(), r.status.c_str(), secs, rate,
                      r.checksum.real(), r.checksum.imag());
        out += buf;
    }
    return out;
}

}  // namespace sovlab::cli
