#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sovlab/numkernel.hpp"

namespace sovlab::cli {

struct BenchRow {
    int sites = 0;
    std::string path;         ///< "dense" or "free"
    std::string status = "ok";  ///< "ok" or the error kind
    double seconds = 0.0;     ///< dense: build plus one apply; free: all repeats
    double applies_per_second = 0.0;
    cplx checksum;            ///< sum of the entries of T1(l) v
};

/// T1(l) v for N in [from, to] on a seeded chain, dense build versus the
/// matrix-free path. Nothing is asserted about speed; refusals are recorded.
std::vector<BenchRow> run_bench(std::uint64_t seed, int from, int to, int repeats = 3, std::size_t dense_cap = kDenseCap);

/// Header N,path,status,wall_seconds,applies_per_second,checksum_re,checksum_im.
std::string bench_csv(const std::vector<BenchRow>& rows, bool with_timing = true);

}  // namespace sovlab::cli
