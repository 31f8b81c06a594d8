#include "sovlab/sov_measure.hpp"

#include <algorithm>
#include <cmath>

namespace sovlab {

const char* to_string(PairKind k) {
    switch (k) {
        case PairKind::Diagonal: return "Diagonal";
        case PairKind::OffDiag: return "OffDiag";
        case PairKind::Zero: return "Zero";
    }
    return "Unknown";
}

std::vector<int> ones_of(const TernaryIndex& k) {
    std::vector<int> out;
    for (std::size_t a = 0; a < k.size(); ++a)
        if (k[a] == 1) out.push_back(static_cast<int>(a) + 1);
    return out;
}

TernaryIndex substitute_pairs(const TernaryIndex& k, const std::vector<int>& alpha, const std::vector<int>& beta) {
    TernaryIndex h = k;
    for (const int a : alpha) h[static_cast<std::size_t>(a - 1)] = 0;
    for (const int b : beta) h[static_cast<std::size_t>(b - 1)] = 2;
    return h;
}

PairClass classify_pair(const TernaryIndex& h, const TernaryIndex& k) {
    PairClass out;
    if (h == k) {
        out.kind = PairKind::Diagonal;
        return out;
    }
    if (h.size() != k.size()) return out;
    for (std::size_t a = 0; a < k.size(); ++a) {
        if (k[a] != 1) {
            if (h[a] != k[a]) return out;
            continue;
        }
        if (h[a] == 0) out.alpha.push_back(static_cast<int>(a) + 1);
        if (h[a] == 2) out.beta.push_back(static_cast<int>(a) + 1);
    }
    if (out.alpha.size() != out.beta.size() || out.alpha.empty()) {
        out.alpha.clear();
        out.beta.clear();
        return out;
    }
    out.kind = PairKind::OffDiag;
    out.r = static_cast<int>(out.alpha.size());
    return out;
}

cplx diag_formula(const ModelParams& p, const TernaryIndex& h) {
    std::vector<cplx> plain, once, twice;
    cplx ratio = 1.0;
    for (int a = 1; a <= p.sites; ++a) {
        const int ha = h[static_cast<std::size_t>(a - 1)];
        if (ha != 0) ratio *= d_poly(p, p.shifted(a, 1)) / d_poly(p, p.shifted(a, 2));
        plain.push_back(p.shifted(a, 0));
        once.push_back(p.shifted(a, ha != 0 ? 1 : 0));
        twice.push_back(p.shifted(a, ha == 2 ? 1 : 0));
    }
    const cplx v = vandermonde(plain);
    return ratio * v * v / (vandermonde(once) * vandermonde(twice));
}

GramReport gram(const SovBasisPair& pair, const ModelParams& p, double tau) {
    GramReport rep;
    rep.sites = p.sites;
    rep.tau = tau;
    rep.det_k = p.twist.c;
    rep.gram = pair.left * pair.right;
    rep.scale = std::max(max_abs(rep.gram), 1e-300);
    const std::size_t n = p.dim();
    rep.min_offdiag = 1.0;
    for (std::size_t f = 0; f < n; ++f) {
        const auto h = ternary_of(f, p.sites);
        const cplx measured = rep.gram(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(f));
        const cplx predicted = diag_formula(p, h);
        rep.diag.push_back(measured);
        rep.predicted_diag.push_back(predicted);
        rep.max_diag_error = std::max(rep.max_diag_error, rel_diff(measured, predicted));
    }
    for (std::size_t kf = 0; kf < n; ++kf) {
        const auto k = ternary_of(kf, p.sites);
        for (std::size_t hf = 0; hf < n; ++hf) {
            if (hf == kf) continue;
            const auto h = ternary_of(hf, p.sites);
            const cplx v = rep.gram(static_cast<Eigen::Index>(hf), static_cast<Eigen::Index>(kf));
            const double mag = std::abs(v) / rep.scale;
            const PairClass cls = classify_pair(h, k);
            if (cls.kind == PairKind::Zero) {
                rep.max_zero = std::max(rep.max_zero, mag);
                if (mag > tau) rep.violations.push_back({hf, kf, cls.kind, mag});
                continue;
            }
            rep.min_offdiag = std::min(rep.min_offdiag, mag);
            if (mag <= 1e3 * tau) rep.violations.push_back({hf, kf, cls.kind, mag});
            cplx coeff = 0.0;
            if (std::abs(rep.det_k) > tau)
                coeff = v / (rep.diag[kf] * std::pow(rep.det_k, cls.r));
            rep.couplings.push_back({hf, kf, cls, v, coeff});
        }
    }
    return rep;
}

cplx extract_coefficient(const GramReport& report, const TernaryIndex& h, const TernaryIndex& k) {
    const PairClass cls = classify_pair(h, k);
    if (cls.kind != PairKind::OffDiag)
        throw Error(ErrorKind::ConfigError, "cell " + to_string(h) + "," + to_string(k) + " is not an off-diagonal coupling");
    if (std::abs(report.det_k) <= report.tau) throw Error(ErrorKind::DetKZero, "coefficient needs det K != 0", std::abs(report.det_k));
    const auto hf = static_cast<Eigen::Index>(flat_of(h));
    const auto kf = static_cast<Eigen::Index>(flat_of(k));
    return report.gram(hf, kf) / (report.gram(kf, kf) * std::pow(report.det_k, cls.r));
}

cplx coeff_r0_closed_form(const ModelParams& p, const TernaryIndex& h, int first, int second) {
    const cplx x1 = p.shifted(first, 0);
    const cplx x2 = p.shifted(second, 0);
    const cplx eta = p.eta;
    cplx v = d_poly(p, x2 - eta) / d_poly(p, x1 - eta) * qdet_identity(p, x1) * eta * eta / ((x1 - x2 + eta) * (x1 - x2 + eta));
    for (int a = 1; a <= p.sites; ++a) {
        if (a == first || a == second) continue;
        const int ha = h[static_cast<std::size_t>(a - 1)];
        const cplx s2 = p.shifted(a, ha == 2 ? 1 : 0);
        const cplx s0 = p.shifted(a, ha == 0 ? 0 : 1);
        v *= (x1 - eta - s2) * (x2 - s0) / ((x2 - eta - s2) * (x1 - s0));
    }
    return v;
}

std::array<cplx, 3> spectrum_with_invariants(cplx a, cplx b, cplx c) {
    CMatrix comp = CMatrix::Zero(3, 3);
    comp(0, 0) = a;
    comp(0, 1) = -b;
    comp(0, 2) = c;
    comp(1, 0) = 1.0;
    comp(2, 1) = 1.0;
    const auto ev = eig_general(comp).eigenvalues;
    return {ev[0], ev[1], ev[2]};
}

namespace {

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Orders the new roots to follow the previous ones, so K moves continuously along the scan.
std::array<cplx, 3> follow(const std::array<cplx, 3>& prev, std::array<cplx, 3> roots) {
    std::array<int, 3> perm{0, 1, 2}, best = perm;
    double best_cost = 1e300;
    do {
        double cost = 0;
        for (int i = 0; i < 3; ++i) cost += std::abs(prev[static_cast<std::size_t>(i)] - roots[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]);
        if (cost < best_cost) {
            best_cost = cost;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {roots[static_cast<std::size_t>(best[0])], roots[static_cast<std::size_t>(best[1])], roots[static_cast<std::size_t>(best[2])]};
}

}  // namespace

std::vector<ScalingRow> c_scaling_scan(const ModelParams& base, const Xyz& xyz, const std::vector<cplx>& c_values) {
    if (c_values.size() < 3) throw Error(ErrorKind::ConfigError, "scan needs at least three det K values");
    const cplx a = base.twist.a;
    const cplx b = base.twist.b;
    std::vector<GramReport> reports;
    std::array<cplx, 3> prev{base.twist.k0, base.twist.k1, base.twist.k2};
    for (const cplx c : c_values) {
        if (std::abs(c) <= kTau) throw Error(ErrorKind::DetKZero, "scan values must have det K != 0");
        auto roots = follow(prev, spectrum_with_invariants(a, b, c));
        const double spread = std::max({std::abs(roots[0]), std::abs(roots[1]), std::abs(roots[2]), 1.0});
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                if (std::abs(roots[static_cast<std::size_t>(i)] - roots[static_cast<std::size_t>(j)]) < 1e-6 * spread)
                    throw Error(ErrorKind::DegenerateFamily, "spectrum collision along the det K scan", std::abs(c));
        prev = roots;
        ModelParams q = base;
        q.twist = twist_from_eigenvalues(roots[0], roots[1], roots[2], base.twist.w);
        TransferCache cache(q);
        reports.push_back(gram(build_sov_pair(cache, xyz), q));
    }

    std::vector<double> logc;
    for (const cplx c : c_values) logc.push_back(std::log(std::abs(c)));
    std::vector<ScalingRow> rows;
    const std::size_t n = base.dim();
    for (std::size_t kf = 0; kf < n; ++kf) {
        const auto k = ternary_of(kf, base.sites);
        for (std::size_t hf = 0; hf < n; ++hf) {
            const auto h = ternary_of(hf, base.sites);
            const PairClass cls = classify_pair(h, k);
            if (cls.kind == PairKind::Zero) continue;
            std::vector<double> logv;
            std::vector<cplx> coeffs;
            for (const auto& rep : reports) {
                logv.push_back(std::log(std::abs(rep.gram(static_cast<Eigen::Index>(hf), static_cast<Eigen::Index>(kf)))));
                if (cls.kind == PairKind::OffDiag) coeffs.push_back(extract_coefficient(rep, h, k));
            }
            ScalingRow row{hf, kf, cls, fit_slope(logc, logv), 0.0};
            for (const cplx v : coeffs) row.coefficient_spread = std::max(row.coefficient_spread, rel_diff(v, coeffs.front()));
            rows.push_back(row);
        }
    }
    return rows;
}

DualBasisData dual_bases(const SovBasisPair& pair, const GramReport& report) {
    const CMatrix& g = report.gram;
    const double ratio = equilibrated_sigma_ratio(g, true);
    if (ratio <= report.tau * 1e-3) throw Error(ErrorKind::SingularGram, "Gram matrix is numerically singular", ratio);
    const Eigen::Index n = g.rows();
    CMatrix d = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) d(i, i) = report.diag[static_cast<std::size_t>(i)];

    DualBasisData out;
    out.p_vectors = pair.left.partialPivLu().solve(d);
    out.p_covectors = pair.right.transpose().partialPivLu().solve(d).transpose();
    out.measure = g.partialPivLu().inverse();
    out.expansion = out.measure * d;

    const CMatrix lp = pair.left * out.p_vectors;
    const CMatrix qr = out.p_covectors * pair.right;
    // each pairing is measured against the norms of its two factors
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const cplx target = (i == j) ? report.diag[static_cast<std::size_t>(j)] : cplx(0.0);
            const double sr = std::max(pair.left.row(i).norm() * out.p_vectors.col(j).norm(), 1e-300);
            const double sl = std::max(out.p_covectors.row(j).norm() * pair.right.col(i).norm(), 1e-300);
            out.right_orthogonality = std::max(out.right_orthogonality, std::abs(lp(i, j) - target) / sr);
            out.left_orthogonality = std::max(out.left_orthogonality, std::abs(qr(j, i) - target) / sl);
        }
    }
    out.inverse_residual = max_abs(out.measure * g - CMatrix::Identity(n, n));

    const double mscale = std::max(max_abs(out.measure), 1e-300);
    for (Eigen::Index h = 0; h < n; ++h) {
        const auto hi = ternary_of(static_cast<std::size_t>(h), report.sites);
        const double cscale = std::max(out.expansion.col(h).cwiseAbs().maxCoeff(), 1e-300);
        for (Eigen::Index s = 0; s < n; ++s) {
            const auto si = ternary_of(static_cast<std::size_t>(s), report.sites);
            if (classify_pair(si, hi).kind != PairKind::Zero) continue;
            out.expansion_leak = std::max(out.expansion_leak, std::abs(out.expansion(s, h)) / cscale);
            out.measure_leak = std::max(out.measure_leak, std::abs(out.measure(s, h)) / mscale);
        }
    }
    return out;
}

namespace {

// All ways to pick equal-size disjoint (alpha, beta) from `ones`, ordered by size.
std::vector<std::pair<std::vector<int>, std::vector<int>>> pair_choices(const std::vector<int>& ones) {
    std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
    const std::size_t m = ones.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < m; ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
        const auto dig = digits_of(code, static_cast<int>(m), 3);
        std::vector<int> al, be;
        for (std::size_t i = 0; i < m; ++i) {
            if (dig[i] == 1) al.push_back(ones[i]);
            if (dig[i] == 2) be.push_back(ones[i]);
        }
        if (!al.empty() && al.size() == be.size()) out.emplace_back(al, be);
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first.size() < y.first.size(); });
    return out;
}

bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

std::vector<BCoefficient> b_recursion(const GramReport& report, const TernaryIndex& h) {
    if (std::abs(report.det_k) <= report.tau) throw Error(ErrorKind::DetKZero, "B coefficients need det K != 0", std::abs(report.det_k));
    const cplx c = report.det_k;
    // Cbar_s^r = N_{s,r} / (<s|s> c^{pairs})
    auto cbar = [&](const TernaryIndex& s, const TernaryIndex& r) {
        const auto sf = static_cast<Eigen::Index>(flat_of(s));
        const auto rf = static_cast<Eigen::Index>(flat_of(r));
        const int pairs = classify_pair(s, r).r;
        return report.gram(sf, rf) / (report.gram(sf, sf) * std::pow(c, pairs));
    };
    std::vector<BCoefficient> out;
    for (const auto& [al, be] : pair_choices(ones_of(h))) {
        const TernaryIndex s = substitute_pairs(h, al, be);
        cplx v = cbar(s, h);
        for (const auto& prev : out) {
            if (prev.alpha.size() >= al.size()) continue;
            if (!subset_of(prev.alpha, al) || !subset_of(prev.beta, be)) continue;
            v += prev.value * cbar(s, substitute_pairs(h, prev.alpha, prev.beta));
        }
        out.push_back({al, be, -v});
    }
    return out;
}

std::vector<RecursionRow> appc_recursion_check(TransferCache& cache, const SovBasisPair& pair, int r) {
    const ModelParams& p = cache.params();
    const int n = p.sites;
    const cplx eta = p.eta;
    auto elem = [&](const TernaryIndex& h, const CMatrix& op, const TernaryIndex& k) -> cplx {
        return (pair.left.row(static_cast<Eigen::Index>(flat_of(h))) * op * pair.right.col(static_cast<Eigen::Index>(flat_of(k))))(0, 0);
    };
    auto x = [&](int a, int s) { return p.shifted(a, s); };
    std::vector<RecursionRow> rows;
    if (r == 0) {
        if (n < 2) throw Error(ErrorKind::ConfigError, "r = 0 check needs N >= 2");
        const CMatrix& t2 = cache.get(2, x(2, 0));
        for (std::size_t code = 0; code < ipow(3, n - 2); ++code) {
            const auto rest = digits_of(code, n - 2, 3);
            TernaryIndex k11{1, 1}, k01{0, 1};
            k11.insert(k11.end(), rest.begin(), rest.end());
            k01.insert(k01.end(), rest.begin(), rest.end());
            // A single power of (xi_1 - xi_2 + eta): with the squared power the identity
            // is off by exactly that factor, and only the single power reproduces the one-pair coefficient.
            cplx pre = d_poly(p, x(2, 1)) / d_poly(p, x(1, 1)) * eta / (x(1, 0) - x(2, 0) + eta);
            for (int a = 3; a <= n; ++a) {
                const cplx s0 = x(a, rest[static_cast<std::size_t>(a - 3)] == 0 ? 0 : 1);
                pre *= (x(2, 0) - s0) / (x(1, 0) - s0);
            }
            RecursionRow row;
            row.label = "r=0 h=" + to_string(k11);
            row.lhs = elem(k11, t2, k01);
            const auto kf = static_cast<Eigen::Index>(flat_of(k11));
            row.rhs = pre * (pair.left.row(kf) * pair.right.col(kf))(0, 0);
            row.residual = rel_diff(row.lhs, row.rhs);
            rows.push_back(row);
        }
        return rows;
    }
    if (r != 1 || n < 4) throw Error(ErrorKind::ConfigError, "recursion check supports r = 0 (N >= 2) and r = 1 (N >= 4)");
    // Sites 1..2r+2 carry the pairs; the remaining digits are scanned.
    const int pairs_end = 2 * r + 2;
    auto cn = [&](int a) { return p.twist.c * qdet_identity(p, x(a, 0)); };
    for (std::size_t code = 0; code < ipow(3, n - pairs_end); ++code) {
        const auto rest = digits_of(code, n - pairs_end, 3);
        auto idx = [&](std::vector<int> head) {
            head.insert(head.end(), rest.begin(), rest.end());
            return head;
        };
        auto hr = [&](int j) { return rest[static_cast<std::size_t>(j - pairs_end - 1)]; };
        // p: (0,2) on every later pair, q: (1,1)
        std::vector<int> pv, qv;
        for (int a = 1; a <= r; ++a) {
            pv.insert(pv.end(), {0, 2});
            qv.insert(qv.end(), {1, 1});
        }
        auto with = [&](std::vector<int> base, std::initializer_list<std::pair<int, int>> sets) {
            for (const auto& [pos, v] : sets) base[static_cast<std::size_t>(pos - 1)] = v;
            return base;
        };
        auto cat = [&](int h1, int h2, const std::vector<int>& tail) {
            std::vector<int> head{h1, h2};
            head.insert(head.end(), tail.begin(), tail.end());
            return idx(head);
        };
        auto rcoef = [&](int a) {  // r_{2a+1,2}
            const int s = 2 * a + 1;
            cplx v = d_poly(p, x(2, 1)) / d_poly(p, x(s, 1));
            for (int m = 0; m <= r; ++m) v *= (x(2, 0) - x(2 * m + 2, 1)) / (x(s, 0) - x(2 * m + 2, 1));
            for (int m = 0; m <= r; ++m)
                if (m != a) v *= (x(2, 0) - x(2 * m + 1, 0)) / (x(s, 0) - x(2 * m + 1, 0));
            for (int j = pairs_end + 1; j <= n; ++j) {
                const cplx t = x(j, hr(j) == 0 ? 0 : 1);
                v *= (x(2, 0) - t) / (x(s, 0) - t);
            }
            return v;
        };
        auto scoef = [&](int a, int b) {  // s_{1,2,2a+1,2b}
            const int s = 2 * a + 1, t = 2 * b + 2;
            cplx v = 1.0;
            for (int i = 1; i <= 2; ++i) v *= (x(s, 1) - x(i, 0)) / (x(t, 1) - x(i, 0));
            for (int m = 1; m <= r; ++m)
                if (m != b) v *= (x(s, 0) - x(2 * m + 2, 0)) / (x(t, 0) - x(2 * m + 2, 0));
            for (int m = 1; m <= r; ++m) v *= (x(s, 1) - x(2 * m + 1, 0)) / (x(t, 1) - x(2 * m + 1, 0));
            for (int j = pairs_end + 1; j <= n; ++j) {
                const cplx u = x(j, hr(j) == 2 ? 1 : 0);
                v *= (x(s, 1) - u) / (x(t, 1) - u);
            }
            return v;
        };
        RecursionRow row;
        row.label = "r=1 h=" + to_string(cat(1, 1, pv));
        row.lhs = elem(cat(1, 1, pv), cache.get(2, x(2, 0)), cat(0, 1, qv));
        cplx rhs = 0.0;
        for (int s = 1; s <= r; ++s)
            rhs += cn(3) * rcoef(0) * scoef(1, s) *
                   elem(cat(1, 1, with(pv, {{1, 1}, {2 * s, 1}})), cache.get(2, x(2 * s + 2, 0)), cat(1, 1, with(qv, {{1, 0}})));
        for (int a = 1; a <= r; ++a)
            for (int b = 1; b <= r; ++b)
                rhs += cn(2 * a + 1) * rcoef(a) * scoef(a, b) *
                       elem(cat(1, 1, with(pv, {{2 * a - 1, 1}, {2 * b, 1}})), cache.get(2, x(2 * b + 2, 0)), cat(0, 1, qv));
        row.rhs = rhs;
        row.residual = rel_diff(row.lhs, row.rhs);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace sovlab
