#include "sovlab/gl3_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace sovlab {

const char* to_string(TwistCase c) {
    switch (c) {
        case TwistCase::I: return "i";
        case TwistCase::II: return "ii";
        case TwistCase::III: return "iii";
    }
    return "?";
}

CMatrix adjugate3(const CMatrix& m) {
    CMatrix adj(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
            const int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
            adj(i, j) = m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
        }
    return adj;
}

namespace {

void fill_invariants(TwistData& t) {
    const CMatrix& k = t.k_matrix;
    t.a = k.trace();
    t.b = 0.5 * (t.a * t.a - (k * k).trace());
    t.c = k.determinant();
    t.k0 = t.k_jordan(0, 0);
    t.k1 = t.k_jordan(1, 1);
    t.k2 = t.k_jordan(2, 2);
    t.y1 = t.k_jordan(0, 1);
    t.y2 = t.k_jordan(1, 2);
    t.k_adjugate = adjugate3(t.k_jordan);
}

bool near(cplx a, cplx b, double scale) { return std::abs(a - b) <= 1e-12 * std::max(1.0, scale); }

}  // namespace

TwistData twist_from_jordan(const CMatrix& w, const CMatrix& kj) {
    if (w.rows() != 3 || w.cols() != 3 || kj.rows() != 3 || kj.cols() != 3)
        throw Error(ErrorKind::ConfigError, "twist matrices must be 3x3");
    const double scale = max_abs(kj);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const bool allowed = (i == j) || (j == i + 1);
            if (!allowed && std::abs(kj(i, j)) > 1e-14 * std::max(1.0, scale))
                throw Error(ErrorKind::ConfigError, "K_J must be upper bidiagonal");
        }
    if (std::abs(w.determinant()) < 1e-12) throw Error(ErrorKind::ConfigError, "W is singular");
    TwistData t;
    t.w = w;
    t.k_jordan = kj;
    t.k_matrix = w * kj * w.inverse();
    const cplx k0 = kj(0, 0), k1 = kj(1, 1), k2 = kj(2, 2), y1 = kj(0, 1), y2 = kj(1, 2);
    const auto is0 = [&](cplx v) { return near(v, 0.0, scale); };
    const auto is1 = [&](cplx v) { return near(v, 1.0, scale); };
    if (is0(y1) && is0(y2) && !near(k0, k1, scale) && !near(k1, k2, scale) && !near(k0, k2, scale)) {
        t.kind = TwistCase::I;
    } else if (is1(y1) && is0(y2) && near(k0, k1, scale) && !near(k1, k2, scale)) {
        t.kind = TwistCase::II;
    } else if (is1(y1) && is1(y2) && near(k0, k1, scale) && near(k1, k2, scale)) {
        t.kind = TwistCase::III;
    } else {
        throw Error(ErrorKind::SpectrumNotSimple, "K_J does not match case i, ii or iii");
    }
    fill_invariants(t);
    return t;
}

TwistData twist_from_eigenvalues(cplx k0, cplx k1, cplx k2, const CMatrix& w) {
    CMatrix kj = CMatrix::Zero(3, 3);
    kj(0, 0) = k0;
    kj(1, 1) = k1;
    kj(2, 2) = k2;
    return twist_from_jordan(w, kj);
}

TwistData twist_from_matrix(const CMatrix& k) {
    if (k.rows() != 3 || k.cols() != 3) throw Error(ErrorKind::ConfigError, "K must be 3x3");
    const auto eig = eig_general(k);
    const double scale = std::max(1.0, max_abs(k));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j)
            if (std::abs(eig.eigenvalues[i] - eig.eigenvalues[j]) < 1e-8 * scale)
                throw Error(ErrorKind::SpectrumNotSimple,
                            "K has a repeated eigenvalue; supply explicit (W, K_J) for cases ii and iii");
    TwistData t = twist_from_eigenvalues(eig.eigenvalues[0], eig.eigenvalues[1], eig.eigenvalues[2], eig.right);
    t.k_matrix = k;
    fill_invariants(t);
    return t;
}

void ModelParams::validate() const {
    if (sites < 1) throw Error(ErrorKind::ConfigError, "sites must be >= 1");
    if (static_cast<int>(xi.size()) != sites) throw Error(ErrorKind::ConfigError, "xi must have one entry per site");
    if (std::abs(eta) == 0.0) throw Error(ErrorKind::ConfigError, "eta must be nonzero");
    if (twist.k_matrix.rows() != 3) throw Error(ErrorKind::ConfigError, "twist is not set");
    for (int i = 0; i < sites; ++i)
        for (int j = 0; j < sites; ++j) {
            if (i == j) continue;
            const cplx dx = xi[static_cast<std::size_t>(i)] - xi[static_cast<std::size_t>(j)];
            for (int s = -1; s <= 1; ++s)
                if (std::abs(dx - static_cast<double>(s) * eta) < 1e-12 * std::abs(eta))
                    throw Error(ErrorKind::ConfigError, "inhomogeneities not in generic position");
        }
}

ChainData ModelParams::chain() const {
    ChainData c;
    c.d = 3;
    c.sites = sites;
    c.eta = eta;
    c.xi = xi;
    c.K = twist.k_matrix;
    return c;
}

CMatrix r_matrix(cplx lambda, cplx eta) { return lambda * CMatrix::Identity(9, 9) + eta * swap_operator(3); }

double check_yang_baxter(cplx lambda, cplx mu, cplx eta) {
    const CMatrix i3 = CMatrix::Identity(3, 3);
    const CMatrix p23 = kron(i3, swap_operator(3));
    const auto r12 = [&](cplx x) { return kron(r_matrix(x, eta), i3); };
    const auto r23 = [&](cplx x) { return kron(i3, r_matrix(x, eta)); };
    const auto r13 = [&](cplx x) { return CMatrix(p23 * r12(x) * p23); };
    const CMatrix lhs = r12(lambda - mu) * r13(lambda) * r23(mu);
    const CMatrix rhs = r23(mu) * r13(lambda) * r12(lambda - mu);
    const double scale = std::max({max_abs(lhs), max_abs(rhs), 1e-300});
    return max_abs(lhs - rhs) / scale;
}

CMatrix monodromy(const ModelParams& p, cplx lambda) {
    const auto blocks = monodromy_blocks(p.chain(), lambda);
    const auto dim = static_cast<Eigen::Index>(p.dim());
    CMatrix m(3 * dim, 3 * dim);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m.block(i * dim, j * dim, dim, dim) = blocks[static_cast<std::size_t>(i * 3 + j)];
    return m;
}

double rtt_residual(const ModelParams& p, cplx lambda, cplx mu) {
    const auto dim = static_cast<Eigen::Index>(p.dim());
    const auto bl = monodromy_blocks(p.chain(), lambda);
    const auto bm = monodromy_blocks(p.chain(), mu);
    const Eigen::Index big = 9 * dim;
    CMatrix m1 = CMatrix::Zero(big, big), m2 = CMatrix::Zero(big, big);
    // combined index: q + dim * (a2 + 3 * a1), auxiliary 1 slowest
    for (int a1 = 0; a1 < 3; ++a1)
        for (int b1 = 0; b1 < 3; ++b1)
            for (int a2 = 0; a2 < 3; ++a2) {
                m1.block((a2 + 3 * a1) * dim, (a2 + 3 * b1) * dim, dim, dim) = bl[static_cast<std::size_t>(a1 * 3 + b1)];
                m2.block((a1 + 3 * a2) * dim, (b1 + 3 * a2) * dim, dim, dim) = bm[static_cast<std::size_t>(a1 * 3 + b1)];
            }
    const CMatrix r = kron(r_matrix(lambda - mu, p.eta), CMatrix::Identity(dim, dim), kDenseCap * 81);
    const CMatrix lhs = r * m1 * m2;
    const CMatrix rhs = m2 * m1 * r;
    return rel_diff(lhs, rhs);
}

double scalar_yb_residual(const CMatrix& k, cplx lambda, cplx eta) {
    const CMatrix i3 = CMatrix::Identity(3, 3);
    const CMatrix k1 = kron(k, i3), k2 = kron(i3, k);
    const CMatrix r = r_matrix(lambda, eta);
    return rel_diff(CMatrix(r * k1 * k2), CMatrix(k2 * k1 * r));
}

CMatrix transfer(const ModelParams& p, int m, cplx lambda) {
    if (m < 1 || m > 3) throw Error(ErrorKind::ConfigError, "transfer order must be 1, 2 or 3");
    return chain_transfer(p.chain(), m, lambda);
}

cplx qdet_identity(const ModelParams& p, cplx lambda) {
    cplx v = 1.0;
    for (const cplx x : p.xi) v *= (lambda - x + p.eta) * (lambda - x - p.eta) * (lambda - x - 2.0 * p.eta);
    return v;
}

cplx qdet(const ModelParams& p, cplx lambda) { return p.twist.c * qdet_identity(p, lambda); }

cplx transfer_asymptotic(const TwistData& t, int m) {
    switch (m) {
        case 1: return t.a;
        case 2: return t.b;
        case 3: return t.c;
        default: throw Error(ErrorKind::ConfigError, "asymptotic order must be 1..3");
    }
}

std::vector<FusionRow> fusion_residuals(const ModelParams& p) {
    TransferCache cache(p);
    std::vector<FusionRow> rows;
    for (int a = 1; a <= p.sites; ++a) {
        const cplx x = p.shifted(a, 0);
        FusionRow r;
        r.site = a;
        const CMatrix& t1 = cache.get(1, x);
        r.t1t1 = rel_diff(CMatrix(t1 * cache.get(1, x - p.eta)), cache.get(2, x));
        r.t1t2 = rel_diff(CMatrix(t1 * cache.get(2, x - p.eta)), cache.get(3, x));
        // central zero, relative to the size of T2 at a nearby generic point
        const double scale = std::max(max_abs(cache.get(2, x)), max_abs(cache.get(2, x + 0.5 * p.eta)));
        r.central = max_abs(cache.get(2, x + p.eta)) / std::max(scale, 1e-300);
        rows.push_back(r);
    }
    return rows;
}

cplx d_poly(const ModelParams& p, cplx lambda) {
    cplx v = 1.0;
    for (const cplx x : p.xi) v *= lambda - x;
    return v;
}

cplx a_poly(const ModelParams& p, cplx lambda) { return d_poly(p, lambda + p.eta); }

cplx interp_weight(const ModelParams& p, int m, int a, const std::vector<int>& h, cplx lambda) {
    const cplx node = p.shifted(a, h[static_cast<std::size_t>(a - 1)]);
    cplx g = 1.0;
    for (int b = 1; b <= p.sites; ++b) {
        if (b == a) continue;
        const cplx xb = p.shifted(b, h[static_cast<std::size_t>(b - 1)]);
        g *= (lambda - xb) / (node - xb);
    }
    if (m == 2) g /= d_poly(p, node - p.eta);
    return g;
}

cplx interp_asymptotic(const ModelParams& p, int m, const std::vector<int>& h, cplx lambda) {
    cplx v = transfer_asymptotic(p.twist, m);
    for (int b = 1; b <= p.sites; ++b) v *= lambda - p.shifted(b, h[static_cast<std::size_t>(b - 1)]);
    return v;
}

CMatrix t2_interpolated(TransferCache& cache, cplx lambda) {
    const ModelParams& p = cache.params();
    const auto dim = static_cast<Eigen::Index>(p.dim());
    const std::vector<int> h0(static_cast<std::size_t>(p.sites), 0);
    CMatrix acc = interp_asymptotic(p, 2, h0, lambda) * CMatrix::Identity(dim, dim);
    for (int a = 1; a <= p.sites; ++a) {
        const cplx x = p.shifted(a, 0);
        acc += interp_weight(p, 2, a, h0, lambda) * (cache.get(1, x - p.eta) * cache.get(1, x));
    }
    return d_poly(p, lambda - p.eta) * acc;
}

CMatrix t2_interpolated(const ModelParams& p, cplx lambda) {
    TransferCache cache(p);
    return t2_interpolated(cache, lambda);
}

CMatrix t1_interpolated(TransferCache& cache, const std::vector<int>& h, cplx lambda) {
    const ModelParams& p = cache.params();
    const auto dim = static_cast<Eigen::Index>(p.dim());
    CMatrix acc = interp_asymptotic(p, 1, h, lambda) * CMatrix::Identity(dim, dim);
    for (int a = 1; a <= p.sites; ++a)
        acc += interp_weight(p, 1, a, h, lambda) * cache.get(1, p.shifted(a, h[static_cast<std::size_t>(a - 1)]));
    return acc;
}

CMatrix r_chain(const ModelParams& p, int a, const std::vector<int>& bs, const std::vector<int>& omit) {
    const auto dim = static_cast<Eigen::Index>(p.dim());
    CMatrix out = CMatrix::Identity(dim, dim);
    // R_{a b_M} ... R_{a b_1}: b_1 acts first, i.e. is rightmost
    for (const int b : bs) {
        if (std::find(omit.begin(), omit.end(), b) != omit.end()) continue;
        out = site_r(3, a, b, p.sites, p.shifted(a, 0) - p.shifted(b, 0), p.eta) * out;
    }
    return out;
}

namespace {
std::vector<int> range_sites(int from, int to) {
    std::vector<int> v;
    for (int i = from; i <= to; ++i) v.push_back(i);
    return v;
}
cplx n_pair(const ModelParams& p, int a, int b) {
    const cplx dx = p.shifted(a, 0) - p.shifted(b, 0);
    return p.eta * p.eta - dx * dx;
}
}  // namespace

double product_formula_check(const ModelParams& p, const std::vector<int>& a) {
    if (a.empty()) throw Error(ErrorKind::IndexOrder, "empty site list");
    for (std::size_t j = 0; j < a.size(); ++j) {
        if (a[j] < 1 || a[j] > p.sites) throw Error(ErrorKind::IndexOrder, "site index out of range");
        if (j > 0 && a[j] <= a[j - 1]) throw Error(ErrorKind::IndexOrder, "site indices must be strictly ascending");
    }
    TransferCache cache(p);
    const auto dim = static_cast<Eigen::Index>(p.dim());
    CMatrix lhs = CMatrix::Identity(dim, dim);
    for (const int s : a) lhs = lhs * cache.get(1, p.shifted(s, 0));

    const auto m = a.size();
    cplx coeff = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
        coeff *= p.eta;  // each T1(xi_a) carries R_{aa}(0) = eta P
        for (std::size_t j = i + 1; j < m; ++j) coeff *= n_pair(p, a[i], a[j]);
    }
    CMatrix left = CMatrix::Identity(dim, dim), right = CMatrix::Identity(dim, dim), twist = CMatrix::Identity(dim, dim);
    for (std::size_t j = 0; j < m; ++j) {
        const std::vector<int> before(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(j));
        const std::vector<int> after(a.begin() + static_cast<std::ptrdiff_t>(j) + 1, a.end());
        left = left * r_chain(p, a[j], range_sites(1, a[j] - 1), before);
        right = right * r_chain(p, a[j], range_sites(a[j] + 1, p.sites), after);
        twist = twist * embed_site(p.twist.k_matrix, a[j], p.sites);
    }
    const CMatrix rhs = coeff * left * twist * right;
    return rel_diff(lhs, rhs);
}

double exchange_relation_check(const ModelParams& p, int first, const std::vector<int>& middle, int last) {
    int prev = first;
    for (const int s : middle) {
        if (s <= prev) throw Error(ErrorKind::IndexOrder, "indices must be strictly ascending");
        prev = s;
    }
    if (last <= prev || last > p.sites || first < 1) throw Error(ErrorKind::IndexOrder, "indices must be strictly ascending");
    std::vector<int> omit_l = middle;
    omit_l.insert(omit_l.begin(), first);
    std::vector<int> omit_r = middle;
    omit_r.push_back(last);
    const CMatrix lhs = r_chain(p, first, range_sites(first + 1, p.sites), middle) * r_chain(p, last, range_sites(1, last - 1), middle);
    const CMatrix rhs = n_pair(p, last, first) * r_chain(p, last, range_sites(1, last - 1), omit_l) *
                        r_chain(p, first, range_sites(first + 1, p.sites), omit_r);
    return rel_diff(lhs, rhs);
}

CVector apply_transfer_free(const ModelParams& p, int m, cplx lambda, const CVector& v) {
    if (static_cast<std::size_t>(v.size()) != p.dim()) throw Error(ErrorKind::ConfigError, "state length must be 3^N");
    return chain_apply_transfer(p.chain(), m, lambda, v);
}

TransferCache::TransferCache(ModelParams p) : p_(std::move(p)) {}

const CMatrix& TransferCache::get(int m, cplx lambda) {
    const auto key = std::make_tuple(m, lambda.real(), lambda.imag());
    {
        std::lock_guard<std::mutex> lock(mu_);
        const auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    CMatrix t = transfer(p_, m, lambda);
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.emplace(key, std::move(t)).first->second;
}

}  // namespace sovlab
