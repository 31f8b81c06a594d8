#include "sovlab/chain.hpp"

#include <algorithm>
#include <numeric>

namespace sovlab {
namespace {

std::size_t stride(int d, int site) { return ipow(static_cast<std::size_t>(d), site - 1); }

int digit(std::size_t s, int d, int site) {
    return static_cast<int>((s / stride(d, site)) % static_cast<std::size_t>(d));
}

// X <- R_{a,site}(mu) X on an auxiliary-block matrix (blocks i*d+k, each dim x cols).
template <class Block>
void left_r(std::vector<Block>& x, int d, int site, cplx mu, cplx eta) {
    const std::size_t st = stride(d, site);
    const auto rows = static_cast<std::size_t>(x[0].rows());
    std::vector<Block> out(x.size());
    for (int i = 0; i < d; ++i) {
        for (int k = 0; k < d; ++k) {
            Block y = mu * x[static_cast<std::size_t>(i * d + k)];
            for (std::size_t s = 0; s < rows; ++s) {
                const int j = digit(s, d, site);
                const std::size_t sp = s + static_cast<std::size_t>(i) * st - static_cast<std::size_t>(j) * st;
                y.row(static_cast<Eigen::Index>(s)) += eta * x[static_cast<std::size_t>(j * d + k)].row(static_cast<Eigen::Index>(sp));
            }
            out[static_cast<std::size_t>(i * d + k)] = std::move(y);
        }
    }
    x = std::move(out);
}

template <class Block>
void left_k(std::vector<Block>& x, int d, const CMatrix& K) {
    std::vector<Block> out(x.size());
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            Block y = K(i, 0) * x[static_cast<std::size_t>(k)];
            for (int j = 1; j < d; ++j) y += K(i, j) * x[static_cast<std::size_t>(j * d + k)];
            out[static_cast<std::size_t>(i * d + k)] = std::move(y);
        }
    x = std::move(out);
}

// Column j of the monodromy applied to v: returns the d components M_{ij}(lambda) v.
std::vector<CVector> monodromy_column(const ChainData& c, cplx lambda, int j, const CVector& v) {
    const int d = c.d;
    std::vector<CVector> u(static_cast<std::size_t>(d), CVector::Zero(v.size()));
    u[static_cast<std::size_t>(j)] = v;
    const std::size_t rows = static_cast<std::size_t>(v.size());
    for (int n = 1; n <= c.sites; ++n) {
        const cplx mu = lambda - c.xi[static_cast<std::size_t>(n - 1)];
        const std::size_t st = stride(d, n);
        std::vector<CVector> w(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            CVector y = mu * u[static_cast<std::size_t>(i)];
            for (std::size_t s = 0; s < rows; ++s) {
                const int jj = digit(s, d, n);
                const std::size_t sp = s + static_cast<std::size_t>(i) * st - static_cast<std::size_t>(jj) * st;
                y(static_cast<Eigen::Index>(s)) += c.eta * u[static_cast<std::size_t>(jj)](static_cast<Eigen::Index>(sp));
            }
            w[static_cast<std::size_t>(i)] = std::move(y);
        }
        u = std::move(w);
    }
    std::vector<CVector> out(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        CVector y = c.K(i, 0) * u[0];
        for (int k = 1; k < d; ++k) y += c.K(i, k) * u[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(i)] = std::move(y);
    }
    return out;
}

void check_cap(const ChainData& c, std::size_t cap) {
    if (c.dim() > cap)
        throw Error(ErrorKind::SizeCap, "dense dimension " + std::to_string(c.dim()) + " exceeds cap " + std::to_string(cap),
                    static_cast<double>(c.dim()));
}

}  // namespace

std::vector<CMatrix> monodromy_blocks(const ChainData& c, cplx lambda, std::size_t cap) {
    check_cap(c, cap);
    const auto dim = static_cast<Eigen::Index>(c.dim());
    const int d = c.d;
    std::vector<CMatrix> x(static_cast<std::size_t>(d * d));
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k)
            x[static_cast<std::size_t>(i * d + k)] = (i == k) ? CMatrix(CMatrix::Identity(dim, dim)) : CMatrix(CMatrix::Zero(dim, dim));
    for (int n = 1; n <= c.sites; ++n) left_r(x, d, n, lambda - c.xi[static_cast<std::size_t>(n - 1)], c.eta);
    left_k(x, d, c.K);
    return x;
}

CMatrix chain_transfer(const ChainData& c, int m, cplx lambda, std::size_t cap) {
    check_cap(c, cap);
    const int d = c.d;
    const auto dim = static_cast<Eigen::Index>(c.dim());
    std::vector<std::vector<CMatrix>> ms;
    for (int k = 0; k < m; ++k) ms.push_back(monodromy_blocks(c, lambda - static_cast<double>(k) * c.eta, cap));

    CMatrix total = CMatrix::Zero(dim, dim);
    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    double fact = 1.0;
    for (int i = 2; i <= m; ++i) fact *= i;
    const std::size_t tuples = ipow(static_cast<std::size_t>(d), m);
    do {
        int inv = 0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inv;
        const double sign = (inv % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t t = 0; t < tuples; ++t) {
            const auto a = digits_of(t, m, d);
            CMatrix prod;
            for (int k = 0; k < m; ++k) {
                const int row = a[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])];
                const int col = a[static_cast<std::size_t>(k)];
                const CMatrix& blk = ms[static_cast<std::size_t>(k)][static_cast<std::size_t>(row * d + col)];
                prod = (k == 0) ? blk : CMatrix(prod * blk);
            }
            total += (sign / fact) * prod;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

CVector chain_apply_transfer(const ChainData& c, int m, cplx lambda, const CVector& v) {
    const int d = c.d;
    if (m == 1) {
        CVector out = CVector::Zero(v.size());
        for (int j = 0; j < d; ++j) out += monodromy_column(c, lambda, j, v)[static_cast<std::size_t>(j)];
        return out;
    }
    if (m != 2) throw Error(ErrorKind::ConfigError, "matrix-free path supports m = 1, 2");
    // T2 = 1/2 sum_{a,b} [M_aa(l) M_bb(mu) - M_ba(l) M_ab(mu)], mu = l - eta.
    const cplx mu = lambda - c.eta;
    std::vector<std::vector<CVector>> u(static_cast<std::size_t>(d));  // u[y][x] = M_xy(mu) v
    for (int y = 0; y < d; ++y) u[static_cast<std::size_t>(y)] = monodromy_column(c, mu, y, v);
    CVector s = CVector::Zero(v.size());
    for (int b = 0; b < d; ++b) s += u[static_cast<std::size_t>(b)][static_cast<std::size_t>(b)];
    CVector out = CVector::Zero(v.size());
    for (int a = 0; a < d; ++a) {
        out += monodromy_column(c, lambda, a, s)[static_cast<std::size_t>(a)];
        for (int b = 0; b < d; ++b)
            out -= monodromy_column(c, lambda, a, u[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)])[static_cast<std::size_t>(b)];
    }
    return 0.5 * out;
}

CMatrix chain_transfer_columns(const ChainData& c, int m, cplx lambda, std::size_t cap) {
    check_cap(c, cap);
    const auto dim = static_cast<Eigen::Index>(c.dim());
    CMatrix t(dim, dim);
    parallel_for(static_cast<std::size_t>(dim), [&](std::size_t k) {
        CVector e = CVector::Zero(dim);
        e(static_cast<Eigen::Index>(k)) = 1.0;
        t.col(static_cast<Eigen::Index>(k)) = chain_apply_transfer(c, m, lambda, e);
    });
    return t;
}

CMatrix embed_site(const CMatrix& op, int site, int sites) {
    const auto d = static_cast<std::size_t>(op.rows());
    const auto dim = static_cast<Eigen::Index>(ipow(d, sites));
    const std::size_t st = ipow(d, site - 1);
    CMatrix out = CMatrix::Zero(dim, dim);
    for (Eigen::Index s = 0; s < dim; ++s) {
        const auto us = static_cast<std::size_t>(s);
        const auto j = static_cast<Eigen::Index>((us / st) % d);
        for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(d); ++i) {
            if (op(i, j) == cplx(0.0)) continue;
            const auto r = static_cast<Eigen::Index>(us + static_cast<std::size_t>(i) * st - static_cast<std::size_t>(j) * st);
            out(r, s) += op(i, j);
        }
    }
    return out;
}

CMatrix site_swap(int d, int a, int b, int sites) {
    const auto dim = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(d), sites));
    CMatrix p = CMatrix::Zero(dim, dim);
    for (Eigen::Index s = 0; s < dim; ++s) {
        auto dig = digits_of(static_cast<std::size_t>(s), sites, d);
        std::swap(dig[static_cast<std::size_t>(a - 1)], dig[static_cast<std::size_t>(b - 1)]);
        p(static_cast<Eigen::Index>(flat_of(dig, d)), s) = 1.0;
    }
    return p;
}

CMatrix site_r(int d, int a, int b, int sites, cplx x, cplx eta) {
    const auto dim = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(d), sites));
    return x * CMatrix::Identity(dim, dim) + eta * site_swap(d, a, b, sites);
}

}  // namespace sovlab
