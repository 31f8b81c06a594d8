#pragma once

// Rational gl(d) chain shared by the gl(3) and gl(2) models.
//
// Layout: quantum site 1 is the fastest-varying digit of a basis index; in
// monodromy matrices the auxiliary leg is the slowest digit, so block (i, j)
// of an auxiliary-space matrix is the contiguous quantum-space submatrix.

#include <vector>

#include "sovlab/numkernel.hpp"

namespace sovlab {

struct ChainData {
    int d = 3;
    int sites = 1;
    cplx eta{1.0, 0.0};
    std::vector<cplx> xi;
    CMatrix K;  ///< d x d twist

    std::size_t dim() const { return ipow(static_cast<std::size_t>(d), sites); }
};

/// Monodromy K_a R_{aN}(l - xi_N) ... R_{a1}(l - xi_1) as d*d quantum blocks, block index i*d + j.
std::vector<CMatrix> monodromy_blocks(const ChainData& c, cplx lambda, std::size_t cap = kDenseCap);

/// tr_{1..m}[P^-_{1..m} M_1(l) M_2(l - eta) ... M_m(l - (m-1) eta)] as a dense matrix.
CMatrix chain_transfer(const ChainData& c, int m, cplx lambda, std::size_t cap = kDenseCap);

/// Matrix-free T_m(l) v for m = 1, 2; the operator is never stored.
CVector chain_apply_transfer(const ChainData& c, int m, cplx lambda, const CVector& v);

/// Dense T_m built column by column through the matrix-free path (large N, memory O(dim^2) only once).
CMatrix chain_transfer_columns(const ChainData& c, int m, cplx lambda, std::size_t cap = kDenseCap);

/// Single-site operator op embedded at site (1-based) of an N-site chain.
CMatrix embed_site(const CMatrix& op, int site, int sites);

/// Permutation of quantum sites a and b (1-based).
CMatrix site_swap(int d, int a, int b, int sites);

/// R_{ab}(x) = x I + eta P_{ab} between two quantum sites.
CMatrix site_r(int d, int a, int b, int sites, cplx x, cplx eta);

}  // namespace sovlab
