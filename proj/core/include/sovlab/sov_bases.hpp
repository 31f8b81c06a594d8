#pragma once

#include <array>
#include <string>
#include <vector>

#include "sovlab/gl3_model.hpp"

namespace sovlab {

/// Multi-index h in {0,1,2}^N; digit a-1 is h_a. Flat order has site 1 fastest.
using TernaryIndex = std::vector<int>;

inline TernaryIndex ternary_of(std::size_t flat, int sites) { return digits_of(flat, sites, 3); }
inline std::size_t flat_of(const TernaryIndex& h) { return flat_of(h, 3); }
std::string to_string(const TernaryIndex& h);

/// Left family: A = <L| prod T1(xi_n)^{h_n}; B = <1| prod T2(xi_n - eta)^{[h_n=0]} T1(xi_n)^{[h_n=2]}.
enum class LeftVariant { PowersT1, Dressed };
/// Right family: A = prod T1(xi_n)^{h_n} |R>; B = prod T2(xi_n)^{[h_n=1]} T1(xi_n)^{[h_n=2]} |0>.
enum class RightVariant { PowersT1, Dressed };

/// The per-site operators a basis is generated from; lets the transfer matrices
/// and the spectral-projector charges share one construction.
struct SiteOperators {
    int sites = 0;
    std::vector<CMatrix> t1_xi;        ///< T1(xi_n)
    std::vector<CMatrix> t2_xi;        ///< T2(xi_n)
    std::vector<CMatrix> t2_xi_shift;  ///< T2(xi_n - eta)
    std::string provenance = "transfer";
};

SiteOperators site_operators(TransferCache& cache);

using Xyz = std::array<cplx, 3>;

/// <1| = (x) (x,y,z) W^{-1}; throws DegenerateReference if the case condition fails.
CRow reference_covector(const Xyz& xyz, const TwistData& twist, int sites);
/// Value of u adj(K_J) |0,a> fixed by <0|0> = 1:
/// eta prod_{b>a} (eta^2 - (xi_a - xi_b)^2) / qdet_identity(xi_a).
cplx local_adjugate_pairing(const ModelParams& p, int a);
/// Local 3-vector |0,a> (before the W rotation), a is 1-based. It satisfies
/// u |0,a> = u K_J |0,a> = 0 and u adj(K_J) |0,a> = local_adjugate_pairing, u = (x,y,z).
CVector local_reference_vector(const Xyz& xyz, const ModelParams& p, int a);
/// |0> = Gamma_W (x) |0,a>.
CVector reference_vector_closed(const Xyz& xyz, const ModelParams& p);
/// Solves <k|v> = delta_{k,0}; throws SingularBasis.
CVector reference_vector_solve(const CMatrix& left, double tau = kTau);

/// Rows are co-vectors in flat order.
CMatrix build_left_basis(const SiteOperators& ops, const CRow& ref, LeftVariant variant);
/// Columns are vectors in flat order.
CMatrix build_right_basis(const SiteOperators& ops, const CVector& ref, RightVariant variant);

struct SovBasisPair {
    CMatrix left;   ///< rows <h|
    CMatrix right;  ///< columns |h>
    CRow ref_covector;
    CVector ref_vector;
    LeftVariant variant = LeftVariant::Dressed;
    std::string provenance = "transfer";
    double left_rank_ratio = 0.0;
    double right_rank_ratio = 0.0;
};

/// Dressed left basis, closed-form |0>, dressed right basis, and rank ratios.
SovBasisPair build_sov_pair(TransferCache& cache, const Xyz& xyz);
SovBasisPair build_sov_pair(const SiteOperators& ops, const CRow& ref_covector, const CVector& ref_vector);

/// alpha_h = prod_n qdet(xi_n)^{[h_n = 0]}.
cplx alpha_factor(const ModelParams& p, const TernaryIndex& h);

}  // namespace sovlab
