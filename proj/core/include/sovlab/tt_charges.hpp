#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sovlab/det0_spectrum.hpp"

namespace sovlab {

enum class ReferenceChoice {
    Solved,       ///< |0> solved from <k|0> = delta_{k,0} on the charge-built left basis
    TwistClosed,  ///< closed-form |0> of the invertible twist
    KhatClosed,   ///< closed-form |0> of the singular twist
};
const char* to_string(ReferenceChoice r);

/// Charges TT_j(l) = sum_a t^(Khat)_{j,pi(a)}(l) |t_a><t_a| / <t_a|t_a> built on
/// the eigenbasis of T1 for an invertible twist.
struct ChargeFamily {
    ModelParams params;       ///< invertible K
    ModelParams khat_params;  ///< K with one eigenvalue set to zero
    cplx lambda0;
    CMatrix right;  ///< columns |t_a>, K model
    CMatrix left;   ///< rows <t_a|, scaled so that left * right = I
    CMatrix khat_right;
    CMatrix khat_left;
    std::vector<std::size_t> pairing;  ///< K eigenstate a -> Khat eigenstate
    std::shared_ptr<TransferCache> cache;       ///< K model
    std::shared_ptr<TransferCache> khat_cache;  ///< Khat model
    double completeness = 0.0;  ///< || sum_a P_a - I ||
    double idempotency = 0.0;   ///< max || P_a P_b - delta_ab P_a ||, via the overlap matrix

    /// Eigenvalue of T_j^(Khat)(l) assigned to K eigenstate a.
    cplx khat_eigenvalue(int j, std::size_t a, cplx lambda) const;
    /// Dense TT_j(l).
    CMatrix charge(int j, cplx lambda) const;
};

/// Both spectra must be simple (SpectrumNotSimple). Eigenstates of both models
/// are sorted by their T1(lambda0) eigenvalue and matched by rank.
ChargeFamily build_tt(const ModelParams& p, const ModelParams& khat_p, cplx lambda0);
/// lambda0 = xi_1 + 13/7 eta.
cplx default_lambda0(const ModelParams& p);

struct ChargeChecks {
    double fusion_t2t1 = 0.0;   ///< max_a ||TT2(xi^(1)) TT1(xi)|| / scale
    double fusion_t2t2 = 0.0;   ///< max_a ||TT2(xi^(1)) TT2(xi)|| / scale
    double fusion_t1t1 = 0.0;   ///< max_a ||TT1(xi^(1)) TT1(xi) - TT2(xi)|| / scale
    double central_zero = 0.0;  ///< max_a ||TT2(xi + eta)|| / scale
    double commute_tt = 0.0;    ///< ||[TT_l(l), TT_m(m)]|| / scale, l, m in {1, 2}
    double commute_t = 0.0;     ///< ||[T_l(l), TT_m(m)]|| / scale
};

ChargeChecks check_charges(const ChargeFamily& family, cplx lambda, cplx mu);

/// Site operators with T replaced by TT.
SiteOperators charge_site_operators(const ChargeFamily& family);

/// SoV bases generated by the charges from the reference co-vector of K.
SovBasisPair tt_sov_bases(const ChargeFamily& family, const Xyz& xyz, ReferenceChoice ref = ReferenceChoice::Solved);

/// Eigenstates of T1^(K) described in the charge-built bases: t-values are the
/// paired Khat eigenvalues, eigenvectors are those of K.
SpectrumReport tt_spectrum(const ChargeFamily& family, const SovBasisPair& pair);

/// <t_a^(K)| t_b^(Khat)> with both sides scaled to unit norm.
CMatrix overlap_matrix(const ChargeFamily& family);

}  // namespace sovlab
