#pragma once

#include <array>
#include <string>
#include <vector>

#include "sovlab/sov_measure.hpp"

namespace sovlab {

/// Zeroes the eigenvalue of smallest modulus in a diagonal K_J, keeping W. Throws
/// SpectrumCollision if the result is no longer simple and DegenerateFamily if
/// the remaining two eigenvalues cancel (tr K = 0).
TwistData make_khat(const TwistData& twist);

struct Det0OrthoReport {
    GramReport gram;
    double max_offdiag = 0.0;  ///< largest |<h|k>|, h != k, relative to the largest entry
};

/// Gram of the SoV bases for a twist with det K = 0; throws ConfigError otherwise.
Det0OrthoReport ortho_suite_det0(TransferCache& cache, const Xyz& xyz);

enum class Side { Left, Right };

/// Relative deviation between <h|T_m(l) (or T_m(l)|h>) computed densely and the
/// shift-operator expansion on the SoV basis; m in {1, 2}, det K = 0.
double interpolated_action_check(TransferCache& cache, const SovBasisPair& pair, const TernaryIndex& h, int m, Side side,
                                 cplx lambda);

struct BoundaryRow {
    std::string label;
    double residual = 0.0;         ///< worst eigen-relation residual over the sample points
    cplx constant;                 ///< extracted prefactor at the first point
    double constant_spread = 0.0;  ///< relative variation of the prefactor over the points
};

/// <0|T2 ~ d(l-eta)d(l), <2|T2 ~ d(l-eta)d(l+eta), T2|h> ~ d(l-eta)d(l+eta) for h in {1,2}^N,
/// <0|T1 ~ d(l). Prefactors are extracted, not assumed.
std::vector<BoundaryRow> boundary_eigenstate_check(TransferCache& cache, const SovBasisPair& pair,
                                                    const std::vector<cplx>& lambdas);

/// One common eigenstate of the transfer matrices.
struct SpectralData {
    std::size_t index = 0;
    cplx t1_lambda0;
    std::vector<cplx> t1_xi, t1_xi_shift;  ///< t1(xi_a), t1(xi_a - eta)
    std::vector<cplx> t2_xi, t2_xi_shift;  ///< t2(xi_a), t2(xi_a - eta)
    CVector right;  ///< normalized by <1|t> = 1
    CRow left;      ///< normalized by <t|0> = 1
    double right_factorization = 0.0;  ///< max relative deviation of <h|t> from its product form
    double left_factorization = 0.0;   ///< same for <t|h>
};

struct SpectrumReport {
    cplx lambda0;
    std::vector<SpectralData> states;
    std::vector<double> t1_scale;  ///< per site: max_n |t1_n(xi_a)|
    std::vector<double> t2_scale;  ///< per site: max_n |t2_n(xi_a - eta)|
    double min_gap = 0.0;          ///< smallest eigenvalue gap of T1(lambda0), relative
    double eigen_residual = 0.0;
    double biorthogonality = 0.0;  ///< max off-diagonal |<t_m|t_n>| relative to the diagonal
};

/// Normalizes v by <1|v> and u by <u|0> and measures how far both wave
/// functions are from the product form; t-values must already be set.
void attach_eigenvectors(SpectralData& s, const SovBasisPair& pair, const CVector& v, const CRow& u);

/// Diagonalizes T1(lambda0), evaluates the eigenvalues at the SoV points by Rayleigh
/// quotients and checks the factorized wave functions. Throws SpectrumNotSimple.
SpectrumReport eigensolve_sov(TransferCache& cache, const SovBasisPair& pair, cplx lambda0);

struct ZeroPattern {
    std::vector<int> perm;  ///< pi(1..N), 1-based; A = first m entries
    int m = 0;
};

/// Splits the sites by |t1(xi_a)| against theta times the site scale. Throws
/// AmbiguousPattern inside [0.1, 10] theta and PatternMissing if t2(xi - eta) does not vanish complementarily.
ZeroPattern zero_pattern(const SpectralData& s, const SpectrumReport& spectrum, double theta = 1e-6);

/// T2^inf d(l - eta) prod_A (l - xi^(1)) prod_B (l - xi).
cplx t2_from_pattern(const ModelParams& p, const ZeroPattern& z, cplx lambda);
/// Largest relative deviation of the Rayleigh values of T2 from t2_from_pattern.
double t2_pattern_residual(TransferCache& cache, const SpectralData& s, const ZeroPattern& z, const std::vector<cplx>& lambdas);

/// Factorized coordinates alpha_a^{(h)}; coeff[a-1][h].
struct SeparateState {
    std::vector<std::array<cplx, 3>> coeff;
    cplx coordinate(const TernaryIndex& h) const;
};

/// Coordinates of <t_n| (alpha^(0) = 1, alpha^(1) = t2(xi), alpha^(2) = t1(xi)).
SeparateState eigen_covector_state(const SpectralData& s);
/// sum_h alpha_h <h| / N_h, with N_h from the closed form.
CRow separate_covector(const SeparateState& alpha, const SovBasisPair& pair, const ModelParams& p);
/// Direct sum over h of alpha_h times the eigenvector coordinates over N_h.
cplx scalar_product_sum(const SeparateState& alpha, const SpectralData& s, const ModelParams& p);
/// Determinant representation of <alpha|t_n>. Throws PatternMissing for an empty permutation.
cplx scalar_product_determinant(const SeparateState& alpha, const SpectralData& s, const ZeroPattern& z, const ModelParams& p);
/// Determinant representation of <t_n|t_n>.
cplx norm_determinant(const SpectralData& s, const ZeroPattern& z, const ModelParams& p);

}  // namespace sovlab
