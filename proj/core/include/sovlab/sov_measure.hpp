#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sovlab/sov_bases.hpp"

namespace sovlab {

enum class PairKind { Diagonal, OffDiag, Zero };
const char* to_string(PairKind k);

/// Classification of a Gram cell <h|k>. For OffDiag, h is k with the sites of
/// alpha set to 0 and those of beta set to 2 (1-based site numbers, ascending).
struct PairClass {
    PairKind kind = PairKind::Zero;
    std::vector<int> alpha;
    std::vector<int> beta;
    int r = 0;  ///< number of (0,2) pairs
};

/// 1_k = {a : k_a = 1}, 1-based.
std::vector<int> ones_of(const TernaryIndex& k);
/// k with alpha -> 0 and beta -> 2.
TernaryIndex substitute_pairs(const TernaryIndex& k, const std::vector<int>& alpha, const std::vector<int>& beta);
PairClass classify_pair(const TernaryIndex& h, const TernaryIndex& k);

/// Closed-form diagonal coupling <h|h> (depends on xi and eta only).
cplx diag_formula(const ModelParams& p, const TernaryIndex& h);

struct PatternViolation {
    std::size_t h = 0;
    std::size_t k = 0;
    PairKind expected = PairKind::Zero;
    double magnitude = 0.0;  ///< |N_hk| / max|N|
};

struct OffDiagCoupling {
    std::size_t h = 0;
    std::size_t k = 0;
    PairClass cls;
    cplx value;        ///< N_hk
    cplx coefficient;  ///< N_hk / (<k|k> c^r); zero when det K vanishes
};

struct GramReport {
    int sites = 0;
    CMatrix gram;  ///< gram(h, k) = <h|k>
    std::vector<cplx> diag;
    std::vector<cplx> predicted_diag;
    cplx det_k;
    double tau = kTau;
    double scale = 0.0;             ///< max |N_hk|
    double max_zero = 0.0;          ///< largest Zero-classified |N| / scale
    double min_offdiag = 0.0;       ///< smallest OffDiag |N| / scale (1 if there are none)
    double max_diag_error = 0.0;    ///< max relative deviation from diag_formula
    std::vector<PatternViolation> violations;
    std::vector<OffDiagCoupling> couplings;
};

/// Gram matrix of a basis pair with its pattern classified cell by cell. A Zero
/// cell above tau * scale and an OffDiag cell below 1e3 * tau * scale are violations.
GramReport gram(const SovBasisPair& pair, const ModelParams& p, double tau = kTau);

/// C = N_hk / (<k|k> c^r) using the measured <k|k>; throws DetKZero when |c| <= tau.
cplx extract_coefficient(const GramReport& report, const TernaryIndex& h, const TernaryIndex& k);

/// Closed-form coefficient for k = h with sites (first, second) set to (1, 1)
/// against h with those sites set to (0, 2); the other digits are read from h.
cplx coeff_r0_closed_form(const ModelParams& p, const TernaryIndex& h, int first = 1, int second = 2);

/// Spectrum {k0, k1, k2} with fixed tr K = a and b and det K = c (roots of l^3 - a l^2 + b l - c).
std::array<cplx, 3> spectrum_with_invariants(cplx a, cplx b, cplx c);

struct ScalingRow {
    std::size_t h = 0;
    std::size_t k = 0;
    PairClass cls;
    double slope = 0.0;           ///< d log|N_hk| / d log|c|
    double coefficient_spread = 0.0;  ///< max relative spread of C across the scan (OffDiag only)
};

/// Rebuilds the model for every c with W, tr K and b held fixed and fits the
/// power of c in every nonzero cell. Throws DegenerateFamily on a spectral collision.
std::vector<ScalingRow> c_scaling_scan(const ModelParams& base, const Xyz& xyz, const std::vector<cplx>& c_values);

struct DualBasisData {
    CMatrix p_covectors;  ///< rows p<h|
    CMatrix p_vectors;    ///< columns |h>p
    CMatrix measure;      ///< M = N^{-1}
    CMatrix expansion;    ///< column h: coordinates of |h>p on the right basis
    double left_orthogonality = 0.0;   ///< max |p<k|h> - delta N_h| / (||p<k||| |||h>||)
    double right_orthogonality = 0.0;  ///< same for <k|h>p
    double inverse_residual = 0.0;     ///< max |M N - I|
    double expansion_leak = 0.0;       ///< largest expansion coordinate outside {h} and its pair substitutions, relative
    double measure_leak = 0.0;         ///< largest |M_hk| outside the N pattern, relative
};

/// Throws SingularGram if the Gram matrix is numerically singular.
DualBasisData dual_bases(const SovBasisPair& pair, const GramReport& report);

struct BCoefficient {
    std::vector<int> alpha;
    std::vector<int> beta;
    cplx value;  ///< B_{alpha,beta,h}; the expansion coordinate is c^r B
};

/// B coefficients of |h>p bottom-up in #alpha from the measured couplings.
std::vector<BCoefficient> b_recursion(const GramReport& report, const TernaryIndex& h);

struct RecursionRow {
    std::string label;
    cplx lhs;
    cplx rhs;
    double residual = 0.0;
};

/// r = 0: the T2 matrix element against the one-pair product for every choice
/// of the remaining digits. r = 1 (N >= 4): the two-pair recursion among T2
/// matrix elements.
std::vector<RecursionRow> appc_recursion_check(TransferCache& cache, const SovBasisPair& pair, int r);

}  // namespace sovlab
