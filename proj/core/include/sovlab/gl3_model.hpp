#pragma once

#include <map>
#include <mutex>
#include <tuple>
#include <utility>
#include <vector>

#include "sovlab/chain.hpp"
#include "sovlab/numkernel.hpp"

namespace sovlab {

enum class TwistCase { I, II, III };

const char* to_string(TwistCase c);

/// Twist K = W K_J W^{-1} with K_J = [[k0, y1, 0], [0, k1, y2], [0, 0, k2]].
struct TwistData {
    TwistCase kind = TwistCase::I;
    CMatrix k_matrix;    ///< K
    CMatrix w;           ///< W
    CMatrix k_jordan;    ///< K_J
    CMatrix k_adjugate;  ///< adjugate of K_J
    cplx k0, k1, k2, y1, y2;
    cplx a, b, c;        ///< tr K, ((tr K)^2 - tr K^2)/2, det K
};

/// Diagonalizes K (case i); throws SpectrumNotSimple for repeated eigenvalues.
TwistData twist_from_matrix(const CMatrix& k);
/// Explicit Jordan data; the case is read off the shape of K_J.
TwistData twist_from_jordan(const CMatrix& w, const CMatrix& k_jordan);
/// Diagonal K_J = diag(k0, k1, k2) conjugated by W.
TwistData twist_from_eigenvalues(cplx k0, cplx k1, cplx k2, const CMatrix& w = CMatrix::Identity(3, 3));

CMatrix adjugate3(const CMatrix& m);

struct ModelParams {
    int sites = 1;
    cplx eta{1.0, 0.0};
    std::vector<cplx> xi;
    TwistData twist;

    /// Throws ConfigError when xi_i - xi_j hits {0, +eta, -eta}.
    void validate() const;
    std::size_t dim() const { return ipow(3, sites); }
    ChainData chain() const;
    /// xi_a - h eta, a is 1-based.
    cplx shifted(int a, int h) const { return xi[static_cast<std::size_t>(a - 1)] - static_cast<double>(h) * eta; }
};

/// R(l) = l I + eta P on C^3 (x) C^3.
CMatrix r_matrix(cplx lambda, cplx eta);
/// ||R12(l-m) R13(l) R23(m) - R23(m) R13(l) R12(l-m)|| / scale.
double check_yang_baxter(cplx lambda, cplx mu, cplx eta);
/// Full (3 * 3^N) monodromy, auxiliary leg slowest.
CMatrix monodromy(const ModelParams& p, cplx lambda);
/// ||R(l-m) M_1(l) M_2(m) - M_2(m) M_1(l) R(l-m)|| / scale.
double rtt_residual(const ModelParams& p, cplx lambda, cplx mu);
/// ||R12(l) K1 K2 - K2 K1 R12(l)|| / scale.
double scalar_yb_residual(const CMatrix& k, cplx lambda, cplx eta);

CMatrix transfer(const ModelParams& p, int m, cplx lambda);
/// prod_b (l - xi_b + eta)(l - xi_b - eta)(l - xi_b - 2 eta).
cplx qdet_identity(const ModelParams& p, cplx lambda);
/// det K * qdet_identity.
cplx qdet(const ModelParams& p, cplx lambda);
/// Central leading coefficient of T_m: tr K, b, det K for m = 1, 2, 3.
cplx transfer_asymptotic(const TwistData& t, int m);

struct FusionRow {
    int site = 0;
    double t1t1 = 0.0;     ///< T1(xi) T1(xi - eta) vs T2(xi)
    double t1t2 = 0.0;     ///< T1(xi) T2(xi - eta) vs T3(xi)
    double central = 0.0;  ///< ||T2(xi + eta)|| / scale
};
std::vector<FusionRow> fusion_residuals(const ModelParams& p);

/// d(l) = prod (l - xi_a).
cplx d_poly(const ModelParams& p, cplx lambda);
/// a(l) = d(l + eta).
cplx a_poly(const ModelParams& p, cplx lambda);
/// Interpolation weight g^{(m)}_{a,h}(l), a 1-based, m in {1, 2}.
cplx interp_weight(const ModelParams& p, int m, int a, const std::vector<int>& h, cplx lambda);
/// T^{inf}_{m,h}(l) = T_m^inf prod_b (l - xi_b^{(h_b)}).
cplx interp_asymptotic(const ModelParams& p, int m, const std::vector<int>& h, cplx lambda);

class TransferCache;
/// d(l - eta) (T^inf_{2,0}(l) + sum_a g^{(2)}_{a,0}(l) T1(xi_a - eta) T1(xi_a)).
CMatrix t2_interpolated(const ModelParams& p, cplx lambda);
CMatrix t2_interpolated(TransferCache& cache, cplx lambda);
/// T^inf_{1,h}(l) + sum_a g^{(1)}_{a,h}(l) T1(xi_a^{(h_a)}).
CMatrix t1_interpolated(TransferCache& cache, const std::vector<int>& h, cplx lambda);

/// R_{a;b_1..b_M} = R_{a b_M}(xi_a - xi_{b_M}) ... R_{a b_1}, skipping sites in `omit`.
CMatrix r_chain(const ModelParams& p, int a, const std::vector<int>& bs, const std::vector<int>& omit);
/// Relative residual of the explicit product formula for prod_j T1(xi_{a_j}); throws IndexOrder.
double product_formula_check(const ModelParams& p, const std::vector<int>& a_indices);
/// Exchange relation between hatted R-chains for a_{l-1} < (middle) < a_{k+1}.
double exchange_relation_check(const ModelParams& p, int first, const std::vector<int>& middle, int last);

CVector apply_transfer_free(const ModelParams& p, int m, cplx lambda, const CVector& v);

/// Memoized dense transfer matrices keyed by (m, lambda); safe for concurrent use.
class TransferCache {
public:
    explicit TransferCache(ModelParams p);
    const CMatrix& get(int m, cplx lambda);
    const ModelParams& params() const { return p_; }

private:
    ModelParams p_;
    std::mutex mu_;
    std::map<std::tuple<int, double, double>, CMatrix> cache_;
};

}  // namespace sovlab
