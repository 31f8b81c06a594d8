#pragma once

#include <array>
#include <vector>

#include "sovlab/chain.hpp"
#include "sovlab/sov_bases.hpp"

namespace sovlab {

/// Rational gl(2) chain with a 2x2 twist K = [[a, b], [c, d]] and reference (x, y).
struct Gl2Params {
    int sites = 1;
    cplx eta{1.0, 0.0};
    std::vector<cplx> xi;
    CMatrix k = CMatrix::Identity(2, 2);
    std::array<cplx, 2> ref{cplx{1.0}, cplx{0.0}};

    /// Throws ConfigError for bad shapes, colliding xi or K proportional to I.
    void validate() const;
    std::size_t dim() const { return ipow(2, sites); }
    ChainData chain() const;
    cplx shifted(int a, int h) const { return xi[static_cast<std::size_t>(a - 1)] - static_cast<double>(h) * eta; }
};

/// b x^2 + (d - a) x y - c y^2.
cplx gl2_nk(const Gl2Params& p);
/// prod (l - xi_a + eta).
cplx gl2_a(const Gl2Params& p, cplx lambda);
/// prod (l - xi_a).
cplx gl2_d(const Gl2Params& p, cplx lambda);

CMatrix gl2_transfer(const Gl2Params& p, cplx lambda);

struct Gl2TransferChecks {
    double commutation = 0.0;  ///< ||[T(l), T(m)]|| / scale
    double leading = 0.0;      ///< deviation of T(l) / l^N from tr K at large l
    double centrality = 0.0;   ///< max_a of T(xi_a) T(xi_a - eta) off its scalar part, relative
    double qdet_form = 0.0;    ///< max_a relative deviation of that scalar from det K a(xi_a) d(xi_a - eta)
};
Gl2TransferChecks gl2_transfer_checks(const Gl2Params& p, cplx lambda, cplx mu);

/// <0| = (x) (x, y); throws DegenerateReference when n_K = 0.
CRow gl2_ref_covector(const Gl2Params& p);
/// |1> = (x) (-y, x) / n_1.
CVector gl2_ref_vector_one(const Gl2Params& p);
/// |0> = (x) (b x + d y, -(a x + c y)) / n_0.
CVector gl2_ref_vector_zero(const Gl2Params& p);

/// Left basis <0| prod (T(xi_a)/a(xi_a))^{h_a}, right basis prod (T(xi_a - eta)/a(xi_a))^{1-h_a} |1>.
SovBasisPair gl2_bases(const Gl2Params& p);

/// 1 / (V(xi) V(xi^{(h)})).
cplx gl2_measure(const Gl2Params& p, const std::vector<int>& h);

struct Gl2BasisReport {
    double offdiag = 0.0;         ///< max |<h|k>|, h != k, relative to the largest entry
    double diag_error = 0.0;      ///< max relative deviation from gl2_measure
    double ref_zero_error = 0.0;  ///< <h|0> against delta_{h,0} / V^2
    double ref_one_error = 0.0;   ///< <h|1> against delta_{h,1} / (V V^{(1)})
    double identity_error = 0.0;  ///< V sum_h V(xi^{(h)}) |h><h| against I
    double alt_right_error = -1.0;  ///< |h> from |0> via T(xi)/(det K d(xi - eta)); -1 when det K = 0
};
Gl2BasisReport gl2_basis_checks(const Gl2Params& p, const SovBasisPair& pair);

struct Gl2EigenRow {
    cplx t_lambda0;
    double right_error = 0.0;     ///< reconstructed |t> against the eigenvector
    double left_error = 0.0;      ///< reconstructed <t| against the eigen co-vector
    double alt_left_error = -1.0; ///< det K representation of <t|; -1 when det K = 0
    cplx n_t;                     ///< V(xi) <t|0>
    cplx n_t_formula;             ///< prod t(xi - eta) / a(xi)
};

struct Gl2EigenReport {
    std::vector<Gl2EigenRow> rows;
    double min_gap = 0.0;
};

/// Throws SpectrumNotSimple when T(lambda0) has a relative gap below 1e-6.
Gl2EigenReport gl2_eigen_reps(const Gl2Params& p, const SovBasisPair& pair, cplx lambda0);

}  // namespace sovlab
