#include "sovlab/tt_charges.hpp"

#include <algorithm>
#include <cmath>

namespace sovlab {

const char* to_string(ReferenceChoice r) {
    switch (r) {
        case ReferenceChoice::Solved: return "solved";
        case ReferenceChoice::TwistClosed: return "twist-closed";
        case ReferenceChoice::KhatClosed: return "khat-closed";
    }
    return "unknown";
}

cplx default_lambda0(const ModelParams& p) { return p.xi.front() + (13.0 / 7.0) * p.eta; }

namespace {

double min_relative_gap(const std::vector<cplx>& ev) {
    double scale = 1e-300;
    for (const cplx e : ev) scale = std::max(scale, std::abs(e));
    double gap = 1.0;
    for (std::size_t i = 0; i < ev.size(); ++i)
        for (std::size_t j = i + 1; j < ev.size(); ++j) gap = std::min(gap, std::abs(ev[i] - ev[j]) / scale);
    return gap;
}

EigenDecomposition simple_eig(TransferCache& cache, cplx lambda0, const char* which) {
    EigenDecomposition eig = eig_general(cache.get(1, lambda0));
    const double gap = min_relative_gap(eig.eigenvalues);
    if (gap < 1e-6) throw Error(ErrorKind::SpectrumNotSimple, std::string(which) + " transfer matrix spectrum is not simple", gap);
    return eig;
}

double commutator(const CMatrix& a, const CMatrix& b) {
    const double scale = std::max(max_abs(a) * max_abs(b), 1e-300);
    return max_abs(a * b - b * a) / scale;
}

}  // namespace

ChargeFamily build_tt(const ModelParams& p, const ModelParams& khat_p, cplx lambda0) {
    if (p.sites != khat_p.sites || p.eta != khat_p.eta || p.xi != khat_p.xi)
        throw Error(ErrorKind::ConfigError, "K and Khat models must share N, eta and xi");
    ChargeFamily f;
    f.params = p;
    f.khat_params = khat_p;
    f.lambda0 = lambda0;
    f.cache = std::make_shared<TransferCache>(p);
    f.khat_cache = std::make_shared<TransferCache>(khat_p);
    // eig_general sorts by the canonical key, so matching by rank is the identity
    const EigenDecomposition ek = simple_eig(*f.cache, lambda0, "K");
    const EigenDecomposition eh = simple_eig(*f.khat_cache, lambda0, "Khat");
    f.right = ek.right;
    f.left = ek.left;
    f.khat_right = eh.right;
    f.khat_left = eh.left;
    f.pairing.resize(ek.eigenvalues.size());
    for (std::size_t a = 0; a < f.pairing.size(); ++a) f.pairing[a] = a;

    const auto dim = f.right.rows();
    const CMatrix id = CMatrix::Identity(dim, dim);
    f.completeness = max_abs(f.right * f.left - id);
    f.idempotency = max_abs(f.left * f.right - id);
    return f;
}

cplx ChargeFamily::khat_eigenvalue(int j, std::size_t a, cplx lambda) const {
    const auto b = static_cast<Eigen::Index>(pairing[a]);
    return (khat_left.row(b) * khat_cache->get(j, lambda) * khat_right.col(b))(0);
}

CMatrix ChargeFamily::charge(int j, cplx lambda) const {
    const CMatrix diag = khat_left * khat_cache->get(j, lambda) * khat_right;
    CVector values(right.cols());
    for (Eigen::Index a = 0; a < values.size(); ++a) {
        const auto b = static_cast<Eigen::Index>(pairing[static_cast<std::size_t>(a)]);
        values(a) = diag(b, b);
    }
    return right * values.asDiagonal() * left;
}

ChargeChecks check_charges(const ChargeFamily& family, cplx lambda, cplx mu) {
    const ModelParams& p = family.params;
    ChargeChecks c;
    for (int a = 1; a <= p.sites; ++a) {
        const cplx x = p.shifted(a, 0), x1 = p.shifted(a, 1);
        const CMatrix t1 = family.charge(1, x), t2 = family.charge(2, x);
        const CMatrix t1s = family.charge(1, x1), t2s = family.charge(2, x1);
        const double scale = std::max({max_abs(t1) * max_abs(t2s), max_abs(t2) * max_abs(t2s), 1e-300});
        c.fusion_t2t1 = std::max(c.fusion_t2t1, max_abs(t2s * t1) / scale);
        c.fusion_t2t2 = std::max(c.fusion_t2t2, max_abs(t2s * t2) / scale);
        c.fusion_t1t1 = std::max(c.fusion_t1t1, rel_diff(t1s * t1, t2));
        const CMatrix central = family.charge(2, p.shifted(a, -1));
        c.central_zero = std::max(c.central_zero, max_abs(central) / std::max(max_abs(family.charge(2, mu)), 1e-300));
    }
    for (int l = 1; l <= 2; ++l)
        for (int m = 1; m <= 2; ++m) {
            const CMatrix tm = family.charge(m, mu);
            c.commute_tt = std::max(c.commute_tt, commutator(family.charge(l, lambda), tm));
            c.commute_t = std::max(c.commute_t, commutator(family.cache->get(l, lambda), tm));
        }
    return c;
}

SiteOperators charge_site_operators(const ChargeFamily& family) {
    const ModelParams& p = family.params;
    SiteOperators ops;
    ops.sites = p.sites;
    ops.provenance = "charges";
    for (int a = 1; a <= p.sites; ++a) {
        const cplx x = p.shifted(a, 0);
        ops.t1_xi.push_back(family.charge(1, x));
        ops.t2_xi.push_back(family.charge(2, x));
        ops.t2_xi_shift.push_back(family.charge(2, x - p.eta));
    }
    return ops;
}

SovBasisPair tt_sov_bases(const ChargeFamily& family, const Xyz& xyz, ReferenceChoice ref) {
    const ModelParams& p = family.params;
    const SiteOperators ops = charge_site_operators(family);
    const CRow bra = reference_covector(xyz, p.twist, p.sites);
    CVector ket;
    switch (ref) {
        case ReferenceChoice::Solved: ket = reference_vector_solve(build_left_basis(ops, bra, LeftVariant::Dressed)); break;
        case ReferenceChoice::TwistClosed: ket = reference_vector_closed(xyz, p); break;
        case ReferenceChoice::KhatClosed: ket = reference_vector_closed(xyz, family.khat_params); break;
    }
    SovBasisPair pair = build_sov_pair(ops, bra, ket);
    pair.provenance = std::string("charges/") + to_string(ref);
    return pair;
}

SpectrumReport tt_spectrum(const ChargeFamily& family, const SovBasisPair& pair) {
    const ModelParams& p = family.params;
    SpectrumReport out;
    out.lambda0 = family.lambda0;
    out.t1_scale.assign(static_cast<std::size_t>(p.sites), 0.0);
    out.t2_scale.assign(static_cast<std::size_t>(p.sites), 0.0);
    std::vector<cplx> ev;
    for (std::size_t a = 0; a < family.pairing.size(); ++a) {
        SpectralData s;
        s.index = a;
        s.t1_lambda0 = family.khat_eigenvalue(1, a, family.lambda0);
        ev.push_back(s.t1_lambda0);
        for (int site = 1; site <= p.sites; ++site) {
            const cplx x = p.shifted(site, 0);
            s.t1_xi.push_back(family.khat_eigenvalue(1, a, x));
            s.t1_xi_shift.push_back(family.khat_eigenvalue(1, a, x - p.eta));
            s.t2_xi.push_back(family.khat_eigenvalue(2, a, x));
            s.t2_xi_shift.push_back(family.khat_eigenvalue(2, a, x - p.eta));
            const auto u = static_cast<std::size_t>(site - 1);
            out.t1_scale[u] = std::max(out.t1_scale[u], std::abs(s.t1_xi.back()));
            out.t2_scale[u] = std::max(out.t2_scale[u], std::abs(s.t2_xi_shift.back()));
        }
        const auto ia = static_cast<Eigen::Index>(a);
        attach_eigenvectors(s, pair, family.right.col(ia), family.left.row(ia));
        out.states.push_back(std::move(s));
    }
    out.min_gap = min_relative_gap(ev);
    out.biorthogonality = family.idempotency;
    return out;
}

CMatrix overlap_matrix(const ChargeFamily& family) {
    CMatrix out(family.left.rows(), family.khat_right.cols());
    for (Eigen::Index a = 0; a < out.rows(); ++a)
        for (Eigen::Index b = 0; b < out.cols(); ++b)
            out(a, b) = (family.left.row(a) * family.khat_right.col(b))(0) / (family.left.row(a).norm() * family.khat_right.col(b).norm());
    return out;
}

}  // namespace sovlab
