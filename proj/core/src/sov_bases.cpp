#include "sovlab/sov_bases.hpp"

#include <functional>
#include <sstream>

namespace sovlab {

std::string to_string(const TernaryIndex& h) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < h.size(); ++i) os << (i ? "," : "") << h[i];
    os << ')';
    return os.str();
}

SiteOperators site_operators(TransferCache& cache) {
    const ModelParams& p = cache.params();
    SiteOperators ops;
    ops.sites = p.sites;
    for (int n = 1; n <= p.sites; ++n) {
        const cplx x = p.shifted(n, 0);
        ops.t1_xi.push_back(cache.get(1, x));
        ops.t2_xi.push_back(cache.get(2, x));
        ops.t2_xi_shift.push_back(cache.get(2, x - p.eta));
    }
    return ops;
}

namespace {

CRow local_covector(const Xyz& xyz, const TwistData& twist) {
    CRow row(3);
    row << xyz[0], xyz[1], xyz[2];
    return row * twist.w.inverse();
}

}  // namespace

CRow reference_covector(const Xyz& xyz, const TwistData& twist, int sites) {
    const auto [x, y, z] = xyz;
    bool ok = false;
    switch (twist.kind) {
        case TwistCase::I: ok = x != 0.0 && y != 0.0 && z != 0.0; break;
        case TwistCase::II: ok = x != 0.0 && z != 0.0; break;
        case TwistCase::III: ok = x != 0.0; break;
    }
    if (!ok) throw Error(ErrorKind::DegenerateReference, std::string("reference co-vector violates the case-") + to_string(twist.kind) + " condition");
    const CRow loc = local_covector(xyz, twist);
    const auto dim = static_cast<Eigen::Index>(ipow(3, sites));
    CRow out(dim);
    for (Eigen::Index s = 0; s < dim; ++s) {
        const auto dig = ternary_of(static_cast<std::size_t>(s), sites);
        cplx v = 1.0;
        for (const int dgt : dig) v *= loc(dgt);
        out(s) = v;
    }
    return out;
}

cplx local_adjugate_pairing(const ModelParams& p, int a) {
    cplx v = p.eta / qdet_identity(p, p.shifted(a, 0));
    for (int b = a + 1; b <= p.sites; ++b) {
        const cplx dx = p.shifted(a, 0) - p.shifted(b, 0);
        v *= p.eta * p.eta - dx * dx;
    }
    return v;
}

CVector local_reference_vector(const Xyz& xyz, const ModelParams& p, int a) {
    // Orthogonal to u and u K_J, so only the adjugate pairing survives.
    const TwistData& t = p.twist;
    Eigen::Vector3cd u(xyz[0], xyz[1], xyz[2]);
    const Eigen::Vector3cd uk = t.k_jordan.transpose() * u;
    Eigen::Vector3cd v;  // bilinear cross product (Eigen's conjugates for complex scalars)
    v << u(1) * uk(2) - u(2) * uk(1), u(2) * uk(0) - u(0) * uk(2), u(0) * uk(1) - u(1) * uk(0);
    const cplx pairing = (u.transpose() * t.k_adjugate * v)(0);
    if (std::abs(pairing) <= 1e-14 * std::max(1.0, v.norm() * u.norm() * max_abs(t.k_adjugate)))
        throw Error(ErrorKind::DegenerateReference, "u, u K_J and u adj(K_J) are not independent");
    return v * (local_adjugate_pairing(p, a) / pairing);
}

CVector reference_vector_closed(const Xyz& xyz, const ModelParams& p) {
    const auto dim = static_cast<Eigen::Index>(p.dim());
    std::vector<CVector> loc;
    for (int a = 1; a <= p.sites; ++a) loc.push_back(p.twist.w * local_reference_vector(xyz, p, a));
    CVector out(dim);
    for (Eigen::Index s = 0; s < dim; ++s) {
        const auto dig = ternary_of(static_cast<std::size_t>(s), p.sites);
        cplx v = 1.0;
        for (int a = 0; a < p.sites; ++a) v *= loc[static_cast<std::size_t>(a)](dig[static_cast<std::size_t>(a)]);
        out(s) = v;
    }
    return out;
}

CVector reference_vector_solve(const CMatrix& left, double tau) {
    const double ratio = equilibrated_sigma_ratio(left, true);
    if (ratio <= tau) throw Error(ErrorKind::SingularBasis, "left family is rank deficient", ratio);
    CVector rhs = CVector::Zero(left.rows());
    rhs(0) = 1.0;
    return left.partialPivLu().solve(rhs);
}

namespace {

// Memoized construction: each member is its parent times one site operator.
template <class Vec, class Step>
std::vector<Vec> grow(std::size_t count, const Vec& root, const std::function<long long(std::size_t)>& parent, Step step) {
    std::vector<Vec> out(count);
    std::vector<char> done(count, 0);
    std::function<const Vec&(std::size_t)> get = [&](std::size_t f) -> const Vec& {
        if (!done[f]) {
            const long long par = parent(f);
            out[f] = (par < 0) ? root : step(f, get(static_cast<std::size_t>(par)));
            done[f] = 1;
        }
        return out[f];
    };
    for (std::size_t f = 0; f < count; ++f) get(f);
    return out;
}

}  // namespace

CMatrix build_left_basis(const SiteOperators& ops, const CRow& ref, LeftVariant variant) {
    const int n = ops.sites;
    const std::size_t count = ipow(3, n);
    // acting site and its operator for the member at flat index f
    auto acting = [&](std::size_t f) -> int {
        const auto h = ternary_of(f, n);
        for (int a = 0; a < n; ++a) {
            const int v = h[static_cast<std::size_t>(a)];
            if (variant == LeftVariant::PowersT1 ? v > 0 : v != 1) return a;
        }
        return -1;
    };
    auto parent = [&](std::size_t f) -> long long {
        const int a = acting(f);
        if (a < 0) return -1;
        auto h = ternary_of(f, n);
        auto& v = h[static_cast<std::size_t>(a)];
        v = (variant == LeftVariant::PowersT1) ? v - 1 : 1;
        return static_cast<long long>(flat_of(h));
    };
    auto step = [&](std::size_t f, const CRow& par) -> CRow {
        const int a = acting(f);
        const int v = ternary_of(f, n)[static_cast<std::size_t>(a)];
        const auto ua = static_cast<std::size_t>(a);
        if (variant == LeftVariant::PowersT1 || v == 2) return par * ops.t1_xi[ua];
        return par * ops.t2_xi_shift[ua];
    };
    const auto rows = grow<CRow>(count, ref, parent, step);
    CMatrix out(static_cast<Eigen::Index>(count), ref.size());
    for (std::size_t f = 0; f < count; ++f) out.row(static_cast<Eigen::Index>(f)) = rows[f];
    return out;
}

CMatrix build_right_basis(const SiteOperators& ops, const CVector& ref, RightVariant variant) {
    const int n = ops.sites;
    const std::size_t count = ipow(3, n);
    auto acting = [&](std::size_t f) -> int {
        const auto h = ternary_of(f, n);
        for (int a = 0; a < n; ++a)
            if (h[static_cast<std::size_t>(a)] > 0) return a;
        return -1;
    };
    auto parent = [&](std::size_t f) -> long long {
        const int a = acting(f);
        if (a < 0) return -1;
        auto h = ternary_of(f, n);
        auto& v = h[static_cast<std::size_t>(a)];
        v = (variant == RightVariant::PowersT1) ? v - 1 : 0;
        return static_cast<long long>(flat_of(h));
    };
    auto step = [&](std::size_t f, const CVector& par) -> CVector {
        const int a = acting(f);
        const int v = ternary_of(f, n)[static_cast<std::size_t>(a)];
        const auto ua = static_cast<std::size_t>(a);
        if (variant == RightVariant::PowersT1 || v == 2) return ops.t1_xi[ua] * par;
        return ops.t2_xi[ua] * par;
    };
    const auto cols = grow<CVector>(count, ref, parent, step);
    CMatrix out(ref.size(), static_cast<Eigen::Index>(count));
    for (std::size_t f = 0; f < count; ++f) out.col(static_cast<Eigen::Index>(f)) = cols[f];
    return out;
}

SovBasisPair build_sov_pair(const SiteOperators& ops, const CRow& ref_covector, const CVector& ref_vector) {
    SovBasisPair pair;
    pair.ref_covector = ref_covector;
    pair.ref_vector = ref_vector;
    pair.provenance = ops.provenance;
    pair.left = build_left_basis(ops, ref_covector, LeftVariant::Dressed);
    pair.right = build_right_basis(ops, ref_vector, RightVariant::Dressed);
    pair.left_rank_ratio = equilibrated_sigma_ratio(pair.left, true);
    pair.right_rank_ratio = equilibrated_sigma_ratio(pair.right, false);
    return pair;
}

SovBasisPair build_sov_pair(TransferCache& cache, const Xyz& xyz) {
    const ModelParams& p = cache.params();
    return build_sov_pair(site_operators(cache), reference_covector(xyz, p.twist, p.sites), reference_vector_closed(xyz, p));
}

cplx alpha_factor(const ModelParams& p, const TernaryIndex& h) {
    cplx v = 1.0;
    for (int a = 1; a <= p.sites; ++a)
        if (h[static_cast<std::size_t>(a - 1)] == 0) v *= qdet(p, p.shifted(a, 0));
    return v;
}

}  // namespace sovlab
