#include "sovlab/det0_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace sovlab {

TwistData make_khat(const TwistData& twist) {
    if (twist.kind != TwistCase::I)
        throw Error(ErrorKind::ConfigError, "make_khat needs a diagonalizable twist; pass a singular (W, K_J) directly");
    CMatrix kj = twist.k_jordan;
    const double scale = std::max(1.0, max_abs(kj));
    int target = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(kj(i, i)) < std::abs(kj(target, target))) target = i;
    kj(target, target) = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (std::abs(kj(i, i) - kj(j, j)) < 1e-8 * scale)
                throw Error(ErrorKind::SpectrumCollision, "zeroing the smallest eigenvalue merges two eigenvalues",
                            std::abs(kj(i, i) - kj(j, j)));
    // with tr K = 0 the leading term of T1 drops out and the left actions no longer close
    const cplx trace = kj.trace();
    if (std::abs(trace) < 1e-6 * scale)
        throw Error(ErrorKind::DegenerateFamily, "singular twist has tr K = 0", std::abs(trace));
    return twist_from_jordan(twist.w, kj);
}

namespace {

void require_det0(const ModelParams& p) {
    if (std::abs(p.twist.c) > kTau * std::max(1.0, max_abs(p.twist.k_matrix)))
        throw Error(ErrorKind::ConfigError, "twist has det K != 0", std::abs(p.twist.c));
}

std::vector<int> indicator(const TernaryIndex& h, int value, bool nonzero = false) {
    std::vector<int> out(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) out[i] = nonzero ? (h[i] != 0) : (h[i] == value);
    return out;
}

TernaryIndex with_digit(TernaryIndex h, int a, int v) {
    h[static_cast<std::size_t>(a - 1)] = v;
    return h;
}

int digit(const TernaryIndex& h, int a) { return h[static_cast<std::size_t>(a - 1)]; }

}  // namespace

Det0OrthoReport ortho_suite_det0(TransferCache& cache, const Xyz& xyz) {
    const ModelParams& p = cache.params();
    require_det0(p);
    Det0OrthoReport out;
    out.gram = gram(build_sov_pair(cache, xyz), p);
    const CMatrix& g = out.gram.gram;
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j)
            if (i != j) out.max_offdiag = std::max(out.max_offdiag, std::abs(g(i, j)));
    out.max_offdiag /= std::max(out.gram.scale, 1e-300);
    return out;
}

double interpolated_action_check(TransferCache& cache, const SovBasisPair& pair, const TernaryIndex& h, int m, Side side,
                                 cplx lambda) {
    const ModelParams& p = cache.params();
    require_det0(p);
    if (m != 1 && m != 2) throw Error(ErrorKind::ConfigError, "interpolated action needs m in {1, 2}");
    const int n = p.sites;
    const bool left = side == Side::Left;
    auto basis = [&](const TernaryIndex& k) -> CVector {
        const auto f = static_cast<Eigen::Index>(flat_of(k));
        return left ? CVector(pair.left.row(f).transpose()) : CVector(pair.right.col(f));
    };
    // T2(x) on a basis element, x = lambda or a node
    auto t2_action = [&](const TernaryIndex& k, cplx x) -> CVector {
        const auto z = indicator(k, 0, true);
        CVector acc = interp_asymptotic(p, 2, z, x) * basis(k);
        for (int a = 1; a <= n; ++a) {
            if (left && digit(k, a) == 1) acc += interp_weight(p, 2, a, z, x) * basis(with_digit(k, a, 0));
            if (!left && digit(k, a) == 0) acc += interp_weight(p, 2, a, z, x) * basis(with_digit(k, a, 1));
        }
        return d_poly(p, x - p.eta) * acc;
    };
    CVector rhs;
    if (m == 2) {
        rhs = t2_action(h, lambda);
    } else {
        const auto y = indicator(h, 2);
        rhs = interp_asymptotic(p, 1, y, lambda) * basis(h);
        for (int a = 1; a <= n; ++a) {
            const cplx g = interp_weight(p, 1, a, y, lambda);
            const int v = digit(h, a);
            if (left) {
                if (v == 1) rhs += g * basis(with_digit(h, a, 2));
                if (v == 2) rhs += g * t2_action(with_digit(h, a, 1), p.shifted(a, 0));
            } else {
                if (v == 0) rhs += g * basis(with_digit(h, a, 2));
                if (v == 2) rhs += g * basis(with_digit(h, a, 1));
                if (v == 1) rhs += g * t2_action(with_digit(h, a, 2), p.shifted(a, 0));
            }
        }
    }
    const CMatrix& t = cache.get(m, lambda);
    const CVector lhs = left ? CVector((basis(h).transpose() * t).transpose()) : CVector(t * basis(h));
    return rel_diff(lhs, rhs);
}

namespace {

// c with w t = c v + residual, v fixed; returns (c, relative residual).
std::pair<cplx, double> proportionality(const CVector& w, const CVector& v) {
    const cplx c = v.dot(w) / v.squaredNorm();
    const double scale = std::max(w.norm(), 1e-300);
    return {c, (w - c * v).norm() / scale};
}

BoundaryRow boundary_row(const std::string& label, const std::vector<cplx>& lambdas,
                         const std::function<std::pair<cplx, double>(cplx)>& probe,
                         const std::function<cplx(cplx)>& profile) {
    BoundaryRow row;
    row.label = label;
    std::vector<cplx> consts;
    for (const cplx l : lambdas) {
        const auto [c, res] = probe(l);
        row.residual = std::max(row.residual, res);
        consts.push_back(c / profile(l));
    }
    row.constant = consts.empty() ? cplx{} : consts.front();
    for (const cplx c : consts) row.constant_spread = std::max(row.constant_spread, rel_diff(c, row.constant));
    return row;
}

}  // namespace

std::vector<BoundaryRow> boundary_eigenstate_check(TransferCache& cache, const SovBasisPair& pair,
                                                    const std::vector<cplx>& lambdas) {
    const ModelParams& p = cache.params();
    require_det0(p);
    const int n = p.sites;
    const TernaryIndex zeros(static_cast<std::size_t>(n), 0);
    const TernaryIndex twos(static_cast<std::size_t>(n), 2);
    auto left_probe = [&](const TernaryIndex& h, int m) {
        return [&, h, m](cplx l) {
            const CVector v = pair.left.row(static_cast<Eigen::Index>(flat_of(h))).transpose();
            const CVector w = (v.transpose() * cache.get(m, l)).transpose();
            return proportionality(w, v);
        };
    };
    auto dd = [&](cplx shift) { return [&, shift](cplx l) { return d_poly(p, l - p.eta) * d_poly(p, l + shift); }; };
    std::vector<BoundaryRow> rows;
    rows.push_back(boundary_row("<0|T2", lambdas, left_probe(zeros, 2), dd(0.0)));
    rows.push_back(boundary_row("<2|T2", lambdas, left_probe(twos, 2), dd(p.eta)));
    rows.push_back(boundary_row("<0|T1", lambdas, left_probe(zeros, 1), [&](cplx l) { return d_poly(p, l); }));

    // every |h>, h in {1,2}^N, with one common prefactor
    BoundaryRow right;
    right.label = "T2|h>, h in {1,2}^N";
    bool first = true;
    for (std::size_t f = 0; f < p.dim(); ++f) {
        const auto h = ternary_of(f, n);
        if (std::find(h.begin(), h.end(), 0) != h.end()) continue;
        const BoundaryRow r = boundary_row(right.label, lambdas, [&](cplx l) {
            const CVector v = pair.right.col(static_cast<Eigen::Index>(f));
            return proportionality(cache.get(2, l) * v, v);
        }, dd(p.eta));
        right.residual = std::max(right.residual, r.residual);
        if (first) right.constant = r.constant;
        right.constant_spread = std::max({right.constant_spread, r.constant_spread, rel_diff(r.constant, right.constant)});
        first = false;
    }
    rows.push_back(right);
    return rows;
}

namespace {

cplx rayleigh(const CRow& u, const CMatrix& t, const CVector& v) { return (u * t * v)(0) / (u * v)(0); }

// <h|t> coordinates predicted from the eigenvalues
cplx right_product(const SpectralData& s, const TernaryIndex& h) {
    cplx v = 1.0;
    for (std::size_t a = 0; a < h.size(); ++a) {
        if (h[a] == 0) v *= s.t2_xi_shift[a];
        if (h[a] == 2) v *= s.t1_xi[a];
    }
    return v;
}

cplx left_product(const SpectralData& s, const TernaryIndex& h) {
    cplx v = 1.0;
    for (std::size_t a = 0; a < h.size(); ++a) {
        if (h[a] == 1) v *= s.t2_xi[a];
        if (h[a] == 2) v *= s.t1_xi[a];
    }
    return v;
}

}  // namespace

void attach_eigenvectors(SpectralData& s, const SovBasisPair& pair, const CVector& v, const CRow& u) {
    const int n = static_cast<int>(s.t1_xi.size());
    const TernaryIndex ones(static_cast<std::size_t>(n), 1);
    s.right = v / (pair.left.row(static_cast<Eigen::Index>(flat_of(ones))) * v)(0);
    s.left = u / (u * pair.right.col(0))(0);

    // both wave functions, relative to their largest coordinate
    const CVector rc = pair.left * s.right;
    const CRow lc = s.left * pair.right;
    double rs = 1e-300, ls = 1e-300, rd = 0.0, ld = 0.0;
    for (Eigen::Index f = 0; f < rc.size(); ++f) {
        const auto h = ternary_of(static_cast<std::size_t>(f), n);
        rs = std::max(rs, std::abs(rc(f)));
        ls = std::max(ls, std::abs(lc(f)));
        rd = std::max(rd, std::abs(rc(f) - right_product(s, h)));
        ld = std::max(ld, std::abs(lc(f) - left_product(s, h)));
    }
    s.right_factorization = rd / rs;
    s.left_factorization = ld / ls;
}

SpectrumReport eigensolve_sov(TransferCache& cache, const SovBasisPair& pair, cplx lambda0) {
    const ModelParams& p = cache.params();
    const int n = p.sites;
    const auto dim = static_cast<Eigen::Index>(p.dim());
    SpectrumReport out;
    out.lambda0 = lambda0;
    const EigenDecomposition eig = eig_general(cache.get(1, lambda0));
    out.eigen_residual = eig.residual_norm;

    double ev_scale = 1e-300;
    for (const cplx e : eig.eigenvalues) ev_scale = std::max(ev_scale, std::abs(e));
    out.min_gap = 1.0;
    for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i)
        for (std::size_t j = i + 1; j < eig.eigenvalues.size(); ++j)
            out.min_gap = std::min(out.min_gap, std::abs(eig.eigenvalues[i] - eig.eigenvalues[j]) / ev_scale);
    if (out.min_gap < 1e-6) throw Error(ErrorKind::SpectrumNotSimple, "T1(lambda0) has a near-degenerate spectrum", out.min_gap);

    out.t1_scale.assign(static_cast<std::size_t>(n), 0.0);
    out.t2_scale.assign(static_cast<std::size_t>(n), 0.0);

    for (Eigen::Index k = 0; k < dim; ++k) {
        SpectralData s;
        s.index = static_cast<std::size_t>(k);
        s.t1_lambda0 = eig.eigenvalues[static_cast<std::size_t>(k)];
        CVector v = eig.right.col(k);
        CRow u = eig.left.row(k);
        for (int a = 1; a <= n; ++a) {
            const cplx x = p.shifted(a, 0);
            s.t1_xi.push_back(rayleigh(u, cache.get(1, x), v));
            s.t1_xi_shift.push_back(rayleigh(u, cache.get(1, x - p.eta), v));
            s.t2_xi.push_back(rayleigh(u, cache.get(2, x), v));
            s.t2_xi_shift.push_back(rayleigh(u, cache.get(2, x - p.eta), v));
            const auto ua = static_cast<std::size_t>(a - 1);
            out.t1_scale[ua] = std::max(out.t1_scale[ua], std::abs(s.t1_xi.back()));
            out.t2_scale[ua] = std::max(out.t2_scale[ua], std::abs(s.t2_xi_shift.back()));
        }
        attach_eigenvectors(s, pair, v, u);
        out.states.push_back(std::move(s));
    }

    const CMatrix overlaps = eig.left * eig.right;
    double off = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j)
            if (i != j) off = std::max(off, std::abs(overlaps(i, j)) / std::abs(overlaps(i, i)));
    out.biorthogonality = off;
    return out;
}

ZeroPattern zero_pattern(const SpectralData& s, const SpectrumReport& spectrum, double theta) {
    const int n = static_cast<int>(s.t1_xi.size());
    std::vector<int> a_sites, b_sites;
    for (int a = 0; a < n; ++a) {
        const auto ua = static_cast<std::size_t>(a);
        const double r1 = std::abs(s.t1_xi[ua]) / std::max(spectrum.t1_scale[ua], 1e-300);
        const double r2 = std::abs(s.t2_xi_shift[ua]) / std::max(spectrum.t2_scale[ua], 1e-300);
        for (const double r : {r1, r2})
            if (r >= 0.1 * theta && r <= 10.0 * theta)
                throw Error(ErrorKind::AmbiguousPattern, "eigenvalue at site " + std::to_string(a + 1) + " is within a decade of theta", r);
        const bool t1_zero = r1 < theta, t2_zero = r2 < theta;
        if (t1_zero == t2_zero)
            throw Error(ErrorKind::PatternMissing,
                        std::string("site ") + std::to_string(a + 1) + (t1_zero ? ": both t1(xi) and t2(xi - eta) vanish" : ": neither t1(xi) nor t2(xi - eta) vanishes"),
                        std::min(r1, r2));
        (t1_zero ? b_sites : a_sites).push_back(a + 1);
    }
    ZeroPattern z;
    z.m = static_cast<int>(a_sites.size());
    z.perm = a_sites;
    z.perm.insert(z.perm.end(), b_sites.begin(), b_sites.end());
    return z;
}

cplx t2_from_pattern(const ModelParams& p, const ZeroPattern& z, cplx lambda) {
    cplx v = transfer_asymptotic(p.twist, 2) * d_poly(p, lambda - p.eta);
    for (std::size_t i = 0; i < z.perm.size(); ++i)
        v *= lambda - p.shifted(z.perm[i], static_cast<int>(i) < z.m ? 1 : 0);
    return v;
}

double t2_pattern_residual(TransferCache& cache, const SpectralData& s, const ZeroPattern& z, const std::vector<cplx>& lambdas) {
    const ModelParams& p = cache.params();
    double worst = 0.0;
    for (const cplx l : lambdas) {
        const cplx measured = (s.left * cache.get(2, l) * s.right)(0) / (s.left * s.right)(0);
        worst = std::max(worst, rel_diff(measured, t2_from_pattern(p, z, l)));
    }
    return worst;
}

cplx SeparateState::coordinate(const TernaryIndex& h) const {
    cplx v = 1.0;
    for (std::size_t a = 0; a < h.size(); ++a) v *= coeff[a][static_cast<std::size_t>(h[a])];
    return v;
}

SeparateState eigen_covector_state(const SpectralData& s) {
    SeparateState st;
    for (std::size_t a = 0; a < s.t1_xi.size(); ++a) st.coeff.push_back({cplx{1.0}, s.t2_xi[a], s.t1_xi[a]});
    return st;
}

CRow separate_covector(const SeparateState& alpha, const SovBasisPair& pair, const ModelParams& p) {
    CRow out = CRow::Zero(pair.left.cols());
    for (std::size_t f = 0; f < p.dim(); ++f) {
        const auto h = ternary_of(f, p.sites);
        out += (alpha.coordinate(h) / diag_formula(p, h)) * pair.left.row(static_cast<Eigen::Index>(f));
    }
    return out;
}

cplx scalar_product_sum(const SeparateState& alpha, const SpectralData& s, const ModelParams& p) {
    cplx acc = 0.0;
    for (std::size_t f = 0; f < p.dim(); ++f) {
        const auto h = ternary_of(f, p.sites);
        acc += alpha.coordinate(h) * right_product(s, h) / diag_formula(p, h);
    }
    return acc;
}

namespace {

struct PatternSplit {
    std::vector<int> a_sites, b_sites;  // 1-based, in permutation order
};

PatternSplit split(const ZeroPattern& z) {
    if (z.perm.empty()) throw Error(ErrorKind::PatternMissing, "empty zero pattern");
    PatternSplit s;
    s.a_sites.assign(z.perm.begin(), z.perm.begin() + z.m);
    s.b_sites.assign(z.perm.begin() + z.m, z.perm.end());
    return s;
}

cplx x_a(const ModelParams& p, const std::vector<int>& a_sites, cplx l) {
    cplx v = 1.0;
    for (const int a : a_sites) v *= (l - p.shifted(a, 0) + p.eta) / (l - p.shifted(a, 0));
    return v;
}

cplx x_b(const ModelParams& p, const std::vector<int>& b_sites, cplx l) {
    cplx v = 1.0;
    for (const int b : b_sites) v *= (l - p.shifted(b, 0) - p.eta) / (l - p.shifted(b, 0));
    return v;
}

std::vector<cplx> nodes(const ModelParams& p, const std::vector<int>& sites, int h) {
    std::vector<cplx> out;
    for (const int a : sites) out.push_back(p.shifted(a, h));
    return out;
}

cplx det_of(const CMatrix& m) { return m.size() == 0 ? cplx{1.0} : m.determinant(); }

}  // namespace

cplx scalar_product_determinant(const SeparateState& alpha, const SpectralData& s, const ZeroPattern& z, const ModelParams& p) {
    const PatternSplit sp = split(z);
    const auto m = static_cast<Eigen::Index>(sp.a_sites.size());
    const auto nb = static_cast<Eigen::Index>(sp.b_sites.size());
    auto coef = [&](int a, int h) { return alpha.coeff[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(h)]; };
    auto idx = [](int a) { return static_cast<std::size_t>(a - 1); };

    cplx pre = vandermonde(nodes(p, sp.a_sites, 1)) / vandermonde(nodes(p, sp.a_sites, 0));
    for (int a = 1; a <= p.sites; ++a) pre *= d_poly(p, p.shifted(a, 2)) / d_poly(p, p.shifted(a, 1));

    // B block: h_b in {0, 1}; the t2 factor and x_A go with h_b = 0
    CMatrix mp(nb, nb);
    for (Eigen::Index i = 0; i < nb; ++i) {
        const int b = sp.b_sites[static_cast<std::size_t>(i)];
        const cplx xb = p.shifted(b, 0), xb1 = p.shifted(b, 1);
        const cplx t2u = d_poly(p, xb1) * s.t2_xi_shift[idx(b)] / d_poly(p, p.shifted(b, 2));
        for (Eigen::Index j = 0; j < nb; ++j) {
            const double e = static_cast<double>(j);
            mp(i, j) = coef(b, 0) * x_a(p, sp.a_sites, xb) * t2u * std::pow(xb, e) + coef(b, 1) * std::pow(xb1, e);
        }
    }
    // A block: h_a in {1, 2}
    CMatrix mm(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const int a = sp.a_sites[static_cast<std::size_t>(i)];
        const cplx xa = p.shifted(a, 0), xa1 = p.shifted(a, 1);
        for (Eigen::Index j = 0; j < m; ++j) {
            const double e = static_cast<double>(j);
            mm(i, j) = coef(a, 1) * std::pow(xa, e) + coef(a, 2) * x_b(p, sp.b_sites, xa) * s.t1_xi[idx(a)] * std::pow(xa1, e);
        }
    }
    return pre * det_of(mp) / vandermonde(nodes(p, sp.b_sites, 0)) * det_of(mm) / vandermonde(nodes(p, sp.a_sites, 0));
}

cplx norm_determinant(const SpectralData& s, const ZeroPattern& z, const ModelParams& p) {
    const PatternSplit sp = split(z);
    const auto m = static_cast<Eigen::Index>(sp.a_sites.size());
    auto idx = [](int a) { return static_cast<std::size_t>(a - 1); };
    const std::vector<cplx> va = nodes(p, sp.a_sites, 0);
    cplx pre = vandermonde(nodes(p, sp.a_sites, 1)) / (vandermonde(va) * vandermonde(va));
    for (const int a : sp.a_sites) pre *= d_poly(p, p.shifted(a, 2)) / d_poly(p, p.shifted(a, 1)) * s.t1_xi[idx(a)];
    for (const int b : sp.b_sites) pre *= s.t2_xi_shift[idx(b)] * x_a(p, sp.a_sites, p.shifted(b, 0));
    CMatrix t(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const int a = sp.a_sites[static_cast<std::size_t>(i)];
        const cplx xa = p.shifted(a, 0), xa1 = p.shifted(a, 1);
        for (Eigen::Index j = 0; j < m; ++j) {
            const double e = static_cast<double>(j);
            t(i, j) = s.t1_xi_shift[idx(a)] * std::pow(xa, e) + s.t1_xi[idx(a)] * x_b(p, sp.b_sites, xa) * std::pow(xa1, e);
        }
    }
    return pre * det_of(t);
}

}  // namespace sovlab
