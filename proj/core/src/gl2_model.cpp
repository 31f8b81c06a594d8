#include "sovlab/gl2_model.hpp"

#include <algorithm>
#include <cmath>

namespace sovlab {

void Gl2Params::validate() const {
    if (sites < 1) throw Error(ErrorKind::ConfigError, "sites must be >= 1");
    if (static_cast<int>(xi.size()) != sites) throw Error(ErrorKind::ConfigError, "xi must have one entry per site");
    if (std::abs(eta) == 0.0) throw Error(ErrorKind::ConfigError, "eta must be nonzero");
    if (k.rows() != 2 || k.cols() != 2) throw Error(ErrorKind::ConfigError, "gl2 twist must be 2x2");
    const double scale = std::max(1.0, max_abs(k));
    if (std::abs(k(0, 1)) + std::abs(k(1, 0)) + std::abs(k(0, 0) - k(1, 1)) <= 1e-12 * scale)
        throw Error(ErrorKind::ConfigError, "K is proportional to the identity");
    for (int i = 0; i < sites; ++i)
        for (int j = i + 1; j < sites; ++j)
            for (const double s : {0.0, 1.0, -1.0})
                if (std::abs(xi[static_cast<std::size_t>(i)] - xi[static_cast<std::size_t>(j)] - s * eta) < 1e-12)
                    throw Error(ErrorKind::ConfigError, "inhomogeneities collide");
}

ChainData Gl2Params::chain() const {
    ChainData c;
    c.d = 2;
    c.sites = sites;
    c.eta = eta;
    c.xi = xi;
    c.K = k;
    return c;
}

cplx gl2_nk(const Gl2Params& p) {
    const auto [x, y] = p.ref;
    return p.k(0, 1) * x * x + (p.k(1, 1) - p.k(0, 0)) * x * y - p.k(1, 0) * y * y;
}

cplx gl2_a(const Gl2Params& p, cplx lambda) {
    cplx v = 1.0;
    for (const cplx x : p.xi) v *= lambda - x + p.eta;
    return v;
}

cplx gl2_d(const Gl2Params& p, cplx lambda) {
    cplx v = 1.0;
    for (const cplx x : p.xi) v *= lambda - x;
    return v;
}

CMatrix gl2_transfer(const Gl2Params& p, cplx lambda) { return chain_transfer(p.chain(), 1, lambda); }

Gl2TransferChecks gl2_transfer_checks(const Gl2Params& p, cplx lambda, cplx mu) {
    Gl2TransferChecks out;
    const CMatrix tl = gl2_transfer(p, lambda), tm = gl2_transfer(p, mu);
    out.commutation = max_abs(tl * tm - tm * tl) / std::max(max_abs(tl) * max_abs(tm), 1e-300);

    // T(l) / l^N = tr K + O(1/l); Richardson on two large points removes the O(1/l) term
    const auto dim = static_cast<Eigen::Index>(p.dim());
    const CMatrix id = CMatrix::Identity(dim, dim);
    const cplx big = 1e5;
    const CMatrix lead = 2.0 * gl2_transfer(p, 2.0 * big) / std::pow(2.0 * big, p.sites) - gl2_transfer(p, big) / std::pow(big, p.sites);
    out.leading = max_abs(lead - p.k.trace() * id) / std::max(1.0, std::abs(p.k.trace()));

    for (int a = 1; a <= p.sites; ++a) {
        const CMatrix prod = gl2_transfer(p, p.shifted(a, 0)) * gl2_transfer(p, p.shifted(a, 1));
        const cplx scalar = prod.trace() / static_cast<double>(dim);
        const double scale = std::max(max_abs(prod), 1e-300);
        out.centrality = std::max(out.centrality, max_abs(prod - scalar * id) / scale);
        const cplx closed = p.k.determinant() * gl2_a(p, p.shifted(a, 0)) * gl2_d(p, p.shifted(a, 1));
        out.qdet_form = std::max(out.qdet_form, rel_diff(scalar, closed));
    }
    return out;
}

namespace {

template <class Vec>
Vec tensor_power(const Vec& local, int sites) {
    const auto dim = static_cast<Eigen::Index>(ipow(2, sites));
    Vec out(dim);
    for (Eigen::Index s = 0; s < dim; ++s) {
        const auto dig = digits_of(static_cast<std::size_t>(s), sites, 2);
        cplx v = 1.0;
        for (const int d : dig) v *= local(d);
        out(s) = v;
    }
    return out;
}

std::vector<cplx> nodes(const Gl2Params& p, const std::vector<int>& h) {
    std::vector<cplx> out;
    for (int a = 1; a <= p.sites; ++a) out.push_back(p.shifted(a, h[static_cast<std::size_t>(a - 1)]));
    return out;
}

std::vector<int> constant_digits(int sites, int v) { return std::vector<int>(static_cast<std::size_t>(sites), v); }

cplx pair_product(const Gl2Params& p) {
    cplx v = 1.0;
    for (int i = 1; i <= p.sites; ++i)
        for (int j = i + 1; j <= p.sites; ++j) {
            const cplx dx = p.shifted(i, 0) - p.shifted(j, 0);
            v *= p.eta * p.eta - dx * dx;
        }
    return v;
}

}  // namespace

CRow gl2_ref_covector(const Gl2Params& p) {
    if (std::abs(gl2_nk(p)) <= 1e-12 * std::max(1.0, max_abs(p.k)))
        throw Error(ErrorKind::DegenerateReference, "n_K(x, y) vanishes");
    CRow loc(2);
    loc << p.ref[0], p.ref[1];
    return tensor_power(loc, p.sites);
}

CVector gl2_ref_vector_one(const Gl2Params& p) {
    CVector loc(2);
    loc << -p.ref[1], p.ref[0];
    const auto ones = constant_digits(p.sites, 1);
    cplx a_prod = 1.0;
    for (int n = 1; n <= p.sites; ++n) a_prod *= gl2_a(p, p.shifted(n, 0));
    // eta^N: without it <1..1|1> comes out as eta^N / (V V^(1))
    const cplx n1 = pair_product(p) * std::pow(gl2_nk(p) * p.eta, p.sites) *
                    vandermonde(nodes(p, constant_digits(p.sites, 0))) * vandermonde(nodes(p, ones)) / a_prod;
    return tensor_power(loc, p.sites) / n1;
}

CVector gl2_ref_vector_zero(const Gl2Params& p) {
    const auto [x, y] = p.ref;
    CVector loc(2);
    loc << p.k(0, 1) * x + p.k(1, 1) * y, -(p.k(0, 0) * x + p.k(1, 0) * y);
    const cplx v = vandermonde(nodes(p, constant_digits(p.sites, 0)));
    return tensor_power(loc, p.sites) / (std::pow(gl2_nk(p), p.sites) * v * v);
}

SovBasisPair gl2_bases(const Gl2Params& p) {
    p.validate();
    const int n = p.sites;
    const auto dim = static_cast<Eigen::Index>(p.dim());
    std::vector<CMatrix> up, down;  // T(xi)/a(xi), T(xi - eta)/a(xi)
    for (int a = 1; a <= n; ++a) {
        const cplx norm = gl2_a(p, p.shifted(a, 0));
        up.push_back(gl2_transfer(p, p.shifted(a, 0)) / norm);
        down.push_back(gl2_transfer(p, p.shifted(a, 1)) / norm);
    }
    SovBasisPair pair;
    pair.provenance = "gl2";
    pair.ref_covector = gl2_ref_covector(p);
    pair.ref_vector = gl2_ref_vector_one(p);
    pair.left.resize(dim, dim);
    pair.right.resize(dim, dim);
    for (Eigen::Index f = 0; f < dim; ++f) {
        const auto h = digits_of(static_cast<std::size_t>(f), n, 2);
        CRow row = pair.ref_covector;
        CVector col = pair.ref_vector;
        for (int a = 0; a < n; ++a) {
            if (h[static_cast<std::size_t>(a)] == 1) row = row * up[static_cast<std::size_t>(a)];
            if (h[static_cast<std::size_t>(a)] == 0) col = down[static_cast<std::size_t>(a)] * col;
        }
        pair.left.row(f) = row;
        pair.right.col(f) = col;
    }
    pair.left_rank_ratio = equilibrated_sigma_ratio(pair.left, true);
    pair.right_rank_ratio = equilibrated_sigma_ratio(pair.right, false);
    return pair;
}

cplx gl2_measure(const Gl2Params& p, const std::vector<int>& h) {
    return 1.0 / (vandermonde(nodes(p, constant_digits(p.sites, 0))) * vandermonde(nodes(p, h)));
}

Gl2BasisReport gl2_basis_checks(const Gl2Params& p, const SovBasisPair& pair) {
    Gl2BasisReport out;
    const int n = p.sites;
    const auto dim = static_cast<Eigen::Index>(p.dim());
    const CMatrix g = pair.left * pair.right;
    const double scale = std::max(max_abs(g), 1e-300);
    const cplx v = vandermonde(nodes(p, constant_digits(n, 0)));
    const cplx v1 = vandermonde(nodes(p, constant_digits(n, 1)));
    const CVector zero = gl2_ref_vector_zero(p);
    const CVector g0 = pair.left * zero, g1 = pair.left * pair.ref_vector;
    CMatrix resolved = CMatrix::Zero(dim, dim);
    const Eigen::Index last = dim - 1;  // h = (1, ..., 1)
    for (Eigen::Index i = 0; i < dim; ++i) {
        const auto h = digits_of(static_cast<std::size_t>(i), n, 2);
        for (Eigen::Index j = 0; j < dim; ++j)
            if (i != j) out.offdiag = std::max(out.offdiag, std::abs(g(i, j)) / scale);
        out.diag_error = std::max(out.diag_error, rel_diff(g(i, i), gl2_measure(p, h)));
        const cplx want0 = i == 0 ? 1.0 / (v * v) : cplx{};
        const cplx want1 = i == last ? 1.0 / (v * v1) : cplx{};
        out.ref_zero_error = std::max(out.ref_zero_error, std::abs(g0(i) - want0) / std::abs(1.0 / (v * v)));
        out.ref_one_error = std::max(out.ref_one_error, std::abs(g1(i) - want1) / std::abs(1.0 / (v * v1)));
        resolved += vandermonde(nodes(p, h)) * pair.right.col(i) * pair.left.row(i);
    }
    out.identity_error = max_abs(v * resolved - CMatrix::Identity(dim, dim));

    const cplx det = p.k.determinant();
    if (std::abs(det) > kTau) {
        double worst = 0.0;
        for (Eigen::Index f = 0; f < dim; ++f) {
            const auto h = digits_of(static_cast<std::size_t>(f), n, 2);
            CVector col = zero;
            for (int a = 1; a <= n; ++a)
                if (h[static_cast<std::size_t>(a - 1)] == 1)
                    col = gl2_transfer(p, p.shifted(a, 0)) * col / (det * gl2_d(p, p.shifted(a, 1)));
            worst = std::max(worst, rel_diff(CMatrix(col), CMatrix(pair.right.col(f))));
        }
        out.alt_right_error = worst;
    }
    return out;
}

Gl2EigenReport gl2_eigen_reps(const Gl2Params& p, const SovBasisPair& pair, cplx lambda0) {
    const int n = p.sites;
    const auto dim = static_cast<Eigen::Index>(p.dim());
    const EigenDecomposition eig = eig_general(gl2_transfer(p, lambda0));
    Gl2EigenReport out;
    double ev_scale = 1e-300;
    for (const cplx e : eig.eigenvalues) ev_scale = std::max(ev_scale, std::abs(e));
    out.min_gap = 1.0;
    for (std::size_t i = 0; i < eig.eigenvalues.size(); ++i)
        for (std::size_t j = i + 1; j < eig.eigenvalues.size(); ++j)
            out.min_gap = std::min(out.min_gap, std::abs(eig.eigenvalues[i] - eig.eigenvalues[j]) / ev_scale);
    if (out.min_gap < 1e-6) throw Error(ErrorKind::SpectrumNotSimple, "gl2 transfer matrix spectrum is not simple", out.min_gap);

    std::vector<CMatrix> t_xi, t_shift;
    for (int a = 1; a <= n; ++a) {
        t_xi.push_back(gl2_transfer(p, p.shifted(a, 0)));
        t_shift.push_back(gl2_transfer(p, p.shifted(a, 1)));
    }
    const cplx v = vandermonde(nodes(p, constant_digits(n, 0)));
    const cplx det = p.k.determinant();
    const CVector zero = gl2_ref_vector_zero(p);

    for (Eigen::Index k = 0; k < dim; ++k) {
        Gl2EigenRow row;
        row.t_lambda0 = eig.eigenvalues[static_cast<std::size_t>(k)];
        const CVector vr = eig.right.col(k);
        const CRow ul = eig.left.row(k);
        const cplx uv = (ul * vr)(0);
        std::vector<cplx> tx, ts;
        for (int a = 0; a < n; ++a) {
            tx.push_back((ul * t_xi[static_cast<std::size_t>(a)] * vr)(0) / uv);
            ts.push_back((ul * t_shift[static_cast<std::size_t>(a)] * vr)(0) / uv);
        }
        // <0|t> = <t|1> = 1/V
        const CVector right = vr / ((pair.ref_covector * vr)(0) * v);
        const CRow left = ul / ((ul * pair.ref_vector)(0) * v);

        CVector rec_r = CVector::Zero(dim);
        CRow rec_l = CRow::Zero(dim), rec_alt = CRow::Zero(dim);
        for (Eigen::Index f = 0; f < dim; ++f) {
            const auto h = digits_of(static_cast<std::size_t>(f), n, 2);
            const cplx vh = vandermonde(nodes(p, h));
            cplx cr = vh, cl = vh, ca = vh;
            for (int a = 1; a <= n; ++a) {
                const auto u = static_cast<std::size_t>(a - 1);
                const cplx an = gl2_a(p, p.shifted(a, 0));
                if (h[u] == 1) {
                    cr *= tx[u] / an;
                    ca *= tx[u] / (det * gl2_d(p, p.shifted(a, 1)));
                } else {
                    cl *= ts[u] / an;
                }
            }
            rec_r += cr * pair.right.col(f);
            rec_l += cl * pair.left.row(f);
            rec_alt += ca * pair.left.row(f);
        }
        row.right_error = rel_diff(CMatrix(rec_r), CMatrix(right));
        row.left_error = rel_diff(CMatrix(rec_l), CMatrix(left));
        // with <t|1> = 1/V the product equals V <t|0>, the factor the resolution of I puts in front
        row.n_t = v * (left * zero)(0);
        row.n_t_formula = 1.0;
        for (int a = 1; a <= n; ++a) row.n_t_formula *= ts[static_cast<std::size_t>(a - 1)] / gl2_a(p, p.shifted(a, 0));
        if (std::abs(det) > kTau) row.alt_left_error = rel_diff(CMatrix(row.n_t_formula * rec_alt), CMatrix(left));
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace sovlab
