#include "sovlab/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

#include "sovlab/det0_spectrum.hpp"
#include "sovlab/sampler.hpp"
#include "sovlab/sov_measure.hpp"
#include "sovlab/tt_charges.hpp"

namespace sovlab {

const char* to_string(Algebra a) { return a == Algebra::Gl2 ? "gl2" : "gl3"; }

const Metric* SuiteResult::find(const std::string& name) const {
    for (const auto& m : metrics)
        if (m.name == name) return &m;
    return nullptr;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"yangbaxter", "fusion",         "bases",     "gram",
                                                "measure",    "dual",           "det0",      "scalarproducts",
                                                "ttcharges",  "gl2",            "appendixA", "appendixC"};
    return names;
}

bool is_suite(const std::string& name) {
    const auto& n = suite_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

std::uint64_t attempt_seed(std::uint64_t seed, int attempt) {
    return seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(attempt);
}

namespace {

constexpr double kConditionFloor = 1e-5;

bool retryable(ErrorKind k) {
    switch (k) {
        case ErrorKind::DegenerateReference:
        case ErrorKind::SingularBasis:
        case ErrorKind::DegenerateFamily:
        case ErrorKind::SingularGram:
        case ErrorKind::SpectrumCollision:
        case ErrorKind::SpectrumNotSimple:
        case ErrorKind::AmbiguousPattern:
        case ErrorKind::PatternMissing: return true;
        default: return false;
    }
}

class Ctx {
public:
    Ctx(const SuiteConfig& cfg, std::uint64_t seed, SuiteResult& out) : cfg_(cfg), rng_(seed), out_(out) {}

    const SuiteConfig& cfg() const { return cfg_; }
    Sampler& rng() { return rng_; }
    bool sampled() const { return !cfg_.model.has_value(); }

    int sites() const {
        if (cfg_.algebra == Algebra::Gl2 && cfg_.gl2) return cfg_.gl2->sites;
        if (cfg_.model) return cfg_.model->sites;
        return cfg_.sites;
    }

    ModelParams model(TwistCase kind = TwistCase::I) {
        if (cfg_.model) return *cfg_.model;
        return rng_.draw_params(cfg_.sites, kind);
    }

    Xyz xyz() { return cfg_.xyz ? *cfg_.xyz : rng_.draw_xyz(); }

    Gl2Params gl2() {
        if (cfg_.gl2) return *cfg_.gl2;
        return rng_.draw_gl2_params(cfg_.sites);
    }

    /// Generic spectral parameter off the sampler grids.
    cplx point(cplx centre) { return centre + rng_.grid(6, 4, 3) + cplx(0.1234, 0.0567); }

    /// Bounds are pinned for N <= 3; above that each extra site widens them by
    /// 1e3, except for `pinned` metrics whose bound is stated for N = 4 itself.
    double growth() const { return sites() > 3 ? std::pow(1e3, sites() - 3) : 1.0; }

    void upper(const std::string& name, double value, double tol, bool pinned = false) {
        double limit = cfg_.tol.value_or(pinned ? tol : tol * growth());
        if (const auto it = cfg_.tol_overrides.find(name); it != cfg_.tol_overrides.end()) limit = it->second;
        out_.metrics.push_back({name, value, limit, Bound::AtMost});
    }
    void lower(const std::string& name, double value, double limit, bool sized = false) {
        if (sized) limit /= growth();
        if (const auto it = cfg_.tol_overrides.find(name); it != cfg_.tol_overrides.end()) limit = it->second;
        out_.metrics.push_back({name, value, limit, Bound::AtLeast});
    }
    /// Sampled draws whose SoV families are close to rank deficient are redrawn:
    /// they measure the conditioning of the draw, not the identities under test.
    const SovBasisPair& conditioned(const SovBasisPair& pair) {
        const double r = std::min(pair.left_rank_ratio, pair.right_rank_ratio);
        extract("rank_ratio", r);
        if (sampled() && r < kConditionFloor) throw Error(ErrorKind::SingularBasis, "ill-conditioned draw", r);
        return pair;
    }

    void extract(const std::string& name, cplx v) { out_.extracted.emplace_back(name, v); }
    void note(const std::string& s) { out_.notes.push_back(s); }
    SuiteResult& out() { return out_; }

private:
    const SuiteConfig& cfg_;
    Sampler rng_;
    SuiteResult& out_;
};

const char* case_tag(TwistCase k) {
    switch (k) {
        case TwistCase::I: return "case_i";
        case TwistCase::II: return "case_ii";
        case TwistCase::III: return "case_iii";
    }
    return "case";
}

double local_reference_residual(const ModelParams& p, const Xyz& xyz) {
    const Eigen::RowVector3cd u(xyz[0], xyz[1], xyz[2]);
    double worst = 0.0;
    for (int a = 1; a <= p.sites; ++a) {
        const CVector v = local_reference_vector(xyz, p, a);
        const double scale = u.norm() * v.norm() * std::max(1.0, max_abs(p.twist.k_jordan));
        worst = std::max(worst, std::abs((u * v)(0)) / scale);
        worst = std::max(worst, std::abs((u * p.twist.k_jordan * v)(0)) / scale);
        worst = std::max(worst, rel_diff((u * p.twist.k_adjugate * v)(0), local_adjugate_pairing(p, a)));
    }
    return worst;
}

double ref_delta_residual(const SovBasisPair& pair) {
    CVector e0 = CVector::Zero(pair.left.rows());
    e0(0) = 1.0;
    return rel_diff(CVector(pair.left * pair.ref_vector), e0);
}

SeparateState random_separate(Sampler& rng, int sites) {
    SeparateState s;
    for (int a = 0; a < sites; ++a)
        s.coeff.push_back({rng.nonzero_grid(6, 4, 5, 0.3), rng.nonzero_grid(6, 4, 5, 0.3), rng.nonzero_grid(6, 4, 5, 0.3)});
    return s;
}

ModelParams singular_model(Ctx& ctx) {
    ModelParams p = ctx.model(TwistCase::I);
    if (std::abs(p.twist.c) > kTau * std::max(1.0, max_abs(p.twist.k_matrix))) p.twist = make_khat(p.twist);
    return p;
}

void add_spectrum_metrics(Ctx& ctx, const SpectrumReport& sp, const SovBasisPair& pair, const ModelParams& p,
                          TransferCache* cache, int samples, const std::string& prefix) {
    double right_f = 0, left_f = 0, pattern = 0, sp_det = 0, sp_sum = 0, norm = 0;
    for (const auto& st : sp.states) {
        right_f = std::max(right_f, st.right_factorization);
        left_f = std::max(left_f, st.left_factorization);
        const ZeroPattern z = zero_pattern(st, sp);
        if (cache) {
            const cplx l0 = ctx.point(p.xi.front()), l1 = ctx.point(p.xi.front());
            pattern = std::max(pattern, t2_pattern_residual(*cache, st, z, {l0, l1}));
        }
        for (int i = 0; i < samples; ++i) {
            const SeparateState alpha = random_separate(ctx.rng(), p.sites);
            const cplx direct = (separate_covector(alpha, pair, p) * st.right)(0);
            sp_det = std::max(sp_det, rel_diff(direct, scalar_product_determinant(alpha, st, z, p)));
            sp_sum = std::max(sp_sum, rel_diff(direct, scalar_product_sum(alpha, st, p)));
        }
        norm = std::max(norm, rel_diff((st.left * st.right)(0), norm_determinant(st, z, p)));
    }
    ctx.upper(prefix + "factorization_right", right_f, 1e-7);
    ctx.upper(prefix + "factorization_left", left_f, 1e-7);
    if (cache) ctx.upper(prefix + "t2_from_pattern", pattern, 1e-8);
    ctx.upper(prefix + "scalar_product_determinant", sp_det, 1e-7);
    ctx.upper(prefix + "scalar_product_sum", sp_sum, 1e-7);
    ctx.upper(prefix + "norm_determinant", norm, 1e-7);
    ctx.lower(prefix + "spectral_gap", sp.min_gap, 1e-6);
}

// ---------------------------------------------------------------------------

void suite_yangbaxter(Ctx& ctx) {
    const ModelParams p = ctx.model();
    const cplx l = ctx.point(0.0), m = ctx.point(0.0);
    ctx.upper("yang_baxter", check_yang_baxter(l, m, p.eta), 1e-11);
    ctx.upper("rtt", rtt_residual(p, l, m), 1e-11);
    ctx.upper("scalar_yang_baxter", scalar_yb_residual(p.twist.k_matrix, l - m, p.eta), 1e-11);
}

void suite_fusion(Ctx& ctx) {
    const ModelParams p = ctx.model();
    TransferCache cache(p);
    double t1t1 = 0, t1t2 = 0, central = 0;
    for (const auto& r : fusion_residuals(p)) {
        t1t1 = std::max(t1t1, r.t1t1);
        t1t2 = std::max(t1t2, r.t1t2);
        central = std::max(central, r.central);
    }
    ctx.upper("fusion_t1t1", t1t1, 1e-10);
    ctx.upper("fusion_t1t2", t1t2, 1e-10);
    ctx.upper("central_zero", central, 1e-10);

    double qd = 0;
    const auto dim = static_cast<Eigen::Index>(p.dim());
    for (int i = 0; i < 5; ++i) {
        const cplx l = ctx.point(p.xi.front());
        qd = std::max(qd, rel_diff(transfer(p, 3, l), qdet(p, l) * CMatrix::Identity(dim, dim)));
    }
    ctx.upper("quantum_determinant", qd, 1e-10);

    double t2i = 0, t1i = 0;
    for (int i = 0; i < 2; ++i) {
        const cplx l = ctx.point(p.xi.front());
        t2i = std::max(t2i, rel_diff(t2_interpolated(cache, l), cache.get(2, l)));
        TernaryIndex h(static_cast<std::size_t>(p.sites));
        for (auto& d : h) d = static_cast<int>(ctx.rng().integer(0, 2));
        t1i = std::max(t1i, rel_diff(t1_interpolated(cache, h, l), cache.get(1, l)));
    }
    ctx.upper("t2_interpolation", t2i, 1e-9);
    ctx.upper("t1_interpolation", t1i, 1e-9);
    for (int m = 1; m <= 3; ++m) ctx.extract("t" + std::to_string(m) + "_leading", transfer_asymptotic(p.twist, m));
}

void suite_bases_gl2(Ctx& ctx) {
    const Gl2Params p = ctx.gl2();
    const SovBasisPair pair = gl2_bases(p);
    ctx.lower("rank_left", pair.left_rank_ratio, 1e-9);
    ctx.lower("rank_right", pair.right_rank_ratio, 1e-9);
    const Gl2BasisReport b = gl2_basis_checks(p, pair);
    ctx.upper("ref_zero", b.ref_zero_error, 1e-9);
    ctx.upper("ref_one", b.ref_one_error, 1e-9);
}

void suite_bases(Ctx& ctx) {
    if (ctx.cfg().algebra == Algebra::Gl2) return suite_bases_gl2(ctx);
    std::vector<TwistCase> kinds{TwistCase::I, TwistCase::II, TwistCase::III};
    if (!ctx.sampled()) kinds = {ctx.cfg().model->twist.kind};
    for (const TwistCase kind : kinds) {
        const ModelParams p = ctx.model(kind);
        const Xyz xyz = ctx.xyz();
        TransferCache cache(p);
        const SovBasisPair pair = build_sov_pair(cache, xyz);
        const std::string tag = case_tag(kind);
        ctx.lower("rank_left." + tag, pair.left_rank_ratio, 1e-9);
        ctx.lower("rank_right." + tag, pair.right_rank_ratio, 1e-9);
        ctx.upper("ref_delta." + tag, ref_delta_residual(pair), 1e-10);
        ctx.upper("local_reference." + tag, local_reference_residual(p, xyz), 1e-11);
        const CVector solved = reference_vector_solve(pair.left);
        ctx.upper("ref_closed_vs_solved." + tag, rel_diff(solved, pair.ref_vector), 1e-9);
    }
}

void keep(Ctx& ctx, const CMatrix& g, const CMatrix* m, int base) {
    if (!ctx.cfg().keep_matrices) return;
    ctx.out().gram = g;
    if (m) ctx.out().measure = *m;
    ctx.out().index_base = base;
}

double gl2_diag_error(const Gl2Params& p, const CMatrix& g) {
    double worst = 0;
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        worst = std::max(worst, rel_diff(g(i, i), gl2_measure(p, digits_of(static_cast<std::size_t>(i), p.sites, 2))));
    return worst;
}

void suite_gram_gl2(Ctx& ctx, bool with_measure) {
    const Gl2Params p = ctx.gl2();
    const SovBasisPair pair = gl2_bases(p);
    const Gl2BasisReport b = gl2_basis_checks(p, pair);
    const CMatrix g = pair.left * pair.right;
    ctx.upper("offdiag", b.offdiag, 1e-9);
    ctx.upper("diag_formula", b.diag_error, 1e-9);
    if (!with_measure) return keep(ctx, g, nullptr, 2);
    const CMatrix m = g.partialPivLu().inverse();
    const auto n = g.rows();
    ctx.upper("inverse", max_abs(m * g - CMatrix::Identity(n, n)), 1e-8);
    ctx.upper("resolution_of_identity", b.identity_error, 1e-9);
    ctx.upper("measure_diag", gl2_diag_error(p, CMatrix(m.inverse())), 1e-8);
    keep(ctx, g, &m, 2);
}

void suite_gram(Ctx& ctx) {
    if (ctx.cfg().algebra == Algebra::Gl2) return suite_gram_gl2(ctx, false);
    const ModelParams p = ctx.model();
    const Xyz xyz = ctx.xyz();
    TransferCache cache(p);
    const GramReport rep = gram(ctx.conditioned(build_sov_pair(cache, xyz)), p);
    ctx.upper("zero_cells", rep.max_zero, 1e-9);
    ctx.lower("offdiag_cells", rep.min_offdiag, 1e-6, true);
    ctx.upper("diag_formula", rep.max_diag_error, 1e-8);

    double coeff = 0;
    std::size_t one_pair = 0;
    for (const auto& c : rep.couplings) {
        if (c.cls.r != 1) continue;
        ++one_pair;
        const cplx closed = coeff_r0_closed_form(p, ternary_of(c.h, p.sites), c.cls.alpha.front(), c.cls.beta.front());
        coeff = std::max(coeff, rel_diff(c.coefficient, closed));
        if (one_pair == 1) ctx.extract("one_pair_coefficient", c.coefficient);
    }
    if (one_pair > 0)
        ctx.upper("one_pair_coefficient", coeff, 1e-8);
    else
        ctx.note("one_pair_coefficient: no (0,2) couplings at N = 1");
    ctx.extract("det_k", rep.det_k);

    if (p.sites > 4) {
        ctx.note("det K scan: skipped above N = 4");
    } else {
        const cplx c0 = p.twist.c;
        const std::vector<cplx> cs{c0, 0.7 * c0, 0.49 * c0, 0.343 * c0};
        double slope = 0, spread = 0;
        for (const auto& row : c_scaling_scan(p, xyz, cs)) {
            slope = std::max(slope, std::abs(row.slope - row.cls.r));
            spread = std::max(spread, row.coefficient_spread);
        }
        ctx.upper("det_k_slope", slope, 1e-3, true);
        ctx.upper("det_k_coefficient_spread", spread, 1e-6, true);
    }
    keep(ctx, rep.gram, nullptr, 3);
}

void suite_measure(Ctx& ctx) {
    if (ctx.cfg().algebra == Algebra::Gl2) return suite_gram_gl2(ctx, true);
    const ModelParams p = ctx.model();
    TransferCache cache(p);
    const SovBasisPair pair = ctx.conditioned(build_sov_pair(cache, ctx.xyz()));
    const GramReport rep = gram(pair, p);
    const DualBasisData d = dual_bases(pair, rep);
    ctx.upper("diag_formula", rep.max_diag_error, 1e-8);
    ctx.upper("inverse", d.inverse_residual, 1e-8, true);
    ctx.upper("measure_pattern", d.measure_leak, 1e-8);
    keep(ctx, rep.gram, &d.measure, 3);
}

void suite_dual(Ctx& ctx) {
    const ModelParams p = ctx.model();
    TransferCache cache(p);
    const SovBasisPair pair = ctx.conditioned(build_sov_pair(cache, ctx.xyz()));
    const GramReport rep = gram(pair, p);
    const DualBasisData d = dual_bases(pair, rep);
    ctx.upper("p_covectors", d.left_orthogonality, 1e-8);
    ctx.upper("p_vectors", d.right_orthogonality, 1e-8);
    ctx.upper("expansion_pattern", d.expansion_leak, 1e-8);
    if (p.sites < 2) return ctx.note("b_recursion: needs N >= 2");

    const TernaryIndex h(static_cast<std::size_t>(p.sites), 1);
    const auto hf = static_cast<Eigen::Index>(flat_of(h));
    const double scale = d.expansion.col(hf).cwiseAbs().maxCoeff();
    double worst = std::abs(d.expansion(hf, hf) - 1.0);
    for (const auto& b : b_recursion(rep, h)) {
        const auto sf = static_cast<Eigen::Index>(flat_of(substitute_pairs(h, b.alpha, b.beta)));
        const cplx predicted = std::pow(rep.det_k, static_cast<int>(b.alpha.size())) * b.value;
        worst = std::max(worst, std::abs(d.expansion(sf, hf) - predicted) / scale);
    }
    ctx.upper("b_recursion", worst, 1e-7, true);
}

void suite_det0(Ctx& ctx) {
    const ModelParams p = singular_model(ctx);
    const Xyz xyz = ctx.xyz();
    TransferCache cache(p);
    const SovBasisPair pair = ctx.conditioned(build_sov_pair(cache, xyz));
    const Det0OrthoReport o = ortho_suite_det0(cache, xyz);
    ctx.upper("offdiag", o.max_offdiag, 1e-9);
    ctx.upper("diag_formula", o.gram.max_diag_error, 1e-8);

    for (const Side side : {Side::Left, Side::Right}) {
        double worst = 0;
        for (int i = 0; i < 10; ++i) {
            TernaryIndex h(static_cast<std::size_t>(p.sites));
            for (auto& v : h) v = static_cast<int>(ctx.rng().integer(0, 2));
            const cplx l = ctx.point(p.xi.front());
            for (int m = 1; m <= 2; ++m) worst = std::max(worst, interpolated_action_check(cache, pair, h, m, side, l));
        }
        ctx.upper(side == Side::Left ? "action_left" : "action_right", worst, 1e-8);
    }

    std::vector<cplx> ls;
    for (int i = 0; i < 3; ++i) ls.push_back(ctx.point(p.xi.front()));
    double res = 0, spread = 0;
    for (const auto& row : boundary_eigenstate_check(cache, pair, ls)) {
        res = std::max(res, row.residual);
        spread = std::max(spread, row.constant_spread);
        ctx.extract("boundary:" + row.label, row.constant);
    }
    ctx.upper("boundary_eigen", res, 1e-8);
    ctx.upper("boundary_constant_spread", spread, 1e-8);

    if (!ctx.sampled()) return;
    // k0 = k1 in one Jordan block, the other eigenvalue set to zero
    TwistData t2 = ctx.rng().draw_twist(TwistCase::II);
    CMatrix kj = t2.k_jordan;
    kj(2, 2) = 0.0;
    ModelParams q = p;
    q.twist = twist_from_jordan(t2.w, kj);
    TransferCache qc(q);
    const Det0OrthoReport oq = ortho_suite_det0(qc, ctx.xyz());
    ctx.upper("offdiag.case_ii", oq.max_offdiag, 1e-9);
    ctx.upper("diag_formula.case_ii", oq.gram.max_diag_error, 1e-8);
}

void suite_scalarproducts(Ctx& ctx) {
    const ModelParams p = singular_model(ctx);
    TransferCache cache(p);
    const SovBasisPair pair = ctx.conditioned(build_sov_pair(cache, ctx.xyz()));
    const SpectrumReport sp = eigensolve_sov(cache, pair, default_lambda0(p));
    add_spectrum_metrics(ctx, sp, pair, p, &cache, p.sites <= 2 ? 20 : 5, "");
}

void suite_ttcharges(Ctx& ctx) {
    ModelParams p = ctx.model();
    if (std::abs(p.twist.c) <= kTau) throw Error(ErrorKind::ConfigError, "charges need an invertible twist");
    ModelParams ph = p;
    ph.twist = make_khat(p.twist);
    const ChargeFamily fam = build_tt(p, ph, default_lambda0(p));
    const ChargeChecks c = check_charges(fam, ctx.point(p.xi.front()), ctx.point(p.xi.front()));
    ctx.upper("fusion_t2t1", c.fusion_t2t1, 1e-8);
    ctx.upper("fusion_t2t2", c.fusion_t2t2, 1e-8);
    ctx.upper("fusion_t1t1", c.fusion_t1t1, 1e-8);
    ctx.upper("central_zero", c.central_zero, 1e-8);
    ctx.upper("commute_charges", c.commute_tt, 1e-8);
    ctx.upper("commute_transfer", c.commute_t, 1e-8);

    const SovBasisPair pair = ctx.conditioned(tt_sov_bases(fam, ctx.xyz()));
    const GramReport rep = gram(pair, p);
    double off = 0;
    for (Eigen::Index i = 0; i < rep.gram.rows(); ++i)
        for (Eigen::Index j = 0; j < rep.gram.cols(); ++j)
            if (i != j) off = std::max(off, std::abs(rep.gram(i, j)));
    ctx.upper("offdiag", off / std::max(rep.scale, 1e-300), 1e-8);
    ctx.upper("diag_formula", rep.max_diag_error, 1e-8);
    add_spectrum_metrics(ctx, tt_spectrum(fam, pair), pair, p, nullptr, 5, "");
}

void suite_gl2(Ctx& ctx) {
    const Gl2Params p = ctx.gl2();
    const Gl2TransferChecks t = gl2_transfer_checks(p, ctx.point(p.xi.front()), ctx.point(p.xi.front()));
    ctx.upper("commutation", t.commutation, 1e-11);
    ctx.upper("leading", t.leading, 1e-7);
    ctx.upper("centrality", t.centrality, 1e-10);
    ctx.upper("qdet_form", t.qdet_form, 1e-10);

    const SovBasisPair pair = gl2_bases(p);
    const Gl2BasisReport b = gl2_basis_checks(p, pair);
    ctx.upper("offdiag", b.offdiag, 1e-9);
    ctx.upper("diag_formula", b.diag_error, 1e-9);
    ctx.upper("ref_zero", b.ref_zero_error, 1e-9);
    ctx.upper("ref_one", b.ref_one_error, 1e-9);
    ctx.upper("resolution_of_identity", b.identity_error, 1e-9);
    if (b.alt_right_error >= 0) ctx.upper("right_from_zero", b.alt_right_error, 1e-9);

    const Gl2EigenReport e = gl2_eigen_reps(p, pair, p.xi.front() + (13.0 / 7.0) * p.eta);
    double right = 0, left = 0, alt = -1, nt = 0, nt_min = 1e300, nt_max = 0;
    for (const auto& r : e.rows) {
        right = std::max(right, r.right_error);
        left = std::max(left, r.left_error);
        alt = std::max(alt, r.alt_left_error);
        nt = std::max(nt, rel_diff(r.n_t, r.n_t_formula));
        nt_min = std::min(nt_min, std::abs(r.n_t));
        nt_max = std::max(nt_max, std::abs(r.n_t));
    }
    ctx.upper("eigen_right", right, 1e-7);
    ctx.upper("eigen_left", left, 1e-7);
    if (alt >= 0) ctx.upper("eigen_left_det_k", alt, 1e-7);
    ctx.upper("n_t_formula", nt, 1e-7);
    ctx.lower("n_t_nonzero", nt_min / std::max(nt_max, 1e-300), 1e-12);
    ctx.lower("spectral_gap", e.min_gap, 1e-6);
}

void suite_appendix_a(Ctx& ctx) {
    const ModelParams p = ctx.model();
    const int n = p.sites;
    double prod = 0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::vector<int> a;
        for (int s = 0; s < n; ++s)
            if (mask & (std::size_t{1} << s)) a.push_back(s + 1);
        if (a.size() <= 3) prod = std::max(prod, product_formula_check(p, a));
    }
    ctx.upper("product_formula", prod, 1e-10);
    if (n >= 3) {
        std::vector<int> middle;
        for (int s = 2; s < n; ++s) middle.push_back(s);
        ctx.upper("exchange_relation", exchange_relation_check(p, 1, middle, n), 1e-10);
    } else {
        ctx.note("exchange_relation: needs N >= 3");
    }
    ctx.upper("local_reference", local_reference_residual(p, ctx.xyz()), 1e-11);
}

void suite_appendix_c(Ctx& ctx) {
    const ModelParams p = ctx.model();
    if (p.sites < 2) return ctx.note("recursions: need N >= 2");
    TransferCache cache(p);
    const SovBasisPair pair = ctx.conditioned(build_sov_pair(cache, ctx.xyz()));
    for (const int r : {0, 1}) {
        if (r == 1 && p.sites < 4) {
            ctx.note("r=1 recursion: needs N >= 4");
            continue;
        }
        double worst = 0;
        for (const auto& row : appc_recursion_check(cache, pair, r)) worst = std::max(worst, row.residual);
        ctx.upper("recursion_r" + std::to_string(r), worst, 1e-8, true);
    }
}

using SuiteFn = void (*)(Ctx&);

SuiteFn lookup(const std::string& name) {
    static const std::map<std::string, SuiteFn> table{
        {"yangbaxter", suite_yangbaxter}, {"fusion", suite_fusion},
        {"bases", suite_bases},           {"gram", suite_gram},
        {"measure", suite_measure},       {"dual", suite_dual},
        {"det0", suite_det0},             {"scalarproducts", suite_scalarproducts},
        {"ttcharges", suite_ttcharges},   {"gl2", suite_gl2},
        {"appendixA", suite_appendix_a},  {"appendixC", suite_appendix_c},
    };
    const auto it = table.find(name);
    if (it == table.end()) throw Error(ErrorKind::ConfigError, "unknown suite '" + name + "'");
    return it->second;
}

bool gl2_capable(const std::string& name) { return name == "bases" || name == "gram" || name == "measure" || name == "gl2"; }

}  // namespace

SuiteResult run_suite(const std::string& name, const SuiteConfig& cfg) {
    const SuiteFn fn = lookup(name);
    if (cfg.algebra == Algebra::Gl2 && !gl2_capable(name))
        throw Error(ErrorKind::ConfigError, "suite '" + name + "' needs algebra gl3");
    const bool explicit_model = cfg.algebra == Algebra::Gl2 ? cfg.gl2.has_value() : cfg.model.has_value();
    const auto start = std::chrono::steady_clock::now();

    SuiteResult out;
    std::vector<std::string> log;
    for (int attempt = 0;; ++attempt) {
        out = SuiteResult{};
        out.suite = name;
        out.seed = attempt_seed(cfg.seed, attempt);
        Ctx ctx(cfg, out.seed, out);
        out.sites = ctx.sites();
        try {
            fn(ctx);
            break;
        } catch (const Error& e) {
            const bool again = !explicit_model && retryable(e.kind()) && attempt < cfg.max_retries;
            if (!again) {
                out.error = e.what();
                break;
            }
            log.push_back("attempt " + std::to_string(attempt) + " seed " + std::to_string(out.seed) + ": " + e.what());
        } catch (const std::exception& e) {
            out.error = e.what();
            break;
        }
    }
    out.retry_log = std::move(log);
    out.passed = out.error.empty() && std::all_of(out.metrics.begin(), out.metrics.end(), [](const Metric& m) { return m.pass(); });
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace sovlab
