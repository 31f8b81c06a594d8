#include "doctest.h"

#include "oracles.hpp"
#include "sovlab/chain.hpp"
#include "sovlab/gl3_model.hpp"
#include "sovlab/sampler.hpp"

using namespace sovlab;

namespace {

ModelParams sample(int n, std::uint64_t seed, TwistCase kind = TwistCase::I) {
    Sampler s(seed);
    return s.draw_params(n, kind);
}

}  // namespace

TEST_CASE("R matrix is l I + eta P") {
    const cplx l(0.7, 0.2), eta(0.3, -0.4);
    CHECK(max_abs(r_matrix(l, eta) - oracle::r_matrix(3, l, eta)) < 1e-15);
}

TEST_CASE("Yang-Baxter and RTT hold on random points") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        Sampler s(seed);
        const cplx l = s.grid(6, 4, 3), m = s.grid(6, 4, 3), eta = s.draw_eta();
        CHECK(check_yang_baxter(l, m, eta) < 1e-12);
        const ModelParams p = sample(2, seed);
        CHECK(rtt_residual(p, l, m) < 1e-11);
        CHECK(scalar_yb_residual(p.twist.k_matrix, l - m, p.eta) < 1e-12);
    }
}

TEST_CASE("one site: T1(l) = (l - xi) tr K + eta K") {
    for (std::uint64_t seed : {4u, 5u, 6u}) {
        const ModelParams p = sample(1, seed);
        const cplx l(1.3, -0.6);
        const CMatrix& k = p.twist.k_matrix;
        const CMatrix want = (l - p.xi[0]) * k.trace() * CMatrix::Identity(3, 3) + p.eta * k;
        CHECK(oracle::rel(transfer(p, 1, l), want) < 1e-13);
    }
}

// With T1 = tr_a K_a R_a2 R_a1, P_a1 picks up K_1 on the left at xi_1,
// while at xi_2 the remaining R_a1 ends up to the left of K_2.
TEST_CASE("two sites: T1 at the inhomogeneities") {
    const ModelParams p = sample(2, 8);
    const CMatrix id = CMatrix::Identity(3, 3);
    const CMatrix k1 = oracle::kron(id, p.twist.k_matrix), k2 = oracle::kron(p.twist.k_matrix, id);
    const CMatrix r12 = oracle::r_matrix(3, p.xi[0] - p.xi[1], p.eta);
    const CMatrix r21 = oracle::r_matrix(3, p.xi[1] - p.xi[0], p.eta);
    CHECK(oracle::rel(transfer(p, 1, p.xi[0]), p.eta * k1 * r12) < 1e-13);
    CHECK(oracle::rel(transfer(p, 1, p.xi[1]), p.eta * r21 * k2) < 1e-13);
}

TEST_CASE("T3 is det K times the closed product") {
    for (std::uint64_t seed : {1u, 2u, 3u})
        for (int n : {1, 2}) {
            const ModelParams p = sample(n, seed);
            const cplx l(0.45, 0.8);
            cplx prod = p.twist.k_matrix.determinant();
            for (const cplx x : p.xi) prod *= (l - x + p.eta) * (l - x - p.eta) * (l - x - 2.0 * p.eta);
            const auto dim = static_cast<Eigen::Index>(p.dim());
            CHECK(oracle::rel(transfer(p, 3, l), prod * CMatrix::Identity(dim, dim)) < 1e-11);
            CHECK(oracle::rel(qdet(p, l), prod) < 1e-12);
        }
}

TEST_CASE("transfer matrices commute") {
    const ModelParams p = sample(3, 9);
    const CMatrix a = transfer(p, 1, cplx(0.2, 0.1)), b = transfer(p, 1, cplx(-1.1, 0.7)), c = transfer(p, 2, cplx(0.6, -0.3));
    CHECK(max_abs(a * b - b * a) < 1e-10 * max_abs(a) * max_abs(b));
    CHECK(max_abs(a * c - c * a) < 1e-10 * max_abs(a) * max_abs(c));
}

TEST_CASE("matrix-free apply matches the dense operator") {
    const ModelParams p = sample(3, 10);
    CVector v(static_cast<Eigen::Index>(p.dim()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(std::cos(0.3 * i), std::sin(0.7 * i));
    for (int m : {1, 2}) {
        const cplx l(0.31, -0.44);
        const CVector dense = transfer(p, m, l) * v;
        CHECK((apply_transfer_free(p, m, l, v) - dense).norm() < 1e-12 * dense.norm());
        CHECK(oracle::rel(chain_transfer_columns(p.chain(), m, l), transfer(p, m, l)) < 1e-13);
    }
}

TEST_CASE("leading coefficients are the invariants of K") {
    const ModelParams p = sample(2, 12);
    const CMatrix& k = p.twist.k_matrix;
    CHECK(oracle::rel(transfer_asymptotic(p.twist, 1), k.trace()) < 1e-13);
    CHECK(oracle::rel(transfer_asymptotic(p.twist, 2), 0.5 * (k.trace() * k.trace() - (k * k).trace())) < 1e-12);
    CHECK(oracle::rel(transfer_asymptotic(p.twist, 3), k.determinant()) < 1e-12);
}

TEST_CASE("twist cases ii and iii keep their Jordan shape") {
    for (TwistCase kind : {TwistCase::II, TwistCase::III}) {
        const ModelParams p = sample(1, 13, kind);
        const TwistData& t = p.twist;
        CHECK(oracle::rel(t.w * t.k_jordan * t.w.inverse(), t.k_matrix) < 1e-12);
        const CMatrix off = t.k_jordan - CMatrix(t.k_jordan.diagonal().asDiagonal());
        CHECK(max_abs(off) > 0.0);
    }
}

TEST_CASE("input validation") {
    ModelParams p = sample(2, 14);
    p.xi[1] = p.xi[0] + p.eta;
    CHECK_THROWS_AS(p.validate(), Error);

    CMatrix k = CMatrix::Identity(3, 3);
    k(0, 1) = 1.0;
    try {
        twist_from_matrix(k);
        FAIL("repeated eigenvalue accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SpectrumNotSimple);
    }

    const ModelParams q = sample(3, 15);
    try {
        product_formula_check(q, {2, 1});
        FAIL("descending sites accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::IndexOrder);
    }
    CHECK_THROWS_AS(transfer(q, 4, cplx{}), Error);
}

TEST_CASE("dense builders refuse chains above the cap") {
    const ModelParams p = sample(2, 16);
    try {
        chain_transfer(p.chain(), 1, cplx(0.5), 8);
        FAIL("cap ignored");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SizeCap);
    }
}
