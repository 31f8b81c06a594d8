#include "doctest.h"

#include <cstdlib>

#include "oracles.hpp"
#include "sovlab/chain.hpp"
#include "sovlab/numkernel.hpp"
#include "sovlab/sampler.hpp"

using namespace sovlab;

namespace {

CMatrix random_matrix(Sampler& s, int rows, int cols) {
    CMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = s.grid(5, 3, 4);
    return m;
}

}  // namespace

TEST_CASE("kron matches the index-loop construction") {
    Sampler s(11);
    const CMatrix a = random_matrix(s, 2, 3), b = random_matrix(s, 3, 2);
    CHECK(max_abs(kron(a, b) - oracle::kron(a, b)) == 0.0);
}

TEST_CASE("kron refuses results above the cap") {
    const CMatrix a = CMatrix::Identity(10, 10);
    CHECK_THROWS_AS(kron(a, a, 50), Error);
    try {
        kron(a, a, 50);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SizeCap);
    }
}

TEST_CASE("swap operator agrees with the oracle and squares to one") {
    for (int d : {2, 3}) {
        CHECK(max_abs(swap_operator(d) - oracle::swap(d)) == 0.0);
        CHECK(max_abs(swap_operator(d) * swap_operator(d) - CMatrix::Identity(d * d, d * d)) == 0.0);
    }
}

TEST_CASE("vandermonde product equals the determinant of the power matrix") {
    Sampler s(3);
    for (int n = 1; n <= 5; ++n) {
        std::vector<cplx> xs;
        for (int i = 0; i < n; ++i) xs.push_back(s.grid(6, 4, 3));
        CHECK(oracle::rel(vandermonde(xs), oracle::vandermonde_det(xs)) < 1e-11);
    }
    CHECK(vandermonde({cplx{1.0}, cplx{1.0}}) == cplx{0.0});
}

TEST_CASE("antisymmetrizer is a projector of rank C(d, m)") {
    for (int d : {2, 3})
        for (int m = 1; m <= d; ++m) {
            const CMatrix a = antisymmetrizer(d, m);
            CHECK(max_abs(a * a - a) < 1e-14);
            CHECK(std::abs(a.trace() - cplx(static_cast<double>(oracle::binomial(d, m)))) < 1e-12);
        }
    // swapping two factors flips the sign
    const CMatrix p = oracle::kron(CMatrix::Identity(3, 3), oracle::swap(3));
    const CMatrix a3 = antisymmetrizer(3, 3);
    CHECK(max_abs(p * a3 + a3) < 1e-14);
}

TEST_CASE("eig_general returns biorthogonal eigenvectors") {
    Sampler s(5);
    const CMatrix a = random_matrix(s, 6, 6);
    const auto e = eig_general(a);
    REQUIRE(e.eigenvalues.size() == 6);
    CHECK(max_abs(e.left * e.right - CMatrix::Identity(6, 6)) < 1e-10);
    for (int j = 0; j < 6; ++j) {
        const cplx l = e.eigenvalues[static_cast<std::size_t>(j)];
        CHECK((a * e.right.col(j) - l * e.right.col(j)).norm() < 1e-10 * a.norm());
        CHECK((e.left.row(j) * a - l * e.left.row(j)).norm() < 1e-10 * a.norm());
    }
    for (std::size_t j = 1; j < e.eigenvalues.size(); ++j) CHECK_FALSE(canonical_less(e.eigenvalues[j], e.eigenvalues[j - 1]));
}

TEST_CASE("equilibrated sigma ratio ignores row scaling but sees rank loss") {
    CMatrix d = CMatrix::Zero(3, 3);
    d(0, 0) = 1e6;
    d(1, 1) = 1.0;
    d(2, 2) = 1e-4;
    CHECK(equilibrated_sigma_ratio(d, true) == doctest::Approx(1.0));
    CHECK(sigma_ratio(d) == doctest::Approx(1e-10));
    CMatrix singular = CMatrix::Ones(3, 3);
    CHECK(equilibrated_sigma_ratio(singular, false) < 1e-12);
}

TEST_CASE("flat index round trip, site 1 fastest") {
    for (std::size_t f = 0; f < 27; ++f) {
        const auto dgt = digits_of(f, 3, 3);
        CHECK(flat_of(dgt, 3) == f);
        CHECK(static_cast<std::size_t>(dgt[0]) == f % 3);
    }
    CHECK(ipow(3, 4) == 81);
}

TEST_CASE("threaded column build is bitwise equal to the serial one") {
    Sampler s(17);
    const ChainData c = s.draw_params(3).chain();
    const cplx lambda(0.37, -0.21);
    unsetenv("SOVLAB_THREADS");
    const CMatrix serial = chain_transfer_columns(c, 1, lambda);
    setenv("SOVLAB_THREADS", "3", 1);
    const CMatrix threaded = chain_transfer_columns(c, 1, lambda);
    unsetenv("SOVLAB_THREADS");
    CHECK((serial - threaded).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sampler streams are reproducible") {
    Sampler a(42), b(42);
    for (int i = 0; i < 20; ++i) CHECK(a.integer(-100, 100) == b.integer(-100, 100));
    Sampler c(42), d(43);
    bool differs = false;
    for (int i = 0; i < 20; ++i) differs |= c.integer(-100, 100) != d.integer(-100, 100);
    CHECK(differs);
}
