#pragma once

// Test-side reference constructions. Each is written from scratch with plain
// index loops so it shares no code path with the library.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

/// (a (x) b)(i*rb + k, j*cb + l) = a(i, j) b(k, l).
inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index k = 0; k < b.rows(); ++k)
                for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

/// P |x, y> = |y, x> on C^d (x) C^d.
inline Mat swap(int d) {
    Mat p = Mat::Zero(d * d, d * d);
    for (int x = 0; x < d; ++x)
        for (int y = 0; y < d; ++y) p(y * d + x, x * d + y) = 1.0;
    return p;
}

/// x I + eta P.
inline Mat r_matrix(int d, cplx x, cplx eta) { return x * Mat::Identity(d * d, d * d) + eta * swap(d); }

/// det [x_i^j], which equals prod_{i<j} (x_j - x_i).
inline cplx vandermonde_det(const std::vector<cplx>& xs) {
    const auto n = static_cast<Eigen::Index>(xs.size());
    Mat v(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        cplx p = 1.0;
        for (Eigen::Index j = 0; j < n; ++j, p *= xs[static_cast<std::size_t>(i)]) v(i, j) = p;
    }
    return n == 0 ? cplx{1.0} : v.determinant();
}

inline long long binomial(int n, int k) {
    long long b = 1;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

inline double rel(const Mat& a, const Mat& b) {
    const double s = std::max(b.cwiseAbs().maxCoeff(), 1e-300);
    return (a - b).cwiseAbs().maxCoeff() / s;
}

inline double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace oracle
