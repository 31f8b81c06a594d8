#include "sovlab/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace sovlab {

const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::SizeCap: return "SizeCap";
        case ErrorKind::EigFailure: return "EigFailure";
        case ErrorKind::IndexOrder: return "IndexOrder";
        case ErrorKind::DegenerateReference: return "DegenerateReference";
        case ErrorKind::SingularBasis: return "SingularBasis";
        case ErrorKind::DetKZero: return "DetKZero";
        case ErrorKind::DegenerateFamily: return "DegenerateFamily";
        case ErrorKind::SingularGram: return "SingularGram";
        case ErrorKind::SpectrumCollision: return "SpectrumCollision";
        case ErrorKind::SpectrumNotSimple: return "SpectrumNotSimple";
        case ErrorKind::AmbiguousPattern: return "AmbiguousPattern";
        case ErrorKind::PatternMissing: return "PatternMissing";
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::TaskFailure: return "TaskFailure";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what, double value)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), value_(value) {}

CMatrix kron(const CMatrix& a, const CMatrix& b, std::size_t cap) {
    const auto rows = static_cast<std::size_t>(a.rows() * b.rows());
    const auto cols = static_cast<std::size_t>(a.cols() * b.cols());
    if (rows > cap || cols > cap) {
        throw Error(ErrorKind::SizeCap, "kron result " + std::to_string(rows) + "x" + std::to_string(cols),
                    static_cast<double>(std::max(rows, cols)));
    }
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

bool canonical_less(cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

EigenDecomposition eig_general(const CMatrix& a, std::size_t cap) {
    if (a.rows() != a.cols()) throw Error(ErrorKind::EigFailure, "matrix not square");
    if (static_cast<std::size_t>(a.rows()) > cap)
        throw Error(ErrorKind::SizeCap, "eigensolve dimension", static_cast<double>(a.rows()));
    const Eigen::Index n = a.rows();
    EigenDecomposition out;
    if (n == 0) return out;

    Eigen::ComplexEigenSolver<CMatrix> solver(a, true);
    const double scale = std::max(a.norm(), 1e-300);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::EigFailure, "QR iteration did not converge", 0.0);
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const auto& ev = solver.eigenvalues();
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return canonical_less(ev(i), ev(j)); });

    out.right.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        out.eigenvalues.push_back(ev(order[static_cast<std::size_t>(k)]));
        CVector v = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
        out.right.col(k) = v / v.norm();
    }
    Eigen::PartialPivLU<CMatrix> lu(out.right);
    out.left = lu.inverse();

    double worst = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const CVector r = a * out.right.col(k) - out.eigenvalues[static_cast<std::size_t>(k)] * out.right.col(k);
        worst = std::max(worst, r.norm() / scale);
    }
    out.residual_norm = worst;
    if (!std::isfinite(worst) || !out.left.allFinite()) {
        throw Error(ErrorKind::EigFailure, "non-finite eigenvectors", worst);
    }
    return out;
}

CMatrix swap_operator(int d) {
    CMatrix p = CMatrix::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) p(i + d * j, j + d * i) = 1.0;
    return p;
}

CMatrix antisymmetrizer(int d, int m) {
    const auto dim = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(d), m));
    CMatrix p = CMatrix::Zero(dim, dim);
    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    double fact = 1.0;
    for (int i = 2; i <= m; ++i) fact *= i;
    do {
        int inversions = 0;
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j)
                if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inversions;
        const double sign = (inversions % 2 == 0) ? 1.0 : -1.0;
        for (Eigen::Index col = 0; col < dim; ++col) {
            const auto dig = digits_of(static_cast<std::size_t>(col), m, d);
            std::vector<int> out(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = dig[static_cast<std::size_t>(i)];
            p(static_cast<Eigen::Index>(flat_of(out, d)), col) += sign / fact;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return p;
}

cplx vandermonde(const std::vector<cplx>& xs) {
    cplx v = 1.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j) v *= xs[j] - xs[i];
    return v;
}

double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double rel_diff(const CMatrix& a, const CMatrix& b) {
    const double scale = std::max({max_abs(a), max_abs(b), 1e-300});
    return max_abs(a - b) / scale;
}

double rel_diff(cplx a, cplx b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

double sigma_ratio(const CMatrix& a) {
    Eigen::BDCSVD<CMatrix> svd(a);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0.0;
    return s(s.size() - 1) / s(0);
}

double equilibrated_sigma_ratio(const CMatrix& a, bool rows) {
    CMatrix b = a;
    if (rows) {
        for (Eigen::Index i = 0; i < b.rows(); ++i) {
            const double n = b.row(i).norm();
            if (n > 0.0) b.row(i) /= n;
        }
    } else {
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            const double n = b.col(j).norm();
            if (n > 0.0) b.col(j) /= n;
        }
    }
    return sigma_ratio(b);
}

std::size_t ipow(std::size_t base, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

std::vector<int> digits_of(std::size_t flat, int n, int base) {
    std::vector<int> d(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        d[static_cast<std::size_t>(i)] = static_cast<int>(flat % static_cast<std::size_t>(base));
        flat /= static_cast<std::size_t>(base);
    }
    return d;
}

std::size_t flat_of(const std::vector<int>& digits, int base) {
    std::size_t f = 0;
    for (std::size_t i = digits.size(); i-- > 0;) f = f * static_cast<std::size_t>(base) + static_cast<std::size_t>(digits[i]);
    return f;
}

int thread_count() {
    if (const char* env = std::getenv("SOVLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f) {
    const auto threads = static_cast<std::size_t>(std::max(1, thread_count()));
    if (threads == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t used = std::min(threads, n);
    for (std::size_t t = 0; t < used; ++t) {
        pool.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += used) f(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace sovlab
