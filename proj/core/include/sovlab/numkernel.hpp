#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sovlab {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using CRow = Eigen::RowVectorXcd;

/// Default dense dimension cap (3^8).
inline constexpr std::size_t kDenseCap = 6561;
/// Default relative zero threshold.
inline constexpr double kTau = 1e-9;

enum class ErrorKind {
    SizeCap,
    EigFailure,
    IndexOrder,
    DegenerateReference,
    SingularBasis,
    DetKZero,
    DegenerateFamily,
    SingularGram,
    SpectrumCollision,
    SpectrumNotSimple,
    AmbiguousPattern,
    PatternMissing,
    ConfigError,
    TaskFailure,
};

const char* to_string(ErrorKind k);

/// Single exception type of the library; the kind tells callers what went wrong.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, double value = 0.0);
    ErrorKind kind() const noexcept { return kind_; }
    /// Auxiliary number (best residual, offending size, ...).
    double value() const noexcept { return value_; }

private:
    ErrorKind kind_;
    double value_;
};

struct EigenDecomposition {
    std::vector<cplx> eigenvalues;
    CMatrix right;  ///< columns are right eigenvectors
    CMatrix left;   ///< rows are left eigenvectors, left * right = I
    double residual_norm = 0.0;
};

/// Kronecker product, row index i*rb+k, column j*cb+l.
CMatrix kron(const CMatrix& a, const CMatrix& b, std::size_t cap = kDenseCap * 3);

/// General complex eigendecomposition sorted by (Re, Im); left rows normalized so that left*right = I.
EigenDecomposition eig_general(const CMatrix& a, std::size_t cap = kDenseCap);

/// (1/m!) sum_pi sign(pi) P_pi on (C^d)^{(x)m}, factor 1 fastest.
CMatrix antisymmetrizer(int d, int m);

/// prod_{i<j} (x_j - x_i).
cplx vandermonde(const std::vector<cplx>& xs);

/// Permutation operator exchanging two C^d factors.
CMatrix swap_operator(int d);

/// Canonical ordering key used for spectra.
bool canonical_less(cplx a, cplx b);

// Norm helpers. All "relative" quantities divide by the largest magnitude of the compared objects.
double max_abs(const CMatrix& a);
double rel_diff(const CMatrix& a, const CMatrix& b);
double rel_diff(cplx a, cplx b);
/// sigma_min / sigma_max.
double sigma_ratio(const CMatrix& a);
/// sigma_min / sigma_max after scaling every row (rows = true) or column to unit norm.
/// Diagonal scaling leaves the rank unchanged and removes the spread of member norms.
double equilibrated_sigma_ratio(const CMatrix& a, bool rows);

/// Integer power with small exponents.
std::size_t ipow(std::size_t base, int e);

/// Digits of a flat index (site 1 fastest) in the given base.
std::vector<int> digits_of(std::size_t flat, int n, int base);
std::size_t flat_of(const std::vector<int>& digits, int base);

/// Thread count taken from SOVLAB_THREADS (default 1).
int thread_count();
/// Runs f(i) for i in [0, n); each index must write only its own output slot.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace sovlab
