#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "sovlab/gl2_model.hpp"
#include "sovlab/gl3_model.hpp"

namespace sovlab {

/// Seeded draws from small rational grids, so that runs are reproducible and
/// condition numbers stay tame. Inhomogeneities are rejected when
/// xi_i - xi_j lies within 0.15 |eta| of s * eta for |s| <= 4.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}

    /// Uniform integer in [lo, hi], independent of the standard library's distributions.
    long long integer(long long lo, long long hi);
    /// (p / q_re) + i (p' / q_im) with |p|, |p'| <= span.
    cplx grid(int span, int q_re, int q_im);
    cplx nonzero_grid(int span, int q_re, int q_im, double min_abs);

    cplx draw_eta();
    std::vector<cplx> draw_xi(int sites, cplx eta);
    /// Same rejection rule on the grid (p / q_re) + i (p' / q_im), |p|, |p'| <= span.
    std::vector<cplx> draw_xi(int sites, cplx eta, int span, int q_re, int q_im);
    CMatrix draw_w();
    /// Eigenvalues with 0.7 <= |k| <= 1.4 and pairwise gaps >= 0.4; moduli near one keep the
    /// powers of K, and with them the SoV families, well conditioned.
    std::array<cplx, 3> draw_spectrum();
    TwistData draw_twist(TwistCase kind);
    /// Reference co-vector components, moduli in [0.7, 1.4].
    std::array<cplx, 3> draw_xyz();
    ModelParams draw_params(int sites, TwistCase kind = TwistCase::I);
    /// gl(2) twist with eigenvalue moduli in [0.7, 1.4] and gap >= 0.4, reference with |n_K| >= 0.3.
    Gl2Params draw_gl2_params(int sites);

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace sovlab
