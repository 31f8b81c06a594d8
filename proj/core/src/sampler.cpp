#include "sovlab/sampler.hpp"

#include <cmath>

namespace sovlab {

long long Sampler::integer(long long lo, long long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<long long>(rng_() % span);
}

cplx Sampler::grid(int span, int q_re, int q_im) {
    const double re = static_cast<double>(integer(-span, span)) / q_re;
    const double im = static_cast<double>(integer(-span, span)) / q_im;
    return {re, im};
}

cplx Sampler::nonzero_grid(int span, int q_re, int q_im, double min_abs) {
    for (;;) {
        const cplx v = grid(span, q_re, q_im);
        if (std::abs(v) >= min_abs) return v;
    }
}

cplx Sampler::draw_eta() {
    for (;;) {
        const cplx e = grid(5, 4, 4);
        if (std::abs(e) >= 0.8 && std::abs(e) <= 1.3) return e;
    }
}

std::vector<cplx> Sampler::draw_xi(int sites, cplx eta) { return draw_xi(sites, eta, 8, 5, 7); }

std::vector<cplx> Sampler::draw_xi(int sites, cplx eta, int span, int q_re, int q_im) {
    if (span < 1 || q_re < 1 || q_im < 1) throw Error(ErrorKind::ConfigError, "xi grid needs positive span and denominators");
    // a grid too small for the requested number of well separated points would never terminate
    if ((2 * span + 1) * (2 * span + 1) < 8 * sites) throw Error(ErrorKind::ConfigError, "xi grid too small for the number of sites");
    std::vector<cplx> xi;
    int misses = 0;
    while (static_cast<int>(xi.size()) < sites) {
        if (++misses > 100000) throw Error(ErrorKind::ConfigError, "xi grid cannot host the requested sites");
        const cplx cand = grid(span, q_re, q_im);
        bool ok = true;
        for (const cplx x : xi) {
            for (int s = -4; s <= 4 && ok; ++s)
                if (std::abs(cand - x - static_cast<double>(s) * eta) < 0.15 * std::abs(eta)) ok = false;
            if (std::abs(cand - x) < 0.3) ok = false;
        }
        if (ok) xi.push_back(cand);
    }
    return xi;
}

CMatrix Sampler::draw_w() {
    for (;;) {
        CMatrix w = CMatrix::Identity(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) w(i, j) += grid(2, 8, 8);
        if (std::abs(w.determinant()) >= 0.5) return w;
    }
}

std::array<cplx, 3> Sampler::draw_spectrum() {
    for (;;) {
        std::array<cplx, 3> k{grid(6, 4, 5), grid(6, 4, 5), grid(6, 4, 5)};
        bool ok = std::abs(k[0] - k[1]) >= 0.4 && std::abs(k[1] - k[2]) >= 0.4 && std::abs(k[0] - k[2]) >= 0.4;
        for (const cplx v : k) ok = ok && std::abs(v) >= 0.7 && std::abs(v) <= 1.4;
        if (ok) return k;
    }
}

TwistData Sampler::draw_twist(TwistCase kind) {
    const auto k = draw_spectrum();
    const CMatrix w = draw_w();
    CMatrix kj = CMatrix::Zero(3, 3);
    switch (kind) {
        case TwistCase::I:
            kj.diagonal() << k[0], k[1], k[2];
            break;
        case TwistCase::II:
            kj.diagonal() << k[0], k[0], k[2];
            kj(0, 1) = 1.0;
            break;
        case TwistCase::III:
            kj.diagonal() << k[0], k[0], k[0];
            kj(0, 1) = 1.0;
            kj(1, 2) = 1.0;
            break;
    }
    return twist_from_jordan(w, kj);
}

std::array<cplx, 3> Sampler::draw_xyz() {
    std::array<cplx, 3> u;
    for (auto& v : u) {
        do v = grid(5, 4, 4);
        while (std::abs(v) < 0.7 || std::abs(v) > 1.4);
    }
    return u;
}

ModelParams Sampler::draw_params(int sites, TwistCase kind) {
    ModelParams p;
    p.sites = sites;
    p.eta = draw_eta();
    p.xi = draw_xi(sites, p.eta);
    p.twist = draw_twist(kind);
    p.validate();
    return p;
}

Gl2Params Sampler::draw_gl2_params(int sites) {
    Gl2Params p;
    p.sites = sites;
    p.eta = draw_eta();
    p.xi = draw_xi(sites, p.eta);
    for (;;) {
        const auto k = draw_spectrum();
        CMatrix w = CMatrix::Identity(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) w(i, j) += grid(2, 8, 8);
        if (std::abs(w.determinant()) < 0.5) continue;
        p.k = w * Eigen::Vector2cd(k[0], k[1]).asDiagonal() * w.inverse();
        const auto xyz = draw_xyz();
        p.ref = {xyz[0], xyz[1]};
        if (std::abs(gl2_nk(p)) >= 0.3) return p;
    }
}

}  // namespace sovlab
