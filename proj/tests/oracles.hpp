// Copyright 2026 The pild authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Test-only oracles, kept deliberately independent of the implementation
// paths they check: different quadrature rule, different recursion, closed
// forms where they exist.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "bath.hpp"
#include "core.hpp"
#include "quapi.hpp"

namespace oracles {

using pild::CMatrix;
using pild::Complex;

inline CMatrix random_hermitian(int d, unsigned seed, double scale = 1.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CMatrix m(d, d);
    for (int r = 0; r < d; ++r) {
        m(r, r) = Complex(scale * u(rng), 0.0);
        for (int c = r + 1; c < d; ++c) {
            m(r, c) = scale * Complex(u(rng), u(rng));
            m(c, r) = std::conj(m(r, c));
        }
    }
    return m;
}

inline CMatrix random_density(int d, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CMatrix a(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) a(r, c) = Complex(u(rng), u(rng));
    CMatrix rho = a * a.adjoint();
    rho /= rho.trace();
    return rho;
}

inline CMatrix random_complex(int d, unsigned seed, double scale = 1.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    CMatrix m(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) m(r, c) = scale * Complex(u(rng), u(rng));
    return m;
}

// exp(-i (eps sigma_z + delta sigma_x) t) in closed form.
inline CMatrix two_level_unitary(double eps, double delta, double t) {
    double omega = std::sqrt(eps * eps + delta * delta);
    CMatrix u(2, 2);
    if (omega == 0.0) {
        u.setIdentity();
        return u;
    }
    double c = std::cos(omega * t), s = std::sin(omega * t) / omega;
    u(0, 0) = Complex(c, -eps * s);
    u(1, 1) = Complex(c, eps * s);
    u(0, 1) = Complex(0.0, -delta * s);
    u(1, 0) = Complex(0.0, -delta * s);
    return u;
}

// Composite 10-point Gauss-Legendre with panel doubling until two successive
// resolutions agree; a different rule from the adaptive Gauss-Kronrod the
// library runs on.
inline Complex gl10_panels(const std::function<Complex(double)>& f, double a, double b,
                           int panels) {
    static constexpr double kNodes[5] = {0.1488743389816312, 0.4333953941292472,
                                         0.6794095682990244, 0.8650633666889845,
                                         0.9739065285171717};
    static constexpr double kWeights[5] = {0.2955242247147529, 0.2692667193099963,
                                           0.2190863625159820, 0.1494513491505806,
                                           0.0666713443086881};
    const double h = (b - a) / panels;
    Complex total(0.0, 0.0);
    for (int p = 0; p < panels; ++p) {
        double mid = a + (p + 0.5) * h;
        for (int k = 0; k < 5; ++k) {
            double off = 0.5 * h * kNodes[k];
            total += 0.5 * h * kWeights[k] * (f(mid - off) + f(mid + off));
        }
    }
    return total;
}

inline Complex gl10_doubling(const std::function<Complex(double)>& f, double a, double b,
                             double tol, int start_panels = 8) {
    Complex prev = gl10_panels(f, a, b, start_panels);
    for (int panels = 2 * start_panels; panels <= 1 << 14; panels *= 2) {
        Complex cur = gl10_panels(f, a, b, panels);
        if (std::abs(cur - prev) < tol * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

// Bath response evaluated over the same truncated frequency support the
// library uses (cutoff_scale shared through the settings, so both routes
// integrate the identical object).
inline Complex bath_response_gl(const pild::BathSpec& spec, double t, double cutoff_scale,
                                double tol = 1e-14) {
    const auto& j = spec.spectral_density;
    if (j.is_zero()) return {0.0, 0.0};
    double w_max = j.cutoff() * cutoff_scale;
    bool zero_temp = std::isinf(spec.beta);
    auto f = [&](double w) -> Complex {
        if (w <= 0.0) return {0.0, 0.0};
        double th = zero_temp ? 1.0 : 1.0 / std::tanh(0.5 * spec.beta * w);
        return j.value(w) / pild::kPi *
               Complex(th * std::cos(w * t), -std::sin(w * t));
    };
    return gl10_doubling(f, 0.0, w_max, tol);
}

// Time-domain eta integrals done directly on C(t). The double integral over
// the square [t_k, t_k+dt] x [t_k', t_k'+dt] reduces exactly to a single
// integral against the overlap length; the diagonal uses the triangle.
inline Complex eta_offdiag_time_domain(const pild::BathSpec& spec, double dt, int lag,
                                       double cutoff_scale, double tol = 1e-13) {
    auto f = [&](double w) -> Complex {
        return (dt - std::abs(w)) * bath_response_gl(spec, lag * dt + w, cutoff_scale);
    };
    // split at the |w| kink
    return gl10_doubling(f, -dt, 0.0, tol) + gl10_doubling(f, 0.0, dt, tol);
}

inline Complex eta_diag_time_domain(const pild::BathSpec& spec, double dt, double cutoff_scale,
                                    double tol = 1e-13) {
    auto f = [&](double w) -> Complex {
        return (dt - w) * bath_response_gl(spec, w, cutoff_scale);
    };
    return gl10_doubling(f, 0.0, dt, tol);
}

// The same eta integral as a literal nested 2D quadrature (slow; used on a
// couple of entries only).
inline Complex eta_offdiag_time_domain_2d(const pild::BathSpec& spec, double dt, int lag,
                                          double cutoff_scale, double tol = 1e-13) {
    auto outer = [&](double tp) -> Complex {
        auto inner = [&](double tpp) -> Complex {
            return bath_response_gl(spec, lag * dt + tp - tpp, cutoff_scale);
        };
        return gl10_doubling(inner, 0.0, dt, tol);
    };
    return gl10_doubling(outer, 0.0, dt, tol);
}

// Influence functional of one path, written as the straightforward double
// loop over the exponent of the printed double sum; reimplemented here so the
// engine's table-driven product has an independent counterpart.
inline Complex influence_bruteforce(const std::vector<pild::PathSegment>& path,
                                    const std::vector<pild::EtaCoefficients>& etas,
                                    const std::vector<pild::BathSpec>& baths, int lag_cutoff) {
    Complex expo(0.0, 0.0);
    for (std::size_t b = 0; b < baths.size(); ++b) {
        const auto& c = baths[b].coupling_diag;
        const int n = static_cast<int>(path.size()) - 1;
        for (int k = 0; k <= n; ++k)
            for (int kp = std::max(0, k - lag_cutoff); kp <= k; ++kp) {
                Complex eta = etas[b].eta(k - kp);
                double sp = c[static_cast<std::size_t>(path[static_cast<std::size_t>(k)].fwd)];
                double sm = c[static_cast<std::size_t>(path[static_cast<std::size_t>(k)].bwd)];
                double sp2 = c[static_cast<std::size_t>(path[static_cast<std::size_t>(kp)].fwd)];
                double sm2 = c[static_cast<std::size_t>(path[static_cast<std::size_t>(kp)].bwd)];
                expo += (sp - sm) * (eta * sp2 - std::conj(eta) * sm2);
            }
    }
    return std::exp(-expo);
}

// Pure-dephasing coherence magnitude: with a diagonal Hamiltonian and
// sigma_z coupling, every path is frozen and the path sum collapses to
//   |rho_01(t_n)| = |rho_01(0)| exp(-X_n),
//   X_n = 4 [ (n+1) Re eta_diag + sum_{lag=1}^{min(n,cutoff)} (n+1-lag) Re eta_lag ].
inline double dephasing_decay_factor(const pild::EtaCoefficients& eta, int n, int lag_cutoff) {
    double x = 4.0 * (n + 1) * eta.eta_diag.real();
    for (int lag = 1; lag <= std::min(n, lag_cutoff); ++lag)
        x += 4.0 * (n + 1 - lag) * eta.eta(lag).real();
    return std::exp(-x);
}

// Full-memory path sum by brute force: every path of (d^2)^(n+1) states,
// bare factors times the brute-force influence. Exponential; small n only.
inline CMatrix full_path_sum_map(const pild::SystemModel& model,
                                 const std::vector<pild::EtaCoefficients>& etas, double dt,
                                 int n, int lag_cutoff) {
    const int d = model.dim();
    const int dd = d * d;
    CMatrix e0 = pild::bare_map(model.h0, dt).matrix();
    CMatrix map = CMatrix::Zero(dd, dd);
    std::vector<int> alpha(static_cast<std::size_t>(n) + 1, 0);
    std::vector<pild::PathSegment> path(static_cast<std::size_t>(n) + 1);
    std::int64_t total = 1;
    for (int i = 0; i <= n; ++i) total *= dd;
    for (std::int64_t code = 0; code < total; ++code) {
        std::int64_t rest = code;
        for (int i = 0; i <= n; ++i) {
            alpha[static_cast<std::size_t>(i)] = static_cast<int>(rest % dd);
            rest /= dd;
            path[static_cast<std::size_t>(i)] = {alpha[static_cast<std::size_t>(i)] % d,
                                                 alpha[static_cast<std::size_t>(i)] / d};
        }
        Complex w(1.0, 0.0);
        for (int i = 1; i <= n; ++i)
            w *= e0(alpha[static_cast<std::size_t>(i)], alpha[static_cast<std::size_t>(i - 1)]);
        w *= influence_bruteforce(path, etas, model.baths, lag_cutoff);
        map(alpha[static_cast<std::size_t>(n)], alpha[0]) += w;
    }
    return map;
}

}  // namespace oracles
