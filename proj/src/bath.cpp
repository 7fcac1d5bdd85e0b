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

#include "bath.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace pild {

namespace {

double coth(double x) {
    if (x > 20.0) return 1.0;  // 1 + 2e^-40, below double resolution
    if (x < 1e-4) return 1.0 / x + x / 3.0;
    return 1.0 / std::tanh(x);
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

// Adaptive Gauss-Kronrod on [a, b]; throws with the achieved estimate when the
// error estimate stays above fail_rel of the L1 norm.
template <typename F>
double integrate_segment(const F& f, double a, double b, const QuadratureSettings& s) {
    if (b <= a) return 0.0;
    double err = 0.0, l1 = 0.0;
    double val = GK::integrate(f, a, b, s.max_depth, s.rel_tol, &err, &l1);
    if (l1 == 0.0 || err <= s.fail_rel * l1) return val;
    // When the requested tolerance sits below the noise floor the estimate
    // inflates with depth while the value itself is long converged; accept if
    // a much coarser subdivision reproduces the value, fail otherwise.
    unsigned coarse_depth = s.max_depth > 4 ? s.max_depth - 3 : 1;
    double err2 = 0.0, l12 = 0.0;
    double check = GK::integrate(f, a, b, coarse_depth, s.rel_tol, &err2, &l12);
    if (std::abs(val - check) <= s.fail_rel * std::max(l1, std::abs(val))) return val;
    std::ostringstream msg;
    msg << "quadrature did not converge: error estimate " << err << " on L1 norm " << l1
        << "; achieved value " << val;
    throw NumericalError(msg.str());
}

// Integrates f over the support of J, splitting tabulated grids at their
// nodes so neither the interpolation kinks nor the support edges cross a
// quadrature cell. J vanishes below the first grid point, so that region is
// skipped entirely.
template <typename F>
double integrate_over_support(const SpectralDensity& j, const F& f,
                              const QuadratureSettings& s) {
    if (j.kind() == SpectralDensity::Kind::Tabulated) {
        const auto& grid = j.grid();
        double total = 0.0;
        for (std::size_t k = 0; k + 1 < grid.size(); ++k)
            total += integrate_segment(f, grid[k], grid[k + 1], s);
        return total;
    }
    return integrate_segment(f, 0.0, j.cutoff() * s.cutoff_scale, s);
}

}  // namespace

SpectralDensity SpectralDensity::ohmic(double xi, double omega_c) {
    if (xi < 0.0) throw ValidationError("SpectralDensity: Kondo parameter xi must be >= 0");
    if (omega_c <= 0.0) throw ValidationError("SpectralDensity: omega_c must be positive");
    SpectralDensity j;
    j.kind_ = Kind::OhmicExpCutoff;
    j.xi_ = xi;
    j.omega_c_ = omega_c;
    return j;
}

SpectralDensity SpectralDensity::drude_lorentz(double lambda, double gamma_d) {
    if (lambda < 0.0) throw ValidationError("SpectralDensity: lambda must be >= 0");
    if (gamma_d <= 0.0) throw ValidationError("SpectralDensity: gamma_d must be positive");
    SpectralDensity j;
    j.kind_ = Kind::DrudeLorentz;
    j.lambda_ = lambda;
    j.gamma_d_ = gamma_d;
    return j;
}

SpectralDensity SpectralDensity::tabulated(std::vector<double> omega, std::vector<double> j) {
    if (omega.size() != j.size() || omega.empty())
        throw ValidationError("SpectralDensity: tabulated grids must be equal-length and non-empty");
    for (std::size_t k = 0; k + 1 < omega.size(); ++k)
        if (omega[k + 1] <= omega[k])
            throw ValidationError("SpectralDensity: tabulated grid must be strictly ascending");
    if (omega.front() < 0.0)
        throw ValidationError("SpectralDensity: tabulated grid must start at omega >= 0");
    if (omega.front() == 0.0 && j.front() != 0.0)
        throw ValidationError("SpectralDensity: J(0) must vanish");
    for (double v : j)
        if (v < 0.0) throw ValidationError("SpectralDensity: J(omega) must be non-negative");
    SpectralDensity out;
    out.kind_ = Kind::Tabulated;
    out.omega_grid_ = std::move(omega);
    out.j_values_ = std::move(j);
    return out;
}

SpectralDensity SpectralDensity::tabulated_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("SpectralDensity: cannot open " + path);
    std::vector<double> omega, j;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        double w_cm, j_cm;
        if (!(row >> w_cm)) continue;  // blank / comment-only line
        if (!(row >> j_cm))
            throw ValidationError("SpectralDensity: " + path + ":" + std::to_string(lineno) +
                                  ": expected two columns (omega_cm, J_cm)");
        omega.push_back(wavenumber_to_angular_fs(w_cm));
        j.push_back(wavenumber_to_angular_fs(j_cm));
    }
    if (omega.empty())
        throw ValidationError("SpectralDensity: " + path + " contains no data rows");
    return tabulated(std::move(omega), std::move(j));
}

double SpectralDensity::value(double omega) const {
    switch (kind_) {
        case Kind::OhmicExpCutoff:
            return 0.5 * kPi * xi_ * omega * std::exp(-omega / omega_c_);
        case Kind::DrudeLorentz:
            return 2.0 * lambda_ * gamma_d_ * omega / (omega * omega + gamma_d_ * gamma_d_);
        case Kind::Tabulated: {
            if (omega <= omega_grid_.front() || omega >= omega_grid_.back()) {
                if (omega == omega_grid_.front()) return j_values_.front();
                if (omega == omega_grid_.back()) return j_values_.back();
                return 0.0;
            }
            auto hi = std::upper_bound(omega_grid_.begin(), omega_grid_.end(), omega);
            std::size_t i = static_cast<std::size_t>(hi - omega_grid_.begin());
            double t = (omega - omega_grid_[i - 1]) / (omega_grid_[i] - omega_grid_[i - 1]);
            return (1.0 - t) * j_values_[i - 1] + t * j_values_[i];
        }
    }
    return 0.0;
}

bool SpectralDensity::is_zero() const {
    switch (kind_) {
        case Kind::OhmicExpCutoff:
            return xi_ == 0.0;
        case Kind::DrudeLorentz:
            return lambda_ == 0.0;
        case Kind::Tabulated:
            for (double v : j_values_)
                if (v != 0.0) return false;
            return true;
    }
    return true;
}

double SpectralDensity::cutoff() const {
    switch (kind_) {
        case Kind::OhmicExpCutoff:
            return 60.0 * omega_c_;  // exp(-60) is far below double noise
        case Kind::DrudeLorentz:
            // Lorentzian tail truncation; the eta integrands decay as w^-3 so
            // the remainder is O(lambda gamma_d / W^2).
            return 400.0 * gamma_d_;
        case Kind::Tabulated:
            return omega_grid_.back();
    }
    return 0.0;
}

void BathSpec::validate(int dim) const {
    if (!(beta > 0.0))  // also rejects NaN; +inf (zero temperature) passes
        throw ValidationError("BathSpec: beta must be positive (inf allowed)");
    if (static_cast<int>(coupling_diag.size()) != dim)
        throw ValidationError("BathSpec: coupling_diag length " +
                              std::to_string(coupling_diag.size()) +
                              " does not match system dimension " + std::to_string(dim));
}

Complex bath_response(const BathSpec& spec, double t, const QuadratureSettings& settings) {
    const SpectralDensity& j = spec.spectral_density;
    if (j.is_zero()) return {0.0, 0.0};
    const double beta = spec.beta;
    const bool zero_temp = std::isinf(beta);
    auto re_f = [&](double w) {
        if (w == 0.0) return 0.0;
        double th = zero_temp ? 1.0 : coth(0.5 * beta * w);
        return j.value(w) * th * std::cos(w * t) / kPi;
    };
    auto im_f = [&](double w) { return -j.value(w) * std::sin(w * t) / kPi; };
    return {integrate_over_support(j, re_f, settings),
            integrate_over_support(j, im_f, settings)};
}

EtaCoefficients eta_coefficients(const BathSpec& spec, double dt, int n_steps,
                                 const QuadratureSettings& settings) {
    if (dt <= 0.0) throw ValidationError("eta_coefficients: dt must be positive");
    if (n_steps < 1) throw ValidationError("eta_coefficients: n_steps must be >= 1");

    EtaCoefficients out;
    out.dt = dt;
    out.n_steps = n_steps;
    out.eta_offdiag.assign(static_cast<std::size_t>(n_steps), Complex(0.0, 0.0));

    const SpectralDensity& j = spec.spectral_density;
    if (j.is_zero()) return out;

    const double beta = spec.beta;
    const bool zero_temp = std::isinf(beta);
    auto th = [&](double w) { return zero_temp ? 1.0 : coth(0.5 * beta * w); };
    // sin(w dt/2)/w stays finite through w -> 0.
    auto half_sinc = [&](double w) {
        return w == 0.0 ? 0.5 * dt : std::sin(0.5 * w * dt) / w;
    };

    {
        auto re_f = [&](double w) {
            double q = half_sinc(w);
            return j.value(w) * th(w) * 2.0 * q * q / kPi;
        };
        auto im_f = [&](double w) {
            if (w == 0.0) return 0.0;
            return -j.value(w) * (w * dt - std::sin(w * dt)) / (w * w) / kPi;
        };
        out.eta_diag = {integrate_over_support(j, re_f, settings),
                        integrate_over_support(j, im_f, settings)};
    }

    for (int lag = 1; lag <= n_steps; ++lag) {
        const double tau = lag * dt;
        auto re_f = [&](double w) {
            double q = half_sinc(w);
            return j.value(w) * 4.0 * q * q * th(w) * std::cos(w * tau) / kPi;
        };
        auto im_f = [&](double w) {
            double q = half_sinc(w);
            return -j.value(w) * 4.0 * q * q * std::sin(w * tau) / kPi;
        };
        out.eta_offdiag[static_cast<std::size_t>(lag - 1)] = {
            integrate_over_support(j, re_f, settings),
            integrate_over_support(j, im_f, settings)};
    }
    return out;
}

std::string quadrature_settings_json(const QuadratureSettings& s) {
    std::string out = "{\"rel_tol\":" + fmt_double(s.rel_tol);
    out += ",\"max_depth\":" + std::to_string(s.max_depth);
    out += ",\"cutoff_scale\":" + fmt_double(s.cutoff_scale);
    out += ",\"fail_rel\":" + fmt_double(s.fail_rel) + "}";
    return out;
}

std::string spectral_density_json(const SpectralDensity& j) {
    switch (j.kind()) {
        case SpectralDensity::Kind::OhmicExpCutoff:
            return "{\"kind\":\"ohmic\",\"xi\":" + fmt_double(j.xi()) +
                   ",\"omega_c\":" + fmt_double(j.omega_c()) + "}";
        case SpectralDensity::Kind::DrudeLorentz:
            return "{\"kind\":\"drude_lorentz\",\"lambda\":" + fmt_double(j.lambda()) +
                   ",\"gamma_d\":" + fmt_double(j.gamma_d()) + "}";
        case SpectralDensity::Kind::Tabulated: {
            std::string out = "{\"kind\":\"tabulated\",\"omega\":[";
            for (std::size_t k = 0; k < j.grid().size(); ++k)
                out += (k ? "," : "") + fmt_double(j.grid()[k]);
            out += "],\"j\":[";
            for (std::size_t k = 0; k < j.values().size(); ++k)
                out += (k ? "," : "") + fmt_double(j.values()[k]);
            return out + "]}";
        }
    }
    return "{}";
}

}  // namespace pild
