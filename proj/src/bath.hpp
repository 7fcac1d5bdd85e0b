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

#pragma once

#include <string>
#include <vector>

#include "common.hpp"

namespace pild {

// Harmonic-bath spectral density J(omega), in fs^-1 on both axes.
//
//   ohmic:   J = (pi/2) * xi * omega * exp(-omega/omega_c)
//   drude:   J = 2 * lambda * gamma_d * omega / (omega^2 + gamma_d^2)
//   tabular: linear interpolation on an ascending grid, zero outside.
class SpectralDensity {
  public:
    enum class Kind { OhmicExpCutoff, DrudeLorentz, Tabulated };

    SpectralDensity() = default;  // the zero density (ohmic with xi = 0)

    static SpectralDensity ohmic(double xi, double omega_c);
    static SpectralDensity drude_lorentz(double lambda, double gamma_d);
    static SpectralDensity tabulated(std::vector<double> omega, std::vector<double> j);
    // Two-column text file (omega in cm^-1, J in cm^-1), '#' comments.
    static SpectralDensity tabulated_from_file(const std::string& path);

    Kind kind() const { return kind_; }
    double value(double omega) const;
    bool is_zero() const;
    // Upper integration limit: the exponential / Lorentzian tail is truncated
    // where it stops contributing at working precision (exactly the grid end
    // for tabulated input).
    double cutoff() const;

    double xi() const { return xi_; }
    double omega_c() const { return omega_c_; }
    double lambda() const { return lambda_; }
    double gamma_d() const { return gamma_d_; }
    const std::vector<double>& grid() const { return omega_grid_; }
    const std::vector<double>& values() const { return j_values_; }

  private:
    Kind kind_ = Kind::OhmicExpCutoff;
    double xi_ = 0.0, omega_c_ = 0.0;
    double lambda_ = 0.0, gamma_d_ = 0.0;
    std::vector<double> omega_grid_, j_values_;
};

// One site-local bath: spectral density, inverse temperature (fs, since
// hbar = 1), and the eigenvalues of the diagonal system coupling operator.
// beta = infinity is the zero-temperature limit (coth -> 1).
struct BathSpec {
    SpectralDensity spectral_density;
    double beta = 0.0;
    std::vector<double> coupling_diag;

    void validate(int dim) const;
};

struct QuadratureSettings {
    double rel_tol = 1e-12;
    unsigned max_depth = 15;
    double cutoff_scale = 1.0;  // multiplies the per-kind frequency cutoff
    // Give up (and report the achieved estimate) if the error estimate stays
    // above this fraction of the integrand's L1 norm.
    double fail_rel = 1e-8;
};

// Discretized influence coefficients for constant-within-a-step paths.
// Translation invariant: eta_{kk} is one number, eta_{k,k-lag} depends on the
// lag only.
struct EtaCoefficients {
    double dt = 0.0;
    int n_steps = 0;
    Complex eta_diag{0.0, 0.0};
    std::vector<Complex> eta_offdiag;  // index lag-1, lag = 1..n_steps

    Complex eta(int lag) const {
        if (lag == 0) return eta_diag;
        if (lag < 0 || lag > n_steps)
            throw ValidationError("EtaCoefficients: lag " + std::to_string(lag) +
                                  " exceeds table size " + std::to_string(n_steps));
        return eta_offdiag[static_cast<std::size_t>(lag - 1)];
    }
};

// Bath response function
//   C(t) = (1/pi) \int_0^inf J(w) [coth(beta w / 2) cos(wt) - i sin(wt)] dw
// by adaptive quadrature. Satisfies C(-t) = conj(C(t)).
Complex bath_response(const BathSpec& spec, double t,
                      const QuadratureSettings& settings = {});

// Step integrals of C over constant-path segments:
//   eta_diag      = int_{t_k}^{t_{k+1}} dt' int_{t_k}^{t'}        dt'' C(t'-t'')
//   eta_off(lag)  = int_{t_k}^{t_{k+1}} dt' int_{t_k'}^{t_{k'+1}} dt'' C(t'-t''),  lag = k-k'
// evaluated through the frequency-domain forms (the time integrals done in
// closed form):
//   eta_diag     = (1/pi) int_0^W (J/w^2) [coth(bw/2) 2 sin^2(w dt/2) - i (w dt - sin(w dt))] dw
//   eta_off(lag) = (1/pi) int_0^W (J/w^2) 4 sin^2(w dt/2) [coth(bw/2) cos(w lag dt) - i sin(w lag dt)] dw
EtaCoefficients eta_coefficients(const BathSpec& spec, double dt, int n_steps,
                                 const QuadratureSettings& settings = {});

std::string quadrature_settings_json(const QuadratureSettings& s);
std::string spectral_density_json(const SpectralDensity& j);

}  // namespace pild
