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

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pild {

using Complex = std::complex<double>;

// Internal unit system: hbar = 1, time in fs, energies in fs^-1.
// Wavenumber input nu [cm^-1] converts as omega = 2*pi*c*nu with c in cm/fs.
inline constexpr double kSpeedOfLightCmPerFs = 2.99792458e-5;
inline constexpr double kPi = 3.14159265358979323846;

inline double wavenumber_to_angular_fs(double nu_cm) {
    return 2.0 * kPi * kSpeedOfLightCmPerFs * nu_cm;
}

inline double ps_to_fs(double t_ps) { return 1000.0 * t_ps; }

// Error hierarchy. Codes mirror the CLI exit codes.
class Error : public std::runtime_error {
  public:
    Error(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
    int code() const { return code_; }

  private:
    int code_;
};

// Bad user input: malformed config, dimension mismatch, violated precondition.
class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string& what) : Error(2, what) {}
};

// Requested path-sum size exceeds the configured budget.
class BudgetError : public Error {
  public:
    explicit BudgetError(const std::string& what) : Error(3, what) {}
};

// Numerics did not meet the requested tolerance (quadrature, trace drift, ...).
class NumericalError : public Error {
  public:
    explicit NumericalError(const std::string& what) : Error(4, what) {}
};

// Log sink shared by the long-running stages; defaults to dropping messages.
using Logger = std::function<void(std::string_view)>;

inline void log_to(const Logger& logger, const std::string& line) {
    if (logger) logger(line);
}

// FNV-1a, used for cache file naming. Collisions are harmless: cache loads
// verify the full canonical key string, the hash only names the file.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace pild
