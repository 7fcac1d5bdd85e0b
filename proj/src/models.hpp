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

#include <optional>
#include <string>
#include <vector>

#include "bath.hpp"
#include "core.hpp"
#include "lindblad.hpp"

namespace pild {

struct SystemModel {
    CMatrix h0;  // fs^-1, Hermitian
    std::vector<BathSpec> baths;
    std::vector<JumpOperator> jumps;
    std::vector<std::string> basis_labels;

    int dim() const { return static_cast<int>(h0.rows()); }
    void validate() const;
    // Canonical serialization of everything that affects maps/tensors/kernels.
    // Jump operators are deliberately excluded: changing them must reuse the
    // cached path-integral stages untouched.
    std::string physics_json() const;
};

// Two-level system H0 = eps sigma_z + delta sigma_x with one bath coupled
// through sigma_z (coupling_diag forced to (+1, -1)).
SystemModel spin_boson(double eps, double delta, BathSpec bath);

// Site 0-based index + decay timescale in ps for the extraction channel.
struct Extraction {
    int site = 0;
    double timescale_ps = 0.0;
};

// N singly-excited site states followed by the shared ground state |g> at
// index N. Site k couples to its own bath (indicator coupling, zero on g);
// the optional extraction adds the single jump gamma |g><site| with
// gamma^2 = 1 / timescale.
SystemModel frenkel_with_ground(const std::vector<double>& site_energies,
                                const Eigen::MatrixXd& couplings,
                                std::vector<BathSpec> site_baths,
                                std::optional<Extraction> extraction);

}  // namespace pild
