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

#include "core.hpp"
#include "ttm.hpp"

namespace pild {

// Empirical decay channel. Entries carry fs^-1/2 so that L rho L^dag is a
// rate; no Hermiticity is required (lowering operators are the typical case).
struct JumpOperator {
    CMatrix matrix;
    std::string label;

    void validate(int dim) const;
};

// Sum_j (L_j rho L_j^dag - 1/2 {L_j^dag L_j, rho}); traceless, and Hermitian
// for Hermitian input.
CMatrix dissipator(const std::vector<JumpOperator>& jumps, const CMatrix& rho);

// One memory-kernel step with the dissipator evaluated at the previous state
// (explicit Euler, first order in dt):
//   rho_n = E0(dt) rho_{n-1} + sum_{j=1}^{min(n,L)} K_j rho_{n-j} dt^2
//         + D(rho_{n-1}) dt
Trajectory hybrid_propagate(const MemoryKernel& kernel, const Superoperator& e0dt,
                            const std::vector<JumpOperator>& jumps, const DensityMatrix& rho0,
                            int n_steps);

// Classic RK4 for d rho / dt = -i [H0, rho] + D(rho), used as the memoryless
// oracle. Each run is validated by step-halving: integrating again at dt/2
// must agree on the common grid or the run fails with advice to shrink dt.
Trajectory lindblad_reference(const CMatrix& h0, const std::vector<JumpOperator>& jumps,
                              const DensityMatrix& rho0, double dt, int n_steps,
                              double halving_tol = 1e-10);

}  // namespace pild
