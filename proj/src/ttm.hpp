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

#include <vector>

#include "core.hpp"

namespace pild {

// Transfer tensors T_1..T_L reproducing the source maps through
//   E(t_n) = sum_{k=1}^{min(n,L)} T_k E(t_{n-k}),   E(t_0) = I.
struct TransferTensors {
    double dt = 0.0;
    std::vector<Superoperator> tensors;

    int count() const { return static_cast<int>(tensors.size()); }
    int dim() const { return tensors.empty() ? 0 : tensors.front().dim(); }
};

// Discretized memory kernel K_1..K_L, units fs^-2.
struct MemoryKernel {
    double dt = 0.0;
    std::vector<Superoperator> kernels;

    int count() const { return static_cast<int>(kernels.size()); }
    int dim() const { return kernels.empty() ? 0 : kernels.front().dim(); }
};

enum class KernelMode {
    // K_k = (T_k - delta_{k,1} E0(dt)) / dt^2; exact companion of the hybrid
    // difference equation at any step size.
    InteractionPicture,
    // K_k = (T_k - delta_{k,1} (I - i L0 dt)) / dt^2 with L0 the commutator
    // map of H0; the O(dt) discretization, kept for comparison.
    ShortTime,
};

// Unravels maps into tensors: T_1 = E(t_1), T_n = E(t_n) - sum T_k E(t_{n-k}).
// `count` <= maps.size(); warns through `logger` when the last tensor has not
// decayed below 1e-3 of ||T_1||_F.
TransferTensors extract_transfer_tensors(const std::vector<Superoperator>& maps, int count,
                                         double dt, const Logger& logger = {});

MemoryKernel memory_kernel(const TransferTensors& tt, const Superoperator& e0dt,
                           const CMatrix& h0, KernelMode mode);

// rho(t_n) = sum_{k=1}^{min(n,L)} T_k rho(t_{n-k}); in the source-map window
// this equals applying E(t_n) to the initial state.
Trajectory ttm_propagate(const TransferTensors& tt, const DensityMatrix& rho0, int n_steps);

}  // namespace pild
