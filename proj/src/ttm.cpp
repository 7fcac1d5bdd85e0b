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

#include "ttm.hpp"

#include <sstream>

namespace pild {

TransferTensors extract_transfer_tensors(const std::vector<Superoperator>& maps, int count,
                                         double dt, const Logger& logger) {
    if (count < 1) throw ValidationError("extract_transfer_tensors: count must be >= 1");
    if (static_cast<int>(maps.size()) < count)
        throw ValidationError("extract_transfer_tensors: need " + std::to_string(count) +
                              " maps, got " + std::to_string(maps.size()));
    const int d = maps.front().dim();
    for (const auto& m : maps)
        if (m.dim() != d)
            throw ValidationError("extract_transfer_tensors: maps have mixed dimensions");

    TransferTensors tt;
    tt.dt = dt;
    tt.tensors.reserve(static_cast<std::size_t>(count));
    tt.tensors.push_back(maps[0]);  // T_1 = E(t_1)
    for (int n = 2; n <= count; ++n) {
        CMatrix t = maps[static_cast<std::size_t>(n - 1)].matrix();
        for (int k = 1; k < n; ++k)
            t -= tt.tensors[static_cast<std::size_t>(k - 1)].matrix() *
                 maps[static_cast<std::size_t>(n - k - 1)].matrix();
        tt.tensors.emplace_back(std::move(t));
    }

    double head = tt.tensors.front().matrix().norm();
    double tail = tt.tensors.back().matrix().norm();
    if (count > 1 && tail > 1e-3 * head) {
        std::ostringstream msg;
        msg << "[ttm] warning: memory not converged, ||T_" << count << "||_F = " << tail
            << " exceeds 1e-3 * ||T_1||_F = " << 1e-3 * head;
        log_to(logger, msg.str());
    }
    return tt;
}

MemoryKernel memory_kernel(const TransferTensors& tt, const Superoperator& e0dt,
                           const CMatrix& h0, KernelMode mode) {
    if (tt.dim() != e0dt.dim())
        throw ValidationError("memory_kernel: tensor/propagator dimension mismatch");
    const double dt2 = tt.dt * tt.dt;
    MemoryKernel mk;
    mk.dt = tt.dt;
    mk.kernels.reserve(tt.tensors.size());
    CMatrix first_step_ref;
    if (mode == KernelMode::InteractionPicture) {
        first_step_ref = e0dt.matrix();
    } else {
        first_step_ref = CMatrix::Identity(e0dt.matrix().rows(), e0dt.matrix().cols()) -
                         Complex(0.0, tt.dt) * commutator_map(h0).matrix();
    }
    for (std::size_t k = 0; k < tt.tensors.size(); ++k) {
        CMatrix num = tt.tensors[k].matrix();
        if (k == 0) num -= first_step_ref;
        mk.kernels.emplace_back(CMatrix(num / dt2));
    }
    return mk;
}

Trajectory ttm_propagate(const TransferTensors& tt, const DensityMatrix& rho0, int n_steps) {
    if (n_steps < 1) throw ValidationError("ttm_propagate: n_steps must be >= 1");
    if (rho0.dim() != tt.dim())
        throw ValidationError("ttm_propagate: state dimension does not match tensors");
    const int d = tt.dim();
    const int mem = tt.count();

    std::vector<CVector> history;
    history.reserve(static_cast<std::size_t>(n_steps) + 1);
    history.push_back(vec(rho0.data()));

    Trajectory traj;
    traj.dt = tt.dt;
    traj.label = "ttm";
    traj.states.reserve(static_cast<std::size_t>(n_steps) + 1);
    traj.states.push_back(rho0);

    for (int n = 1; n <= n_steps; ++n) {
        CVector next = CVector::Zero(static_cast<Eigen::Index>(d) * d);
        for (int k = 1; k <= std::min(n, mem); ++k)
            next += tt.tensors[static_cast<std::size_t>(k - 1)].matrix() *
                    history[static_cast<std::size_t>(n - k)];
        history.push_back(next);
        traj.states.push_back(DensityMatrix::unchecked(unvec(next, d)));
    }
    return traj;
}

}  // namespace pild
