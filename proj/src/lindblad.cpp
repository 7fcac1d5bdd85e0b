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

#include "lindblad.hpp"

#include <cmath>
#include <sstream>

namespace pild {

void JumpOperator::validate(int dim) const {
    if (matrix.rows() != dim || matrix.cols() != dim)
        throw ValidationError("JumpOperator '" + label + "': expected " + std::to_string(dim) +
                              "x" + std::to_string(dim) + " matrix");
    if (!matrix.allFinite())
        throw ValidationError("JumpOperator '" + label + "': entries must be finite");
}

CMatrix dissipator(const std::vector<JumpOperator>& jumps, const CMatrix& rho) {
    if (rho.rows() != rho.cols()) throw ValidationError("dissipator: rho must be square");
    CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
    for (const auto& jump : jumps) {
        if (jump.matrix.rows() != rho.rows())
            throw ValidationError("dissipator: jump operator dimension mismatch");
        const CMatrix& l = jump.matrix;
        CMatrix ldl = l.adjoint() * l;
        out += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
    }
    return out;
}

Trajectory hybrid_propagate(const MemoryKernel& kernel, const Superoperator& e0dt,
                            const std::vector<JumpOperator>& jumps, const DensityMatrix& rho0,
                            int n_steps) {
    if (n_steps < 1) throw ValidationError("hybrid_propagate: n_steps must be >= 1");
    if (e0dt.dim() != rho0.dim())
        throw ValidationError("hybrid_propagate: dimension mismatch");
    // an empty kernel is the memoryless limit K = 0
    if (kernel.count() > 0 && kernel.dim() != rho0.dim())
        throw ValidationError("hybrid_propagate: kernel dimension mismatch");
    for (const auto& jump : jumps) jump.validate(rho0.dim());

    const int d = rho0.dim();
    const double dt = kernel.dt;
    const double dt2 = dt * dt;
    const int mem = kernel.count();

    std::vector<CVector> history;
    history.reserve(static_cast<std::size_t>(n_steps) + 1);
    history.push_back(vec(rho0.data()));

    Trajectory traj;
    traj.dt = dt;
    traj.label = jumps.empty() ? "hybrid" : "hybrid+jumps";
    traj.states.reserve(static_cast<std::size_t>(n_steps) + 1);
    traj.states.push_back(rho0);

    for (int n = 1; n <= n_steps; ++n) {
        CVector next = e0dt.matrix() * history[static_cast<std::size_t>(n - 1)];
        for (int j = 1; j <= std::min(n, mem); ++j)
            next += kernel.kernels[static_cast<std::size_t>(j - 1)].matrix() *
                    history[static_cast<std::size_t>(n - j)] * dt2;
        if (!jumps.empty()) {
            CMatrix prev = unvec(history[static_cast<std::size_t>(n - 1)], d);
            next += vec(dissipator(jumps, prev)) * dt;
        }
        history.push_back(next);
        traj.states.push_back(DensityMatrix::unchecked(unvec(next, d)));
    }
    return traj;
}

namespace {

CMatrix lindblad_rhs(const CMatrix& h0, const std::vector<JumpOperator>& jumps,
                     const CMatrix& rho) {
    CMatrix out = Complex(0.0, -1.0) * (h0 * rho - rho * h0);
    if (!jumps.empty()) out += dissipator(jumps, rho);
    return out;
}

std::vector<CMatrix> rk4_states(const CMatrix& h0, const std::vector<JumpOperator>& jumps,
                                const CMatrix& rho0, double dt, int n_steps) {
    std::vector<CMatrix> states;
    states.reserve(static_cast<std::size_t>(n_steps) + 1);
    states.push_back(rho0);
    CMatrix rho = rho0;
    for (int n = 0; n < n_steps; ++n) {
        CMatrix k1 = lindblad_rhs(h0, jumps, rho);
        CMatrix k2 = lindblad_rhs(h0, jumps, rho + 0.5 * dt * k1);
        CMatrix k3 = lindblad_rhs(h0, jumps, rho + 0.5 * dt * k2);
        CMatrix k4 = lindblad_rhs(h0, jumps, rho + dt * k3);
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        states.push_back(rho);
    }
    return states;
}

}  // namespace

Trajectory lindblad_reference(const CMatrix& h0, const std::vector<JumpOperator>& jumps,
                              const DensityMatrix& rho0, double dt, int n_steps,
                              double halving_tol) {
    require_hermitian(h0, 1e-10, "lindblad_reference");
    if (dt <= 0.0) throw ValidationError("lindblad_reference: dt must be positive");
    if (n_steps < 1) throw ValidationError("lindblad_reference: n_steps must be >= 1");
    for (const auto& jump : jumps) jump.validate(rho0.dim());

    auto coarse = rk4_states(h0, jumps, rho0.data(), dt, n_steps);
    auto fine = rk4_states(h0, jumps, rho0.data(), 0.5 * dt, 2 * n_steps);
    double worst = 0.0;
    for (int n = 0; n <= n_steps; ++n)
        worst = std::max(worst, (coarse[static_cast<std::size_t>(n)] -
                                 fine[static_cast<std::size_t>(2 * n)])
                                    .cwiseAbs()
                                    .maxCoeff());
    if (worst > halving_tol) {
        std::ostringstream msg;
        msg << "lindblad_reference: step-halving disagreement " << worst << " exceeds "
            << halving_tol << "; use a smaller dt";
        throw NumericalError(msg.str());
    }

    Trajectory traj;
    traj.dt = dt;
    traj.label = "rk4-reference";
    traj.states.reserve(coarse.size());
    for (auto& s : coarse) traj.states.push_back(DensityMatrix::unchecked(std::move(s)));
    return traj;
}

}  // namespace pild
