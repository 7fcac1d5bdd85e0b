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

#include <doctest.h>

#include "lindblad.hpp"
#include "models.hpp"
#include "oracles.hpp"
#include "quapi.hpp"
#include "ttm.hpp"

using namespace pild;

namespace {

// gamma |g><from| in dimension d with |g> at index d-1
JumpOperator lowering_to_ground(int d, int from, double gamma) {
    JumpOperator op;
    op.matrix = CMatrix::Zero(d, d);
    op.matrix(d - 1, from) = gamma;
    op.label = "lowering";
    return op;
}

BathSpec drude_bath(double lambda, double gamma_d, double beta) {
    BathSpec spec;
    spec.spectral_density = SpectralDensity::drude_lorentz(lambda, gamma_d);
    spec.beta = beta;
    return spec;
}

}  // namespace

TEST_CASE("dissipator: empty jump set gives zero") {
    CMatrix rho = oracles::random_density(3, 1u);
    CHECK(dissipator({}, rho).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dissipator of gamma|g><e| on the decaying and orthogonal states") {
    // three site states + ground: the jump drains site index 2 into |g>,
    // moving gamma^2 of population per unit time and nothing else
    const int d = 4;
    const double gamma = 0.02;
    JumpOperator op = lowering_to_ground(d, 2, gamma);

    CMatrix excited = CMatrix::Zero(d, d);
    excited(2, 2) = 1.0;
    CMatrix out = dissipator({op}, excited);
    CMatrix expected = CMatrix::Zero(d, d);
    expected(d - 1, d - 1) = gamma * gamma;
    expected(2, 2) = -gamma * gamma;
    CHECK((out - expected).cwiseAbs().maxCoeff() < 1e-16);

    CMatrix orthogonal = CMatrix::Zero(d, d);
    orthogonal(0, 0) = 1.0;
    CHECK(dissipator({op}, orthogonal).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dissipator output is traceless and Hermitian for Hermitian input") {
    const int d = 3;
    JumpOperator a = lowering_to_ground(d, 0, 0.05);
    JumpOperator b;
    b.matrix = oracles::random_complex(d, 7u, 0.1);
    b.label = "random";
    CMatrix rho = oracles::random_density(d, 8u);
    CMatrix out = dissipator({a, b}, rho);
    CHECK(std::abs(out.trace()) < 1e-14);
    CHECK((out - out.adjoint()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("hybrid propagation with no jumps reduces to the transfer tensor recursion") {
    SystemModel model = spin_boson(0.1, 0.2, drude_bath(0.02, 0.1, 10.0));
    const double dt = 2.0;  // dt^2 = 4: the kernel division round-trips exactly
    DynamicalMaps maps = dynamical_maps(model, dt, 10, 5);
    TransferTensors tt = extract_transfer_tensors(maps.maps, 10, dt);
    Superoperator e0 = bare_map(model.h0, dt);
    MemoryKernel mk = memory_kernel(tt, e0, model.h0, KernelMode::InteractionPicture);

    CMatrix rho0 = CMatrix::Zero(2, 2);
    rho0(0, 0) = 1.0;
    DensityMatrix init = DensityMatrix::validated(rho0);
    Trajectory via_kernel = hybrid_propagate(mk, e0, {}, init, 100);
    Trajectory via_tensors = ttm_propagate(tt, init, 100);
    double worst = 0.0;
    for (int n = 0; n <= 100; ++n)
        worst = std::max(worst, (via_kernel.states[static_cast<std::size_t>(n)].data() -
                                 via_tensors.states[static_cast<std::size_t>(n)].data())
                                    .cwiseAbs()
                                    .maxCoeff());
    CHECK(worst < 1e-13);
}

TEST_CASE("pure decay follows the exponential law against the reference integrator") {
    // H0 = 0, L = gamma|g><e|: rho_ee(t) = exp(-gamma^2 t); the first-order
    // scheme must land within the Euler error of the RK4 reference
    const double tau_fs = 2500.0;
    const double gamma = std::sqrt(1.0 / tau_fs);
    JumpOperator op = lowering_to_ground(2, 0, gamma);
    CMatrix h0 = CMatrix::Zero(2, 2);
    CMatrix rho0 = CMatrix::Zero(2, 2);
    rho0(0, 0) = 1.0;
    DensityMatrix init = DensityMatrix::validated(rho0);

    const double dt = 10.0;
    const int n_steps = 500;  // 5 ps
    MemoryKernel empty_kernel;
    empty_kernel.dt = dt;
    Trajectory euler = hybrid_propagate(empty_kernel, bare_map(h0, dt), {op}, init, n_steps);
    Trajectory ref = lindblad_reference(h0, {op}, init, dt, n_steps);

    for (int n = 0; n <= n_steps; ++n) {
        double t = n * dt;
        double analytic = std::exp(-gamma * gamma * t);
        CHECK(std::abs(ref.states[static_cast<std::size_t>(n)].data()(0, 0).real() -
                       analytic) < 1e-10);
        double euler_err = std::abs(
            euler.states[static_cast<std::size_t>(n)].data()(0, 0).real() - analytic);
        CHECK(euler_err < gamma * gamma * dt);  // O(dt) bound
    }
}

TEST_CASE("first-order convergence of the dissipator step") {
    const double gamma = std::sqrt(1.0 / 2500.0);
    JumpOperator op = lowering_to_ground(2, 0, gamma);
    CMatrix h0 = CMatrix::Zero(2, 2);
    CMatrix rho0 = CMatrix::Zero(2, 2);
    rho0(0, 0) = 1.0;
    DensityMatrix init = DensityMatrix::validated(rho0);
    const double horizon = 4000.0;

    auto max_error = [&](double dt) {
        int n = static_cast<int>(horizon / dt);
        MemoryKernel empty_kernel;
        empty_kernel.dt = dt;
        Trajectory euler = hybrid_propagate(empty_kernel, bare_map(h0, dt), {op}, init, n);
        Trajectory ref = lindblad_reference(h0, {op}, init, dt, n);
        double worst = 0.0;
        for (int k = 0; k <= n; ++k)
            worst = std::max(worst, (euler.states[static_cast<std::size_t>(k)].data() -
                                     ref.states[static_cast<std::size_t>(k)].data())
                                        .cwiseAbs()
                                        .maxCoeff());
        return worst;
    };

    double e8 = max_error(8.0), e4 = max_error(4.0), e2 = max_error(2.0);
    CHECK(e4 / e8 == doctest::Approx(0.5).epsilon(0.2));
    CHECK(e2 / e4 == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("reference integrator: no jumps matches the bare map") {
    CMatrix h0 = oracles::random_hermitian(3, 31u, 0.1);
    CMatrix rho0 = oracles::random_density(3, 32u);
    DensityMatrix init = DensityMatrix::validated(rho0);
    const double dt = 0.02;
    Trajectory ref = lindblad_reference(h0, {}, init, dt, 50);
    Superoperator e0 = bare_map(h0, dt);
    CMatrix state = rho0;
    for (int n = 1; n <= 50; ++n) {
        state = pild::apply(e0, state);
        CHECK((ref.states[static_cast<std::size_t>(n)].data() - state).cwiseAbs().maxCoeff() <
              1e-10);
    }
}

TEST_CASE("dephasing jump damps the coherence at half the population rate") {
    // L = gamma |e><e|: populations frozen, |rho_01| decays as exp(-gamma^2 t / 2)
    const double gamma = 0.05;
    JumpOperator op;
    op.matrix = CMatrix::Zero(2, 2);
    op.matrix(0, 0) = gamma;
    op.label = "dephase";
    CMatrix rho0(2, 2);
    rho0 << Complex(0.5, 0), Complex(0.5, 0), Complex(0.5, 0), Complex(0.5, 0);
    DensityMatrix init = DensityMatrix::validated(rho0);
    Trajectory ref = lindblad_reference(CMatrix::Zero(2, 2), {op}, init, 1.0, 200);
    for (int n = 0; n <= 200; ++n) {
        const CMatrix& rho = ref.states[static_cast<std::size_t>(n)].data();
        CHECK(std::abs(rho(0, 0).real() - 0.5) < 1e-12);
        CHECK(std::abs(std::abs(rho(0, 1)) - 0.5 * std::exp(-0.5 * gamma * gamma * n)) <
              1e-9);
    }
}

TEST_CASE("reference integrator conserves the trace and validates the step") {
    const double gamma = std::sqrt(1.0 / 500.0);
    JumpOperator op = lowering_to_ground(3, 0, gamma);
    CMatrix h0 = oracles::random_hermitian(3, 41u, 0.1);
    CMatrix rho0 = oracles::random_density(3, 42u);
    DensityMatrix init = DensityMatrix::validated(rho0);
    Trajectory ref = lindblad_reference(h0, {op}, init, 0.02, 200);
    CHECK(ref.max_trace_drift() < 1e-10);

    // an absurdly large step fails the halving validation with advice
    try {
        lindblad_reference(h0 * 20.0, {op}, init, 25.0, 4);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("smaller dt") != std::string::npos);
    }
}

TEST_CASE("per-step dissipator contribution carries no trace") {
    SystemModel model = spin_boson(0.1, 0.2, drude_bath(0.02, 0.1, 10.0));
    const double dt = 2.0;
    DynamicalMaps maps = dynamical_maps(model, dt, 6, 3);
    TransferTensors tt = extract_transfer_tensors(maps.maps, 6, dt);
    Superoperator e0 = bare_map(model.h0, dt);
    MemoryKernel mk = memory_kernel(tt, e0, model.h0, KernelMode::InteractionPicture);

    JumpOperator op;
    op.matrix = CMatrix::Zero(2, 2);
    op.matrix(1, 0) = 0.02;
    op.label = "drain";
    CMatrix rho0 = CMatrix::Zero(2, 2);
    rho0(0, 0) = 1.0;
    DensityMatrix init = DensityMatrix::validated(rho0);

    Trajectory with = hybrid_propagate(mk, e0, {op}, init, 50);
    Trajectory without = hybrid_propagate(mk, e0, {}, init, 50);
    // jumps redistribute population; the trace budget stays that of the kernel
    CHECK(std::abs(with.max_trace_drift() - without.max_trace_drift()) < 1e-10);
    for (int n = 0; n <= 50; ++n)
        CHECK(std::abs(dissipator({op}, with.states[static_cast<std::size_t>(n)].data())
                           .trace()) < 1e-14);
}

TEST_CASE("hybrid propagation error paths") {
    MemoryKernel empty_kernel;
    empty_kernel.dt = 1.0;
    CMatrix rho0 = CMatrix::Zero(2, 2);
    rho0(0, 0) = 1.0;
    DensityMatrix init = DensityMatrix::validated(rho0);
    Superoperator e0 = Superoperator::identity(2);
    CHECK_THROWS_AS(hybrid_propagate(empty_kernel, e0, {}, init, 0), ValidationError);
    JumpOperator wrong_dim;
    wrong_dim.matrix = CMatrix::Zero(3, 3);
    CHECK_THROWS_AS(hybrid_propagate(empty_kernel, e0, {wrong_dim}, init, 5),
                    ValidationError);
}
