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

#include "models.hpp"
#include "oracles.hpp"
#include "quapi.hpp"
#include "ttm.hpp"

using namespace pild;

namespace {

BathSpec drude_bath(double lambda, double gamma_d, double beta) {
    BathSpec spec;
    spec.spectral_density = SpectralDensity::drude_lorentz(lambda, gamma_d);
    spec.beta = beta;
    return spec;
}

DynamicalMaps drude_run(int n_map, int mem) {
    SystemModel model = spin_boson(0.1, 0.2, drude_bath(0.02, 0.1, 10.0));
    return dynamical_maps(model, 2.0, n_map, mem);
}

std::vector<Superoperator> markovian_maps(const CMatrix& m, int count) {
    std::vector<Superoperator> maps;
    CMatrix power = CMatrix::Identity(m.rows(), m.cols());
    for (int n = 0; n < count; ++n) {
        power = m * power;
        maps.emplace_back(power);
    }
    return maps;
}

}  // namespace

TEST_CASE("Markovian maps collapse to a single transfer tensor") {
    CMatrix m = bare_map(oracles::random_hermitian(2, 3u), 1.5).matrix();
    // mix in a mild uniform damping so M is not unitary
    m *= 0.97;
    TransferTensors tt = extract_transfer_tensors(markovian_maps(m, 6), 6, 1.5);
    CHECK((tt.tensors[0].matrix() - m).cwiseAbs().maxCoeff() < 1e-13);
    for (int k = 2; k <= 6; ++k)
        CHECK(tt.tensors[static_cast<std::size_t>(k - 1)].matrix().cwiseAbs().maxCoeff() <
              1e-12);
}

TEST_CASE("zero-coupling maps give T_1 = E0, rest zero") {
    BathSpec free_bath;
    free_bath.spectral_density = SpectralDensity::ohmic(0.0, 0.1);
    free_bath.beta = 25.0;
    SystemModel model = spin_boson(0.15, 0.3, free_bath);
    DynamicalMaps maps = dynamical_maps(model, 2.0, 5, 2);
    TransferTensors tt = extract_transfer_tensors(maps.maps, 5, 2.0);
    CHECK((tt.tensors[0].matrix() - bare_map(model.h0, 2.0).matrix()).cwiseAbs().maxCoeff() <
          1e-12);
    for (int k = 2; k <= 5; ++k)
        CHECK(tt.tensors[static_cast<std::size_t>(k - 1)].matrix().cwiseAbs().maxCoeff() <
              1e-12);
}

TEST_CASE("reconstruction identity holds across the source window") {
    DynamicalMaps maps = drude_run(10, 5);
    TransferTensors tt = extract_transfer_tensors(maps.maps, 10, 2.0);
    for (int n = 1; n <= 10; ++n) {
        CMatrix sum = CMatrix::Zero(4, 4);
        for (int k = 1; k <= n; ++k) {
            CMatrix e_prev = k == n ? CMatrix::Identity(4, 4)
                                    : maps.maps[static_cast<std::size_t>(n - k - 1)].matrix();
            sum += tt.tensors[static_cast<std::size_t>(k - 1)].matrix() * e_prev;
        }
        CHECK((sum - maps.maps[static_cast<std::size_t>(n - 1)].matrix())
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
    }
}

TEST_CASE("transfer tensors preserve Hermiticity of states") {
    DynamicalMaps maps = drude_run(8, 4);
    TransferTensors tt = extract_transfer_tensors(maps.maps, 8, 2.0);
    for (const auto& t : tt.tensors) CHECK(t.hermiticity_defect() < 1e-10);
}

TEST_CASE("extraction errors and the decay warning") {
    DynamicalMaps maps = drude_run(4, 2);
    CHECK_THROWS_AS(extract_transfer_tensors(maps.maps, 6, 2.0), ValidationError);
    CHECK_THROWS_AS(extract_transfer_tensors(maps.maps, 0, 2.0), ValidationError);

    // truncating while ||T_L|| is still large must warn; a long enough
    // window must not
    std::vector<std::string> log;
    extract_transfer_tensors(maps.maps, 2, 2.0,
                             [&](std::string_view line) { log.emplace_back(line); });
    REQUIRE(!log.empty());
    CHECK(log.front().find("memory not converged") != std::string::npos);

    log.clear();
    extract_transfer_tensors(maps.maps, 4, 2.0,
                             [&](std::string_view line) { log.emplace_back(line); });
    CHECK(log.empty());
}

TEST_CASE("interaction-picture kernel of zero-coupling maps vanishes") {
    BathSpec free_bath;
    free_bath.spectral_density = SpectralDensity::ohmic(0.0, 0.1);
    free_bath.beta = 25.0;
    SystemModel model = spin_boson(0.15, 0.3, free_bath);
    DynamicalMaps maps = dynamical_maps(model, 2.0, 5, 2);
    TransferTensors tt = extract_transfer_tensors(maps.maps, 5, 2.0);
    Superoperator e0 = bare_map(model.h0, 2.0);
    MemoryKernel mk = memory_kernel(tt, e0, model.h0, KernelMode::InteractionPicture);
    for (const auto& k : mk.kernels)
        CHECK(k.matrix().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("short-time and interaction-picture kernels differ by the bare-map Taylor remainder") {
    // K_1 difference times dt^2 equals E0(dt) - I + i L0 dt, which is O(dt^2)
    SystemModel model = spin_boson(0.1, 0.2, drude_bath(0.02, 0.1, 10.0));
    auto remainder = [&](double dt) {
        DynamicalMaps maps = dynamical_maps(model, dt, 3, 2);
        TransferTensors tt = extract_transfer_tensors(maps.maps, 3, dt);
        Superoperator e0 = bare_map(model.h0, dt);
        MemoryKernel ip = memory_kernel(tt, e0, model.h0, KernelMode::InteractionPicture);
        MemoryKernel st = memory_kernel(tt, e0, model.h0, KernelMode::ShortTime);
        // later kernels are identical in both modes
        for (std::size_t k = 1; k < ip.kernels.size(); ++k)
            CHECK((ip.kernels[k].matrix() - st.kernels[k].matrix()).cwiseAbs().maxCoeff() ==
                  0.0);
        double diff =
            (st.kernels[0].matrix() - ip.kernels[0].matrix()).cwiseAbs().maxCoeff() * dt * dt;
        CMatrix expected = e0.matrix() -
                           CMatrix::Identity(4, 4) +
                           Complex(0.0, dt) * commutator_map(model.h0).matrix();
        CHECK(std::abs(diff - expected.cwiseAbs().maxCoeff()) < 1e-13);
        return diff;
    };
    double at_dt = remainder(2.0);
    double at_half = remainder(1.0);
    double at_quarter = remainder(0.5);
    // remainder shrinks like dt^2
    CHECK(at_half / at_dt < 0.35);
    CHECK(at_quarter / at_half < 0.35);
}

TEST_CASE("ttm_propagate reproduces Markovian powers") {
    CMatrix m = bare_map(oracles::random_hermitian(2, 9u), 1.0).matrix() * 0.95;
    TransferTensors tt = extract_transfer_tensors(markovian_maps(m, 5), 5, 1.0);
    CMatrix rho0 = oracles::random_density(2, 10u);
    Trajectory traj = ttm_propagate(tt, DensityMatrix::validated(rho0), 12);
    CVector v = vec(rho0);
    for (int n = 0; n <= 12; ++n) {
        CHECK((traj.states[static_cast<std::size_t>(n)].data() - unvec(v, 2))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
        v = m * v;
    }
}

TEST_CASE("ttm_propagate matches direct map application inside the window") {
    // maps to n = 12, propagation far beyond; in-window states equal E(t_n) rho0
    DynamicalMaps maps = drude_run(12, 4);
    TransferTensors tt = extract_transfer_tensors(maps.maps, 12, 2.0);
    CMatrix rho0 = CMatrix::Zero(2, 2);
    rho0(0, 0) = 1.0;
    Trajectory traj = ttm_propagate(tt, DensityMatrix::validated(rho0), 100);
    REQUIRE(traj.steps() == 100);
    for (int n = 1; n <= 12; ++n) {
        CMatrix direct = pild::apply(maps.maps[static_cast<std::size_t>(n - 1)], rho0);
        CHECK((traj.states[static_cast<std::size_t>(n)].data() - direct)
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
    }
}

TEST_CASE("ttm_propagate keeps the trace over ten windows") {
    DynamicalMaps maps = drude_run(10, 5);
    TransferTensors tt = extract_transfer_tensors(maps.maps, 10, 2.0);
    CMatrix rho0 = CMatrix::Zero(2, 2);
    rho0(1, 1) = 1.0;
    Trajectory traj = ttm_propagate(tt, DensityMatrix::validated(rho0), 100);
    CHECK(traj.max_trace_drift() < 1e-8);
}

TEST_CASE("ttm_propagate is linear in the initial state") {
    DynamicalMaps maps = drude_run(8, 4);
    TransferTensors tt = extract_transfer_tensors(maps.maps, 8, 2.0);
    CMatrix a = oracles::random_density(2, 21u);
    CMatrix b = oracles::random_density(2, 22u);
    const double alpha = 0.3;
    CMatrix mix = alpha * a + (1.0 - alpha) * b;
    Trajectory ta = ttm_propagate(tt, DensityMatrix::validated(a), 30);
    Trajectory tb = ttm_propagate(tt, DensityMatrix::validated(b), 30);
    Trajectory tm = ttm_propagate(tt, DensityMatrix::validated(mix), 30);
    for (int n = 0; n <= 30; ++n) {
        CMatrix combo = alpha * ta.states[static_cast<std::size_t>(n)].data() +
                        (1.0 - alpha) * tb.states[static_cast<std::size_t>(n)].data();
        CHECK((tm.states[static_cast<std::size_t>(n)].data() - combo).cwiseAbs().maxCoeff() <
              1e-12);
    }
}
