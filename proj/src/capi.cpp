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

#include "pild/pild.h"

#include <atomic>
#include <cstring>
#include <mutex>
#include <string>

#include "config.hpp"
#include "lindblad.hpp"
#include "models.hpp"
#include "pipeline.hpp"
#include "quapi.hpp"
#include "ttm.hpp"

namespace {

thread_local std::string g_last_error;

std::mutex g_log_mutex;
pild_log_fn g_log_fn = nullptr;
void* g_log_user = nullptr;

pild::Logger capi_logger() {
    return [](std::string_view line) {
        std::lock_guard<std::mutex> lock(g_log_mutex);
        if (g_log_fn != nullptr) {
            std::string owned(line);
            g_log_fn(owned.c_str(), g_log_user);
        }
    };
}

pild_status set_error(int code, const char* what) {
    g_last_error = what;
    switch (code) {
        case 2: return PILD_ERR_VALIDATION;
        case 3: return PILD_ERR_BUDGET;
        case 4: return PILD_ERR_NUMERICAL;
        default: return PILD_ERR_INTERNAL;
    }
}

template <typename Fn>
pild_status guarded(Fn&& fn) {
    try {
        fn();
        return PILD_OK;
    } catch (const pild::Error& e) {
        return set_error(e.code(), e.what());
    } catch (const std::exception& e) {
        return set_error(1, e.what());
    } catch (...) {
        return set_error(1, "unknown error");
    }
}

pild_status require(bool ok, const char* what) {
    if (ok) return PILD_OK;
    return set_error(2, what);
}

pild::CMatrix matrix_from_arrays(const double* re, const double* im, int d) {
    pild::CMatrix m(d, d);
    for (int c = 0; c < d; ++c)
        for (int r = 0; r < d; ++r) {
            std::size_t idx = static_cast<std::size_t>(c) * static_cast<std::size_t>(d) +
                              static_cast<std::size_t>(r);
            m(r, c) = pild::Complex(re[idx], im != nullptr ? im[idx] : 0.0);
        }
    return m;
}

void matrix_to_arrays(const pild::CMatrix& m, double* re, double* im) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            std::size_t idx = static_cast<std::size_t>(c * m.rows() + r);
            re[idx] = m(r, c).real();
            im[idx] = m(r, c).imag();
        }
}

pild::BathSpec bath_from_c(const pild_bath& b) {
    pild::BathSpec spec;
    switch (b.kind) {
        case PILD_BATH_OHMIC:
            spec.spectral_density = pild::SpectralDensity::ohmic(b.xi, b.omega_c);
            break;
        case PILD_BATH_DRUDE_LORENTZ:
            spec.spectral_density = pild::SpectralDensity::drude_lorentz(b.lambda, b.gamma_d);
            break;
        case PILD_BATH_TABULATED: {
            if (b.omega == nullptr || b.j == nullptr || b.n_points < 1)
                throw pild::ValidationError("pild_bath: tabulated bath needs omega/j arrays");
            std::vector<double> omega(b.omega, b.omega + b.n_points);
            std::vector<double> j(b.j, b.j + b.n_points);
            spec.spectral_density =
                pild::SpectralDensity::tabulated(std::move(omega), std::move(j));
            break;
        }
        default:
            throw pild::ValidationError("pild_bath: unknown kind");
    }
    spec.beta = b.beta_fs;
    return spec;
}

pild::PipelineOptions options_from_c(const pild_pipeline_options* o) {
    pild::PipelineOptions out;
    out.logger = capi_logger();
    if (o == nullptr) return out;
    if (o->cache_dir != nullptr) out.cache_dir = o->cache_dir;
    out.force_recompute = o->force_recompute != 0;
    if (o->budget > 0) out.budget_override = o->budget;
    if (o->threads > 0) out.threads_override = o->threads;
    return out;
}

}  // namespace

struct pild_config {
    pild::RunConfig config;
};
struct pild_model {
    pild::SystemModel model;
};
struct pild_maps {
    pild::DynamicalMaps maps;
};
struct pild_tensors {
    pild::TransferTensors tensors;
};
struct pild_kernel {
    pild::MemoryKernel kernel;
};
struct pild_trajectory {
    pild::Trajectory trajectory;
};

extern "C" {

const char* pild_last_error(void) { return g_last_error.c_str(); }

const char* pild_version(void) { return "1.0.0"; }

void pild_set_log_handler(pild_log_fn fn, void* user) {
    std::lock_guard<std::mutex> lock(g_log_mutex);
    g_log_fn = fn;
    g_log_user = user;
}

pild_status pild_config_load(const char* path, pild_config** out) {
    if (auto bad = require(path != nullptr && out != nullptr, "pild_config_load: null argument"))
        return bad;
    return guarded([&] { *out = new pild_config{pild::load_run_config(path)}; });
}

pild_status pild_config_parse(const char* json_text, const char* base_dir, pild_config** out) {
    if (auto bad = require(json_text != nullptr && out != nullptr,
                           "pild_config_parse: null argument"))
        return bad;
    return guarded([&] {
        *out = new pild_config{
            pild::parse_run_config(json_text, base_dir != nullptr ? base_dir : ".")};
    });
}

pild_status pild_config_serialize(const pild_config* config, char** json_out) {
    if (auto bad = require(config != nullptr && json_out != nullptr,
                           "pild_config_serialize: null argument"))
        return bad;
    return guarded([&] {
        std::string text = pild::serialize_run_config(config->config);
        *json_out = new char[text.size() + 1];
        std::memcpy(*json_out, text.c_str(), text.size() + 1);
    });
}

void pild_string_free(char* text) { delete[] text; }

void pild_config_free(pild_config* config) { delete config; }

pild_status pild_pipeline_maps(const pild_config* config, const pild_pipeline_options* options) {
    if (auto bad = require(config != nullptr, "pild_pipeline_maps: null config")) return bad;
    return guarded([&] { pild::stage_maps(config->config, options_from_c(options)); });
}

pild_status pild_pipeline_ttm(const pild_config* config, const pild_pipeline_options* options) {
    if (auto bad = require(config != nullptr, "pild_pipeline_ttm: null config")) return bad;
    return guarded([&] { pild::stage_ttm(config->config, options_from_c(options)); });
}

pild_status pild_pipeline_run(const pild_config* config, const pild_pipeline_options* options) {
    if (auto bad = require(config != nullptr, "pild_pipeline_run: null config")) return bad;
    return guarded([&] { pild::run_pipeline(config->config, options_from_c(options)); });
}

pild_status pild_compare_tables(const char* path_a, const char* path_b, double tolerance,
                                double* max_abs_diff) {
    if (auto bad = require(path_a != nullptr && path_b != nullptr,
                           "pild_compare_tables: null path"))
        return bad;
    double worst = 0.0;
    pild_status st = guarded([&] { worst = pild::compare_tables(path_a, path_b); });
    if (st != PILD_OK) return st;
    if (max_abs_diff != nullptr) *max_abs_diff = worst;
    if (worst > tolerance) {
        g_last_error = "tables differ by " + std::to_string(worst) + " (tolerance " +
                       std::to_string(tolerance) + ")";
        return PILD_ERR_NUMERICAL;
    }
    return PILD_OK;
}

pild_status pild_model_spin_boson(double eps, double delta, const pild_bath* bath,
                                  pild_model** out) {
    if (auto bad = require(bath != nullptr && out != nullptr,
                           "pild_model_spin_boson: null argument"))
        return bad;
    return guarded(
        [&] { *out = new pild_model{pild::spin_boson(eps, delta, bath_from_c(*bath))}; });
}

pild_status pild_model_frenkel(int n_sites, const double* site_energies, const double* couplings,
                               const pild_bath* baths, int extraction_site,
                               double extraction_timescale_ps, pild_model** out) {
    if (auto bad = require(n_sites >= 1 && site_energies != nullptr && couplings != nullptr &&
                               baths != nullptr && out != nullptr,
                           "pild_model_frenkel: null/invalid argument"))
        return bad;
    return guarded([&] {
        std::vector<double> energies(site_energies, site_energies + n_sites);
        Eigen::MatrixXd coupling_mat(n_sites, n_sites);
        for (int r = 0; r < n_sites; ++r)
            for (int c = 0; c < n_sites; ++c)
                coupling_mat(r, c) = couplings[static_cast<std::size_t>(r) *
                                                   static_cast<std::size_t>(n_sites) +
                                               static_cast<std::size_t>(c)];
        std::vector<pild::BathSpec> bath_specs;
        for (int s = 0; s < n_sites; ++s) bath_specs.push_back(bath_from_c(baths[s]));
        std::optional<pild::Extraction> extraction;
        if (extraction_site >= 0)
            extraction = pild::Extraction{extraction_site, extraction_timescale_ps};
        *out = new pild_model{pild::frenkel_with_ground(energies, coupling_mat,
                                                        std::move(bath_specs), extraction)};
    });
}

int pild_model_dim(const pild_model* model) {
    return model != nullptr ? model->model.dim() : 0;
}

void pild_model_free(pild_model* model) { delete model; }

pild_status pild_maps_compute(const pild_model* model, double dt_fs, int n_steps, int mem_len,
                              long long budget, int threads, pild_maps** out) {
    if (auto bad = require(model != nullptr && out != nullptr,
                           "pild_maps_compute: null argument"))
        return bad;
    return guarded([&] {
        pild::MapOptions mo;
        if (budget > 0) mo.budget = budget;
        mo.threads = threads;
        *out = new pild_maps{
            pild::dynamical_maps(model->model, dt_fs, n_steps, mem_len, {}, mo)};
    });
}

int pild_maps_count(const pild_maps* maps) { return maps != nullptr ? maps->maps.count() : 0; }

int pild_maps_dim(const pild_maps* maps) { return maps != nullptr ? maps->maps.dim() : 0; }

pild_status pild_maps_get(const pild_maps* maps, int step, double* re, double* im) {
    if (auto bad = require(maps != nullptr && re != nullptr && im != nullptr,
                           "pild_maps_get: null argument"))
        return bad;
    if (auto bad = require(step >= 1 && step <= maps->maps.count(),
                           "pild_maps_get: step out of range"))
        return bad;
    matrix_to_arrays(maps->maps.maps[static_cast<std::size_t>(step - 1)].matrix(), re, im);
    return PILD_OK;
}

void pild_maps_free(pild_maps* maps) { delete maps; }

pild_status pild_tensors_extract(const pild_maps* maps, int count, pild_tensors** out) {
    if (auto bad = require(maps != nullptr && out != nullptr,
                           "pild_tensors_extract: null argument"))
        return bad;
    return guarded([&] {
        *out = new pild_tensors{pild::extract_transfer_tensors(
            maps->maps.maps, count, maps->maps.dt, capi_logger())};
    });
}

int pild_tensors_count(const pild_tensors* tensors) {
    return tensors != nullptr ? tensors->tensors.count() : 0;
}

void pild_tensors_free(pild_tensors* tensors) { delete tensors; }

pild_status pild_kernel_build(const pild_tensors* tensors, const pild_model* model, int mode,
                              pild_kernel** out) {
    if (auto bad = require(tensors != nullptr && model != nullptr && out != nullptr,
                           "pild_kernel_build: null argument"))
        return bad;
    if (auto bad = require(mode == PILD_KERNEL_INTERACTION_PICTURE ||
                               mode == PILD_KERNEL_SHORT_TIME,
                           "pild_kernel_build: unknown mode"))
        return bad;
    return guarded([&] {
        pild::Superoperator e0dt = pild::bare_map(model->model.h0, tensors->tensors.dt);
        *out = new pild_kernel{pild::memory_kernel(
            tensors->tensors, e0dt, model->model.h0,
            mode == PILD_KERNEL_SHORT_TIME ? pild::KernelMode::ShortTime
                                           : pild::KernelMode::InteractionPicture)};
    });
}

int pild_kernel_count(const pild_kernel* kernel) {
    return kernel != nullptr ? kernel->kernel.count() : 0;
}

void pild_kernel_free(pild_kernel* kernel) { delete kernel; }

pild_status pild_propagate(const pild_kernel* kernel, const pild_model* model,
                           const double* rho0_re, const double* rho0_im, int n_steps,
                           int with_model_jumps, pild_trajectory** out) {
    if (auto bad = require(kernel != nullptr && model != nullptr && rho0_re != nullptr &&
                               out != nullptr,
                           "pild_propagate: null argument"))
        return bad;
    return guarded([&] {
        const int d = model->model.dim();
        pild::DensityMatrix rho0 =
            pild::DensityMatrix::validated(matrix_from_arrays(rho0_re, rho0_im, d));
        pild::Superoperator e0dt = pild::bare_map(model->model.h0, kernel->kernel.dt);
        std::vector<pild::JumpOperator> jumps;
        if (with_model_jumps != 0) jumps = model->model.jumps;
        *out = new pild_trajectory{
            pild::hybrid_propagate(kernel->kernel, e0dt, jumps, rho0, n_steps)};
    });
}

pild_status pild_reference_propagate(const pild_model* model, const double* rho0_re,
                                     const double* rho0_im, double dt_fs, int n_steps,
                                     pild_trajectory** out) {
    if (auto bad = require(model != nullptr && rho0_re != nullptr && out != nullptr,
                           "pild_reference_propagate: null argument"))
        return bad;
    return guarded([&] {
        const int d = model->model.dim();
        pild::DensityMatrix rho0 =
            pild::DensityMatrix::validated(matrix_from_arrays(rho0_re, rho0_im, d));
        *out = new pild_trajectory{pild::lindblad_reference(model->model.h0, model->model.jumps,
                                                            rho0, dt_fs, n_steps)};
    });
}

int pild_trajectory_steps(const pild_trajectory* trajectory) {
    return trajectory != nullptr ? trajectory->trajectory.steps() : 0;
}

int pild_trajectory_dim(const pild_trajectory* trajectory) {
    return trajectory != nullptr ? trajectory->trajectory.dim() : 0;
}

pild_status pild_trajectory_state(const pild_trajectory* trajectory, int step, double* re,
                                  double* im) {
    if (auto bad = require(trajectory != nullptr && re != nullptr && im != nullptr,
                           "pild_trajectory_state: null argument"))
        return bad;
    if (auto bad = require(step >= 0 && step <= trajectory->trajectory.steps(),
                           "pild_trajectory_state: step out of range"))
        return bad;
    matrix_to_arrays(trajectory->trajectory.states[static_cast<std::size_t>(step)].data(), re,
                     im);
    return PILD_OK;
}

pild_status pild_trajectory_export(const pild_trajectory* trajectory, const pild_model* model,
                                   const char* const* observables, int n_observables,
                                   const char* path) {
    if (auto bad = require(trajectory != nullptr && model != nullptr && observables != nullptr &&
                               n_observables >= 1 && path != nullptr,
                           "pild_trajectory_export: null/invalid argument"))
        return bad;
    return guarded([&] {
        std::vector<std::string> names;
        for (int i = 0; i < n_observables; ++i) names.emplace_back(observables[i]);
        pild::export_trajectory(trajectory->trajectory, names, model->model.basis_labels, path);
    });
}

void pild_trajectory_free(pild_trajectory* trajectory) { delete trajectory; }

}  // extern "C"
