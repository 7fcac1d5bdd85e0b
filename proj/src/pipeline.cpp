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

#include "pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lindblad.hpp"

namespace pild {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string sanitize_label(const std::string& label) {
    std::string out;
    for (char c : label)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')
                   ? c
                   : '-';
    return out.empty() ? "unnamed" : out;
}

void append_row_value(std::string& row, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), " %.16e", v);
    row += buf;
}

}  // namespace

std::string effective_cache_dir(const RunConfig& config, const PipelineOptions& options) {
    if (!options.cache_dir.empty()) return options.cache_dir;
    return (std::filesystem::path(config.out_dir) / "cache").string();
}

DynamicalMaps stage_maps(const RunConfig& config, const PipelineOptions& options) {
    const CacheKey key = maps_cache_key(config);
    const std::string path = maps_cache_path(effective_cache_dir(config, options), key);

    if (!options.force_recompute) {
        if (auto cached = load_maps_cache(path, key, options.logger)) {
            log_to(options.logger, "[maps] loaded (cache hit) " + path);
            return *cached;
        }
    }

    auto start = Clock::now();
    std::vector<EtaCoefficients> etas;
    for (const auto& bath : config.base_model.baths)
        etas.push_back(eta_coefficients(bath, config.dt, config.mem_len, config.quadrature));

    MapOptions mo;
    mo.budget = options.budget_override.value_or(config.budget);
    mo.threads = options.threads_override.value_or(config.threads);
    DynamicalMaps maps =
        dynamical_maps(config.base_model, etas, config.n_map_steps, config.mem_len, mo);

    save_maps_cache(path, maps, key);
    std::ostringstream msg;
    msg << "[maps] computed " << maps.count() << " maps (d = " << maps.dim()
        << ", L = " << config.mem_len << ") in " << elapsed_ms(start) << " ms -> " << path;
    log_to(options.logger, msg.str());
    return maps;
}

TtmStage stage_ttm(const RunConfig& config, const PipelineOptions& options) {
    const CacheKey key = ttm_cache_key(config);
    const std::string path = ttm_cache_path(effective_cache_dir(config, options), key);

    if (!options.force_recompute) {
        if (auto cached = load_ttm_cache(path, key, options.logger)) {
            log_to(options.logger, "[ttm] loaded (cache hit) " + path);
            return *cached;
        }
    }

    DynamicalMaps maps = stage_maps(config, options);
    auto start = Clock::now();
    TtmStage stage;
    stage.tensors = extract_transfer_tensors(maps.maps, config.ttm_tensor_count, config.dt,
                                             options.logger);
    stage.mode = config.kernel_mode;
    Superoperator e0dt = bare_map(config.base_model.h0, config.dt);
    stage.kernel = memory_kernel(stage.tensors, e0dt, config.base_model.h0, stage.mode);

    save_ttm_cache(path, stage, key);
    std::ostringstream msg;
    msg << "[ttm] computed " << stage.tensors.count() << " tensors + kernel in "
        << elapsed_ms(start) << " ms -> " << path;
    log_to(options.logger, msg.str());
    return stage;
}

std::vector<std::string> stage_propagate(const RunConfig& config,
                                         const PipelineOptions& options) {
    TtmStage stage = stage_ttm(config, options);
    const Superoperator e0dt = bare_map(config.base_model.h0, config.dt);
    const DensityMatrix rho0 = DensityMatrix::validated(config.initial_state);
    const int n_steps = config.n_propagate_steps();

    std::vector<std::string> written;
    std::filesystem::create_directories(config.out_dir);
    for (const auto& set : config.jump_sets) {
        if (!options.only_labels.empty() &&
            std::find(options.only_labels.begin(), options.only_labels.end(), set.label) ==
                options.only_labels.end())
            continue;
        auto start = Clock::now();
        Trajectory traj = hybrid_propagate(stage.kernel, e0dt, set.jumps, rho0, n_steps);
        traj.label = set.label;
        std::string path = (std::filesystem::path(config.out_dir) /
                            ("traj_" + sanitize_label(set.label) + ".dat"))
                               .string();
        export_trajectory(traj, config.observables, config.base_model.basis_labels, path);
        std::ostringstream msg;
        msg << "[propagate] jump set '" << set.label << "': " << n_steps << " steps in "
            << elapsed_ms(start) << " ms, max |trace - 1| = " << traj.max_trace_drift()
            << " -> " << path;
        log_to(options.logger, msg.str());
        written.push_back(std::move(path));
    }
    if (written.empty())
        throw ValidationError("propagate: no jump set matched the requested labels");
    return written;
}

std::vector<std::string> run_pipeline(const RunConfig& config, const PipelineOptions& options) {
    return stage_propagate(config, options);
}

void export_trajectory(const Trajectory& trajectory, const std::vector<std::string>& observables,
                       const std::vector<std::string>& basis_labels, const std::string& path) {
    if (trajectory.states.empty()) throw ValidationError("export: empty trajectory");
    const int d = trajectory.dim();
    validate_observables(observables, d);

    auto label_of = [&](int i) {
        return static_cast<int>(basis_labels.size()) == d ? basis_labels[static_cast<std::size_t>(i)]
                                                          : std::to_string(i + 1);
    };

    std::string header = "# pild-trajectory/1\n";
    header += "# label: " + trajectory.label + "\n";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "# dt_fs: %.17g\n", trajectory.dt);
    header += buf;
    header += "# columns: t_fs";
    for (const auto& obs : observables) {
        if (obs == "populations") {
            for (int i = 0; i < d; ++i) header += " pop_" + label_of(i);
        } else if (obs == "rho") {
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) {
                    header += " Re_rho_" + label_of(r) + "_" + label_of(c);
                    header += " Im_rho_" + label_of(r) + "_" + label_of(c);
                }
        } else {  // coherence:i,j
            int i = 0, j = 0;
            std::sscanf(obs.c_str(), "coherence:%d,%d", &i, &j);
            header += " Re_rho_" + label_of(i - 1) + "_" + label_of(j - 1);
            header += " Im_rho_" + label_of(i - 1) + "_" + label_of(j - 1);
        }
    }
    header += "\n";

    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("export: cannot write " + path);
    out << header;

    for (std::size_t n = 0; n < trajectory.states.size(); ++n) {
        const CMatrix& rho = trajectory.states[n].data();
        std::string row;
        char tbuf[32];
        std::snprintf(tbuf, sizeof(tbuf), "%.16e", static_cast<double>(n) * trajectory.dt);
        row += tbuf;
        for (const auto& obs : observables) {
            if (obs == "populations") {
                for (int i = 0; i < d; ++i) append_row_value(row, rho(i, i).real());
            } else if (obs == "rho") {
                for (int r = 0; r < d; ++r)
                    for (int c = 0; c < d; ++c) {
                        append_row_value(row, rho(r, c).real());
                        append_row_value(row, rho(r, c).imag());
                    }
            } else {
                int i = 0, j = 0;
                std::sscanf(obs.c_str(), "coherence:%d,%d", &i, &j);
                append_row_value(row, rho(i - 1, j - 1).real());
                append_row_value(row, rho(i - 1, j - 1).imag());
            }
        }
        out << row << "\n";
    }
}

double compare_tables(const std::string& path_a, const std::string& path_b) {
    auto read_table = [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ValidationError("compare: cannot open " + path);
        std::vector<std::vector<double>> rows;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream row(line);
            std::vector<double> values;
            double v;
            while (row >> v) values.push_back(v);
            if (!values.empty()) rows.push_back(std::move(values));
        }
        return rows;
    };
    auto a = read_table(path_a);
    auto b = read_table(path_b);
    if (a.size() != b.size())
        throw ValidationError("compare: row count differs (" + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()) + ")");
    double worst = 0.0;
    for (std::size_t r = 0; r < a.size(); ++r) {
        if (a[r].size() != b[r].size())
            throw ValidationError("compare: column count differs at data row " +
                                  std::to_string(r));
        for (std::size_t c = 0; c < a[r].size(); ++c)
            worst = std::max(worst, std::abs(a[r][c] - b[r][c]));
    }
    return worst;
}

}  // namespace pild
