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

// Batch front end. Talks to the library exclusively through the C API.

#include <cstdio>
#include <string>

#include <CLI11.hpp>
#include <pild/pild.h>

namespace {

void print_log_line(const char* line, void*) { std::printf("%s\n", line); }

int finish(pild_status status) {
    if (status != PILD_OK) std::fprintf(stderr, "error: %s\n", pild_last_error());
    return static_cast<int>(status);
}

struct CommonArgs {
    std::string config_path;
    std::string cache_dir;
    bool force_recompute = false;
    long long budget = 0;
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Run configuration file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--cache-dir", args.cache_dir,
                    "Stage cache directory (default: <outputs.directory>/cache)");
    cmd->add_flag("--force-recompute", args.force_recompute, "Ignore cached stages");
    cmd->add_option("--budget", args.budget,
                    "Path-state budget override for the map generator");
    cmd->add_option("--threads", args.threads, "Worker threads for the map generator");
}

pild_pipeline_options make_options(const CommonArgs& args) {
    pild_pipeline_options options{};
    options.cache_dir = args.cache_dir.empty() ? nullptr : args.cache_dir.c_str();
    options.force_recompute = args.force_recompute ? 1 : 0;
    options.budget = args.budget;
    options.threads = args.threads;
    return options;
}

int run_stage(const CommonArgs& args,
              pild_status (*stage)(const pild_config*, const pild_pipeline_options*)) {
    pild_config* config = nullptr;
    pild_status status = pild_config_load(args.config_path.c_str(), &config);
    if (status != PILD_OK) return finish(status);
    pild_pipeline_options options = make_options(args);
    status = stage(config, &options);
    pild_config_free(config);
    return finish(status);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pild: path-sum dynamical maps, transfer tensors, memory kernels and "
                 "empirical decay channels for open quantum systems"};
    app.require_subcommand(1);
    pild_set_log_handler(print_log_line, nullptr);

    CommonArgs maps_args, ttm_args, prop_args, run_args;

    CLI::App* maps_cmd = app.add_subcommand("maps", "Generate and cache the dynamical maps");
    add_common(maps_cmd, maps_args);

    CLI::App* ttm_cmd =
        app.add_subcommand("ttm", "Extract transfer tensors and the memory kernel");
    add_common(ttm_cmd, ttm_args);

    CLI::App* prop_cmd = app.add_subcommand(
        "propagate", "Propagate every configured jump set and write trajectory tables");
    add_common(prop_cmd, prop_args);

    CLI::App* run_cmd = app.add_subcommand("run", "Full pipeline: maps, ttm, propagate");
    add_common(run_cmd, run_args);

    std::string compare_a, compare_b;
    double compare_tol = 1e-12;
    CLI::App* compare_cmd =
        app.add_subcommand("compare", "Diff two trajectory tables within a tolerance");
    compare_cmd->add_option("file_a", compare_a)->required()->check(CLI::ExistingFile);
    compare_cmd->add_option("file_b", compare_b)->required()->check(CLI::ExistingFile);
    compare_cmd->add_option("--tol", compare_tol, "Maximum allowed absolute difference");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // malformed invocation is a validation failure
    }

    if (maps_cmd->parsed()) return run_stage(maps_args, pild_pipeline_maps);
    if (ttm_cmd->parsed()) return run_stage(ttm_args, pild_pipeline_ttm);
    if (prop_cmd->parsed()) return run_stage(prop_args, pild_pipeline_run);
    if (run_cmd->parsed()) return run_stage(run_args, pild_pipeline_run);

    if (compare_cmd->parsed()) {
        double worst = 0.0;
        pild_status status =
            pild_compare_tables(compare_a.c_str(), compare_b.c_str(), compare_tol, &worst);
        if (status == PILD_OK)
            std::printf("match: max |diff| = %.3e <= %.3e\n", worst, compare_tol);
        return finish(status);
    }
    return 2;
}
