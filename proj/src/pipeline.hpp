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

#include "cache.hpp"
#include "config.hpp"

namespace pild {

struct PipelineOptions {
    std::string cache_dir;  // empty: "<outputs.directory>/cache"
    bool force_recompute = false;
    std::optional<std::int64_t> budget_override;
    std::optional<int> threads_override;
    // restrict propagation to jump sets with these labels (empty: all)
    std::vector<std::string> only_labels;
    Logger logger;
};

std::string effective_cache_dir(const RunConfig& config, const PipelineOptions& options);

// Each stage loads its product from the cache when the content key matches
// and logs "loaded (cache hit)" / "computed"; prerequisites are obtained the
// same way.
DynamicalMaps stage_maps(const RunConfig& config, const PipelineOptions& options);
TtmStage stage_ttm(const RunConfig& config, const PipelineOptions& options);

// Propagates every (selected) jump set with the cached kernel and writes one
// trajectory table per set; returns the written paths.
std::vector<std::string> stage_propagate(const RunConfig& config, const PipelineOptions& options);

// maps -> ttm -> propagate.
std::vector<std::string> run_pipeline(const RunConfig& config, const PipelineOptions& options);

// Tabular trajectory export: column 1 is time in fs, then the requested
// observables; 17 significant digits, '#' header lines.
void export_trajectory(const Trajectory& trajectory, const std::vector<std::string>& observables,
                       const std::vector<std::string>& basis_labels, const std::string& path);

// Max absolute difference between two exported tables (same shape required).
double compare_tables(const std::string& path_a, const std::string& path_b);

}  // namespace pild
