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

#include "config.hpp"
#include "quapi.hpp"
#include "ttm.hpp"

namespace pild {

// Content key of a cached stage. The hash only names the file; loads verify
// the full canonical string, so collisions can never alias physics.
struct CacheKey {
    std::string canonical;
    std::uint64_t hash = 0;

    std::string hex() const;
};

// Everything that feeds the path-integral stage: model physics (jump
// operators excluded by construction), step, memory length, window size and
// the eta quadrature settings.
CacheKey maps_cache_key(const RunConfig& config);
// Maps key plus tensor count and kernel mode.
CacheKey ttm_cache_key(const RunConfig& config);

struct TtmStage {
    TransferTensors tensors;
    MemoryKernel kernel;
    KernelMode mode = KernelMode::InteractionPicture;
};

std::string maps_cache_path(const std::string& cache_dir, const CacheKey& key);
std::string ttm_cache_path(const std::string& cache_dir, const CacheKey& key);

void save_maps_cache(const std::string& path, const DynamicalMaps& maps, const CacheKey& key);
void save_ttm_cache(const std::string& path, const TtmStage& stage, const CacheKey& key);

// nullopt on a missing file; a corrupt or mismatching file logs a warning and
// also returns nullopt so the pipeline recomputes.
std::optional<DynamicalMaps> load_maps_cache(const std::string& path, const CacheKey& key,
                                             const Logger& logger);
std::optional<TtmStage> load_ttm_cache(const std::string& path, const CacheKey& key,
                                       const Logger& logger);

}  // namespace pild
