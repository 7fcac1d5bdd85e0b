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

#include <cstdint>
#include <string>
#include <vector>

#include "models.hpp"
#include "quapi.hpp"
#include "ttm.hpp"

namespace pild {

// Parsed, validated and unit-converted run description. Everything is in
// internal units (fs, fs^-1) regardless of how the file spelled it.
struct RunConfig {
    static constexpr const char* kSchema = "pild-config/1";

    SystemModel base_model;  // jump operators live in jump_sets, not here
    CMatrix initial_state;

    double dt = 0.0;           // fs
    int n_map_steps = 0;
    int mem_len = 0;           // path-sum memory length L
    double propagate_to = 0.0; // fs
    int ttm_tensor_count = 0;  // defaults to the full map window
    KernelMode kernel_mode = KernelMode::InteractionPicture;
    QuadratureSettings quadrature;
    int threads = 1;
    std::int64_t budget = std::int64_t{1} << 28;

    struct JumpSet {
        std::string label;
        std::vector<JumpOperator> jumps;
    };
    std::vector<JumpSet> jump_sets;

    std::string out_dir = "out";
    std::vector<std::string> observables;  // "populations" | "rho" | "coherence:i,j"

    int n_propagate_steps() const {
        return static_cast<int>(std::lround(propagate_to / dt));
    }
};

// `base_dir` resolves relative paths (tabulated spectral density files).
RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir = ".");
RunConfig load_run_config(const std::string& path);

// Canonical serialized form; parse(serialize(parse(x))) == parse(x).
std::string serialize_run_config(const RunConfig& config);

// Throws ValidationError for names not in the observable grammar or indices
// outside the model dimension.
void validate_observables(const std::vector<std::string>& observables, int dim);

}  // namespace pild
