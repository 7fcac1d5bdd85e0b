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
#include <vector>

#include "bath.hpp"
#include "core.hpp"
#include "models.hpp"

namespace pild {

// One point of a forward-backward path.
struct PathSegment {
    int fwd = 0;  // s+
    int bwd = 0;  // s-
};

// Influence functional of a constant-per-step path (hbar = 1):
//   F = exp(- sum_baths sum_{k=0}^{n} (c+_k - c-_k)
//                       sum_{k'=0}^{k} (eta_{kk'} c+_{k'} - conj(eta_{kk'}) c-_{k'}))
// where c+-_k is the bath coupling eigenvalue at the path state. The full
// double sum; no memory truncation. Throws when a lag exceeds the eta table.
Complex influence_weight(const std::vector<PathSegment>& path,
                         const std::vector<EtaCoefficients>& etas,
                         const std::vector<BathSpec>& baths);

// Retained path tails of the iterated path sum, with the initial index kept
// uncontracted so every intermediate object is still a map from rho(0).
// Storage is (d^2)^mem_len tails x d^2 initial indices.
class AugmentedTensor {
  public:
    AugmentedTensor(int dim, int mem_len);

    int dim() const { return dim_; }
    int mem_len() const { return mem_len_; }
    std::size_t tail_count() const { return tail_count_; }

    Complex& at(std::size_t tail, int alpha0) {
        return data_[static_cast<std::size_t>(alpha0) * tail_count_ + tail];
    }
    const Complex& at(std::size_t tail, int alpha0) const {
        return data_[static_cast<std::size_t>(alpha0) * tail_count_ + tail];
    }

    // The map rho(0) -> rho(t_n) carried by the tensor: tails summed out,
    // grouped by their newest index.
    Superoperator uncontracted_map() const;

  private:
    int dim_;
    int mem_len_;
    std::size_t tail_count_;
    std::vector<Complex> data_;
};

struct MapOptions {
    // Refuse when (d^2)^(min(mem_len, n_max)+1) exceeds this many path states.
    std::int64_t budget = std::int64_t{1} << 28;
    int threads = 1;  // 0 = hardware concurrency
    // Post-check every map for trace preservation.
    double trace_tol = 1e-8;
    // In-window code path; both must agree (tested). DirectSum enumerates the
    // (d^2)^(n+1) paths depth-first at O(memory-window) storage,
    // IterativeTensor materializes every intermediate augmented tensor.
    enum class WindowStrategy { DirectSum, IterativeTensor };
    WindowStrategy window = WindowStrategy::DirectSum;
};

struct DynamicalMaps {
    double dt = 0.0;
    int mem_len = 0;
    std::vector<Superoperator> maps;  // E(t_1) .. E(t_n)

    int count() const { return static_cast<int>(maps.size()); }
    int dim() const { return maps.empty() ? 0 : maps.front().dim(); }
};

// Augmented propagators E(t_1)..E(t_n_max) for the model: exact full-path
// summation while n <= mem_len, iterated tensor propagation with influence
// pairs beyond mem_len steps dropped afterwards. Deterministic for any thread
// count (workers own disjoint output blocks in fixed order).
DynamicalMaps dynamical_maps(const SystemModel& model,
                             const std::vector<EtaCoefficients>& etas, int n_max, int mem_len,
                             const MapOptions& options = {});

// Convenience overload computing the eta tables first.
DynamicalMaps dynamical_maps(const SystemModel& model, double dt, int n_max, int mem_len,
                             const QuadratureSettings& quadrature = {},
                             const MapOptions& options = {});

}  // namespace pild
