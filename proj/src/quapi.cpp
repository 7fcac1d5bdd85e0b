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

#include "quapi.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <thread>

namespace pild {

namespace {

// Pair index convention: alpha = s_minus * d + s_plus, matching the vec index
// of the (s_plus, s_minus) density matrix entry.
inline int fwd_of(int alpha, int d) { return alpha % d; }
inline int bwd_of(int alpha, int d) { return alpha / d; }

// Per-model precomputed factors entering every path weight.
struct Tables {
    int d = 0;
    int pair_dim = 0;            // d^2
    CMatrix e0;                  // bare forward-backward factors in pair basis
    CVector self;                // exp of the lag-0 self influence, per pair state
    std::vector<CMatrix> pair;   // [lag] exp of the lag influence, lag 1..mem_len
};

Tables build_tables(const SystemModel& model, const std::vector<EtaCoefficients>& etas,
                    int mem_len, double dt) {
    Tables tb;
    tb.d = model.dim();
    tb.pair_dim = tb.d * tb.d;
    tb.e0 = bare_map(model.h0, dt).matrix();
    tb.self = CVector::Ones(tb.pair_dim);
    tb.pair.assign(static_cast<std::size_t>(mem_len) + 1, CMatrix::Ones(tb.pair_dim, tb.pair_dim));

    for (std::size_t b = 0; b < model.baths.size(); ++b) {
        const auto& coupling = model.baths[b].coupling_diag;
        const auto& eta = etas[b];
        for (int alpha = 0; alpha < tb.pair_dim; ++alpha) {
            double cp = coupling[static_cast<std::size_t>(fwd_of(alpha, tb.d))];
            double cm = coupling[static_cast<std::size_t>(bwd_of(alpha, tb.d))];
            double dc = cp - cm;
            tb.self(alpha) *= std::exp(-dc * (eta.eta_diag * cp - std::conj(eta.eta_diag) * cm));
            for (int lag = 1; lag <= mem_len; ++lag) {
                Complex e = eta.eta(lag);
                for (int prev = 0; prev < tb.pair_dim; ++prev) {
                    double cp2 = coupling[static_cast<std::size_t>(fwd_of(prev, tb.d))];
                    double cm2 = coupling[static_cast<std::size_t>(bwd_of(prev, tb.d))];
                    tb.pair[static_cast<std::size_t>(lag)](alpha, prev) *=
                        std::exp(-dc * (e * cp2 - std::conj(e) * cm2));
                }
            }
        }
    }
    return tb;
}

void run_partitioned(int jobs, int threads, const std::function<void(int, int)>& range_fn) {
    threads = std::max(1, std::min(threads, jobs));
    if (threads == 1) {
        range_fn(0, jobs);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        int lo = jobs * t / threads;
        int hi = jobs * (t + 1) / threads;
        pool.emplace_back(range_fn, lo, hi);
    }
    for (auto& th : pool) th.join();
}

// Depth-first walk over all paths (alpha_1..alpha_depth) for one fixed
// alpha_0 column, accumulating every intermediate map and, when requested,
// writing the depth-final weights into the augmented tensor.
void walk_column(const Tables& tb, int alpha0, int depth, int mem_len,
                 std::vector<CMatrix>& maps, AugmentedTensor* tensor) {
    const int dd = tb.pair_dim;
    std::vector<int> digit(static_cast<std::size_t>(depth) + 1, -1);
    std::vector<Complex> weight(static_cast<std::size_t>(depth) + 1);
    digit[0] = alpha0;
    weight[0] = tb.self(alpha0);

    int k = 1;
    while (true) {
        int a = ++digit[static_cast<std::size_t>(k)];
        if (a == dd) {
            if (--k == 0) break;
            continue;
        }
        Complex w = weight[static_cast<std::size_t>(k - 1)] *
                    tb.e0(a, digit[static_cast<std::size_t>(k - 1)]) * tb.self(a);
        const int max_lag = std::min(k, mem_len);
        for (int lag = 1; lag <= max_lag; ++lag)
            w *= tb.pair[static_cast<std::size_t>(lag)](a, digit[static_cast<std::size_t>(k - lag)]);
        weight[static_cast<std::size_t>(k)] = w;
        maps[static_cast<std::size_t>(k - 1)](a, alpha0) += w;
        if (tensor != nullptr && k == depth) {
            std::size_t tail = 0;  // oldest step in the least significant digit
            for (int j = depth; j >= 1; --j)
                tail = tail * static_cast<std::size_t>(dd) +
                       static_cast<std::size_t>(digit[static_cast<std::size_t>(j)]);
            tensor->at(tail, alpha0) = w;
        }
        if (k < depth) {
            ++k;
            digit[static_cast<std::size_t>(k)] = -1;
        }
    }
}

// Same in-window maps, but by materializing each augmented tensor in turn.
// Kept as an independent code path; production defaults to the walk.
AugmentedTensor window_iterative(const Tables& tb, int depth, int threads,
                                 std::vector<CMatrix>& maps) {
    const int dd = tb.pair_dim;
    AugmentedTensor cur(tb.d, 1);
    run_partitioned(dd, threads, [&](int lo, int hi) {
        for (int alpha0 = lo; alpha0 < hi; ++alpha0)
            for (int a1 = 0; a1 < dd; ++a1) {
                Complex w = tb.self(alpha0) * tb.e0(a1, alpha0) * tb.self(a1) *
                            tb.pair[1](a1, alpha0);
                cur.at(static_cast<std::size_t>(a1), alpha0) = w;
                maps[0](a1, alpha0) += w;
            }
    });

    for (int step = 2; step <= depth; ++step) {
        AugmentedTensor next(tb.d, step);
        std::size_t prev_tails = cur.tail_count();
        run_partitioned(dd, threads, [&](int lo, int hi) {
            std::vector<int> dig(static_cast<std::size_t>(step), 0);
            for (int alpha0 = lo; alpha0 < hi; ++alpha0) {
                for (std::size_t tail = 0; tail < prev_tails; ++tail) {
                    std::size_t rest = tail;
                    for (int j = 0; j < step - 1; ++j) {
                        dig[static_cast<std::size_t>(j)] = static_cast<int>(rest % dd);
                        rest /= static_cast<std::size_t>(dd);
                    }
                    for (int a = 0; a < dd; ++a) {
                        Complex w = cur.at(tail, alpha0) *
                                    tb.e0(a, dig[static_cast<std::size_t>(step - 2)]) *
                                    tb.self(a);
                        for (int lag = 1; lag < step; ++lag)
                            w *= tb.pair[static_cast<std::size_t>(lag)](
                                a, dig[static_cast<std::size_t>(step - 1 - lag)]);
                        w *= tb.pair[static_cast<std::size_t>(step)](a, alpha0);
                        next.at(tail + static_cast<std::size_t>(a) * prev_tails, alpha0) = w;
                        maps[static_cast<std::size_t>(step - 1)](a, alpha0) += w;
                    }
                }
            }
        });
        cur = std::move(next);
    }
    return cur;
}

// One memory-truncated step: absorb a new path point, integrate out the one
// falling off the back of the window.
void contract_step(const Tables& tb, int mem_len, const AugmentedTensor& cur,
                   AugmentedTensor& next, CMatrix& map_out, int threads) {
    const int dd = tb.pair_dim;
    const std::size_t prefix_count = cur.tail_count() / static_cast<std::size_t>(dd);
    const auto& lag_max = tb.pair[static_cast<std::size_t>(mem_len)];

    run_partitioned(dd, threads, [&](int lo, int hi) {
        std::vector<int> mdig(static_cast<std::size_t>(std::max(mem_len - 1, 1)), 0);
        for (int alpha0 = lo; alpha0 < hi; ++alpha0) {
            std::fill(mdig.begin(), mdig.end(), 0);
            for (std::size_t m = 0; m < prefix_count; ++m) {
                for (int a = 0; a < dd; ++a) {
                    Complex w;
                    if (mem_len == 1) {
                        Complex acc(0.0, 0.0);
                        for (int old = 0; old < dd; ++old)
                            acc += lag_max(a, old) * tb.e0(a, old) * cur.at(static_cast<std::size_t>(old), alpha0);
                        w = tb.self(a) * acc;
                    } else {
                        Complex acc(0.0, 0.0);
                        const std::size_t base = m * static_cast<std::size_t>(dd);
                        for (int old = 0; old < dd; ++old)
                            acc += lag_max(a, old) * cur.at(base + static_cast<std::size_t>(old), alpha0);
                        w = tb.self(a) * tb.e0(a, mdig[static_cast<std::size_t>(mem_len - 2)]) * acc;
                        for (int lag = 1; lag <= mem_len - 1; ++lag)
                            w *= tb.pair[static_cast<std::size_t>(lag)](
                                a, mdig[static_cast<std::size_t>(mem_len - 1 - lag)]);
                    }
                    next.at(m + static_cast<std::size_t>(a) * prefix_count, alpha0) = w;
                }
                // advance the prefix odometer (oldest digit first)
                for (std::size_t j = 0; j + 1 < static_cast<std::size_t>(mem_len); ++j) {
                    if (++mdig[j] < dd) break;
                    mdig[j] = 0;
                }
            }
            for (int a = 0; a < dd; ++a) {
                Complex acc(0.0, 0.0);
                for (std::size_t m = 0; m < prefix_count; ++m)
                    acc += next.at(m + static_cast<std::size_t>(a) * prefix_count, alpha0);
                map_out(a, alpha0) = acc;
            }
        }
    });
}

std::int64_t checked_power(std::int64_t base, int exp, std::int64_t limit) {
    std::int64_t value = 1;
    for (int i = 0; i < exp; ++i) {
        if (value > limit / base) return limit + 1;
        value *= base;
    }
    return value;
}

}  // namespace

Complex influence_weight(const std::vector<PathSegment>& path,
                         const std::vector<EtaCoefficients>& etas,
                         const std::vector<BathSpec>& baths) {
    if (path.empty()) throw ValidationError("influence_weight: path must not be empty");
    if (etas.size() != baths.size())
        throw ValidationError("influence_weight: one eta table per bath required");
    const int n = static_cast<int>(path.size()) - 1;
    for (const auto& eta : etas)
        if (eta.n_steps < n)
            throw ValidationError("influence_weight: eta table covers " +
                                  std::to_string(eta.n_steps) + " lags, path needs " +
                                  std::to_string(n));

    Complex exponent(0.0, 0.0);
    for (std::size_t b = 0; b < baths.size(); ++b) {
        const auto& coupling = baths[b].coupling_diag;
        const int d = static_cast<int>(coupling.size());
        for (const auto& seg : path)
            if (seg.fwd < 0 || seg.fwd >= d || seg.bwd < 0 || seg.bwd >= d)
                throw ValidationError("influence_weight: path state out of range");
        for (int k = 0; k <= n; ++k) {
            double dc = coupling[static_cast<std::size_t>(path[static_cast<std::size_t>(k)].fwd)] -
                        coupling[static_cast<std::size_t>(path[static_cast<std::size_t>(k)].bwd)];
            if (dc == 0.0) continue;
            Complex inner(0.0, 0.0);
            for (int kp = 0; kp <= k; ++kp) {
                Complex eta = etas[b].eta(k - kp);
                double cp = coupling[static_cast<std::size_t>(path[static_cast<std::size_t>(kp)].fwd)];
                double cm = coupling[static_cast<std::size_t>(path[static_cast<std::size_t>(kp)].bwd)];
                inner += eta * cp - std::conj(eta) * cm;
            }
            exponent += dc * inner;
        }
    }
    return std::exp(-exponent);
}

AugmentedTensor::AugmentedTensor(int dim, int mem_len) : dim_(dim), mem_len_(mem_len) {
    if (dim < 1 || mem_len < 1)
        throw ValidationError("AugmentedTensor: dim and mem_len must be >= 1");
    const std::size_t dd = static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim);
    tail_count_ = 1;
    for (int i = 0; i < mem_len; ++i) tail_count_ *= dd;
    data_.assign(tail_count_ * dd, Complex(0.0, 0.0));
}

Superoperator AugmentedTensor::uncontracted_map() const {
    const int dd = dim_ * dim_;
    const std::size_t prefix_count = tail_count_ / static_cast<std::size_t>(dd);
    CMatrix map = CMatrix::Zero(dd, dd);
    for (int alpha0 = 0; alpha0 < dd; ++alpha0)
        for (int a = 0; a < dd; ++a) {
            Complex acc(0.0, 0.0);
            for (std::size_t m = 0; m < prefix_count; ++m)
                acc += at(m + static_cast<std::size_t>(a) * prefix_count, alpha0);
            map(a, alpha0) = acc;
        }
    return Superoperator(std::move(map));
}

DynamicalMaps dynamical_maps(const SystemModel& model,
                             const std::vector<EtaCoefficients>& etas, int n_max, int mem_len,
                             const MapOptions& options) {
    model.validate();
    if (mem_len < 1) throw ValidationError("dynamical_maps: mem_len must be >= 1");
    if (n_max < mem_len)
        throw ValidationError("dynamical_maps: n_max must be >= mem_len");
    if (etas.size() != model.baths.size())
        throw ValidationError("dynamical_maps: one eta table per bath required");
    double dt = etas.empty() ? 0.0 : etas.front().dt;
    for (const auto& eta : etas) {
        if (eta.dt != dt) throw ValidationError("dynamical_maps: eta tables disagree on dt");
        if (eta.n_steps < mem_len)
            throw ValidationError("dynamical_maps: eta table shorter than mem_len");
    }
    if (model.baths.empty())
        throw ValidationError("dynamical_maps: model has no baths; use bare_map powers instead");

    const int d = model.dim();
    const std::int64_t dd = static_cast<std::int64_t>(d) * d;
    std::int64_t states = checked_power(dd, mem_len + 1, options.budget);
    if (states > options.budget) {
        std::ostringstream msg;
        msg << "dynamical_maps: (d^2)^(L+1) path states exceed budget " << options.budget
            << " for d = " << d << ", L = " << mem_len
            << "; reduce the memory length or raise --budget";
        throw BudgetError(msg.str());
    }

    int threads = options.threads == 0
                      ? static_cast<int>(std::thread::hardware_concurrency())
                      : options.threads;
    threads = std::max(1, threads);

    Tables tb = build_tables(model, etas, mem_len, dt);

    DynamicalMaps result;
    result.dt = dt;
    result.mem_len = mem_len;

    std::vector<CMatrix> window_maps(static_cast<std::size_t>(mem_len),
                                     CMatrix::Zero(dd, dd));
    const bool need_tensor = n_max > mem_len;
    std::optional<AugmentedTensor> tensor;

    if (options.window == MapOptions::WindowStrategy::IterativeTensor) {
        tensor = window_iterative(tb, mem_len, threads, window_maps);
    } else {
        if (need_tensor) tensor.emplace(d, mem_len);
        AugmentedTensor* fill = need_tensor ? &*tensor : nullptr;
        run_partitioned(tb.pair_dim, threads, [&](int lo, int hi) {
            for (int alpha0 = lo; alpha0 < hi; ++alpha0)
                walk_column(tb, alpha0, mem_len, mem_len, window_maps, fill);
        });
    }
    for (auto& m : window_maps) result.maps.emplace_back(std::move(m));

    if (need_tensor) {
        AugmentedTensor next(d, mem_len);
        for (int n = mem_len + 1; n <= n_max; ++n) {
            CMatrix map_n(dd, dd);
            contract_step(tb, mem_len, *tensor, next, map_n, threads);
            std::swap(*tensor, next);
            result.maps.emplace_back(std::move(map_n));
        }
    }

    for (int n = 1; n <= n_max; ++n) {
        double defect = result.maps[static_cast<std::size_t>(n - 1)].trace_defect();
        if (defect > options.trace_tol) {
            std::ostringstream msg;
            msg << "dynamical_maps: E(t_" << n << ") violates trace preservation by " << defect;
            throw NumericalError(msg.str());
        }
    }
    return result;
}

DynamicalMaps dynamical_maps(const SystemModel& model, double dt, int n_max, int mem_len,
                             const QuadratureSettings& quadrature, const MapOptions& options) {
    std::vector<EtaCoefficients> etas;
    etas.reserve(model.baths.size());
    for (const auto& bath : model.baths)
        etas.push_back(eta_coefficients(bath, dt, mem_len, quadrature));
    return dynamical_maps(model, etas, n_max, mem_len, options);
}

}  // namespace pild
