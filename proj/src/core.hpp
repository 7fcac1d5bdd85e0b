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

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "common.hpp"

namespace pild {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Vectorization convention used everywhere: vec(rho) stacks columns, so the
// (r, c) entry lands at index c*d + r. Eigen stores column-major, which makes
// vec/unvec a plain reshape.
CVector vec(const CMatrix& m);
CMatrix unvec(const CVector& v, int dim);

// System state. Hermiticity, unit trace and positivity are enforced by the
// validated() factory; propagator output is stored through unchecked() because
// finite-step schemes drift slightly and callers monitor that drift instead.
class DensityMatrix {
  public:
    static DensityMatrix validated(const CMatrix& data);
    static DensityMatrix unchecked(const CMatrix& data);

    int dim() const { return static_cast<int>(data_.rows()); }
    const CMatrix& data() const { return data_; }

    std::vector<double> populations() const;
    double trace_deviation() const;  // |Tr rho - 1|

  private:
    explicit DensityMatrix(CMatrix data) : data_(std::move(data)) {}
    CMatrix data_;
};

// Linear map on vectorized density matrices, stored dense (d^2 x d^2).
class Superoperator {
  public:
    explicit Superoperator(CMatrix mat);
    static Superoperator identity(int dim);
    static Superoperator zero(int dim);
    // The map rho -> A rho B^T; with column-major vec this is kron(B, A).
    static Superoperator from_left_right(const CMatrix& a, const CMatrix& b);

    int dim() const { return dim_; }
    const CMatrix& matrix() const { return mat_; }
    CMatrix& matrix() { return mat_; }

    // Max deviation of Tr(S rho) from Tr(rho) over the whole input space,
    // i.e. max-norm of tr_row * S - tr_row.
    double trace_defect() const;
    // Max violation of "Hermitian in -> Hermitian out".
    double hermiticity_defect() const;

    friend Superoperator operator+(const Superoperator& a, const Superoperator& b);
    friend Superoperator operator-(const Superoperator& a, const Superoperator& b);
    Superoperator operator*(Complex scale) const;

  private:
    int dim_;
    CMatrix mat_;
};

// S2 * S1: apply S1 first.
Superoperator compose(const Superoperator& s2, const Superoperator& s1);

// unvec(S vec(rho)); no renormalization, callers check trace drift.
CMatrix apply(const Superoperator& s, const DensityMatrix& rho);
CMatrix apply(const Superoperator& s, const CMatrix& rho);

// Bare forward-backward propagator rho -> exp(-i H0 dt) rho exp(+i H0 dt),
// built from the Hermitian eigendecomposition of H0 so it is unitary to
// rounding. H0 in fs^-1, dt in fs, hbar = 1.
Superoperator bare_map(const CMatrix& h0, double dt);

// Commutator superoperator rho -> H0 rho - rho H0.
Superoperator commutator_map(const CMatrix& h0);

void require_hermitian(const CMatrix& m, double tol, const std::string& who);

// Time-indexed states produced by one propagation.
struct Trajectory {
    double dt = 0.0;
    std::vector<DensityMatrix> states;
    std::string label;

    int dim() const { return states.empty() ? 0 : states.front().dim(); }
    int steps() const { return static_cast<int>(states.size()) - 1; }
    double max_trace_drift() const;
};

}  // namespace pild
