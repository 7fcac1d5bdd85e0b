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

#include "core.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace pild {

CVector vec(const CMatrix& m) {
    return Eigen::Map<const CVector>(m.data(), m.size());
}

CMatrix unvec(const CVector& v, int dim) {
    if (v.size() != static_cast<Eigen::Index>(dim) * dim)
        throw ValidationError("unvec: vector length does not match dim^2");
    return Eigen::Map<const CMatrix>(v.data(), dim, dim);
}

void require_hermitian(const CMatrix& m, double tol, const std::string& who) {
    if (m.rows() != m.cols())
        throw ValidationError(who + ": matrix is not square");
    double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (dev > tol)
        throw ValidationError(who + ": matrix is not Hermitian (max deviation " +
                              std::to_string(dev) + ")");
}

DensityMatrix DensityMatrix::validated(const CMatrix& data) {
    require_hermitian(data, 1e-12, "DensityMatrix");
    double trace_dev = std::abs(data.trace() - Complex(1.0, 0.0));
    if (trace_dev > 1e-10)
        throw ValidationError("DensityMatrix: trace deviates from 1 by " +
                              std::to_string(trace_dev));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(data, Eigen::EigenvaluesOnly);
    double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -1e-10)
        throw ValidationError("DensityMatrix: not positive semidefinite (min eigenvalue " +
                              std::to_string(min_eig) + ")");
    return DensityMatrix(data);
}

DensityMatrix DensityMatrix::unchecked(const CMatrix& data) {
    if (data.rows() != data.cols())
        throw ValidationError("DensityMatrix: matrix is not square");
    return DensityMatrix(data);
}

std::vector<double> DensityMatrix::populations() const {
    std::vector<double> p(static_cast<std::size_t>(dim()));
    for (int i = 0; i < dim(); ++i) p[static_cast<std::size_t>(i)] = data_(i, i).real();
    return p;
}

double DensityMatrix::trace_deviation() const {
    return std::abs(data_.trace() - Complex(1.0, 0.0));
}

Superoperator::Superoperator(CMatrix mat) : mat_(std::move(mat)) {
    if (mat_.rows() != mat_.cols())
        throw ValidationError("Superoperator: matrix is not square");
    int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(mat_.rows()))));
    if (static_cast<Eigen::Index>(d) * d != mat_.rows())
        throw ValidationError("Superoperator: side length is not a perfect square");
    dim_ = d;
}

Superoperator Superoperator::identity(int dim) {
    return Superoperator(CMatrix::Identity(static_cast<Eigen::Index>(dim) * dim,
                                           static_cast<Eigen::Index>(dim) * dim));
}

Superoperator Superoperator::zero(int dim) {
    return Superoperator(CMatrix::Zero(static_cast<Eigen::Index>(dim) * dim,
                                       static_cast<Eigen::Index>(dim) * dim));
}

Superoperator Superoperator::from_left_right(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw ValidationError("from_left_right: operands must be square and equal-sized");
    const int d = static_cast<int>(a.rows());
    CMatrix s(static_cast<Eigen::Index>(d) * d, static_cast<Eigen::Index>(d) * d);
    // kron(b, a): block (i, j) is b(i, j) * a.
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            s.block(static_cast<Eigen::Index>(i) * d, static_cast<Eigen::Index>(j) * d, d, d) =
                b(i, j) * a;
    return Superoperator(std::move(s));
}

double Superoperator::trace_defect() const {
    const int d = dim_;
    Eigen::RowVectorXcd tr_row = Eigen::RowVectorXcd::Zero(static_cast<Eigen::Index>(d) * d);
    for (int s = 0; s < d; ++s) tr_row(static_cast<Eigen::Index>(s) * d + s) = 1.0;
    Eigen::RowVectorXcd defect = tr_row * mat_ - tr_row;
    return defect.cwiseAbs().maxCoeff();
}

double Superoperator::hermiticity_defect() const {
    // Hermitian in -> Hermitian out iff S[swap(i), swap(j)] == conj(S[i, j]),
    // where swap exchanges the forward/backward indices: c*d + r -> r*d + c.
    const int d = dim_;
    double worst = 0.0;
    auto swp = [d](Eigen::Index k) { return (k % d) * d + k / d; };
    for (Eigen::Index i = 0; i < mat_.rows(); ++i)
        for (Eigen::Index j = 0; j < mat_.cols(); ++j)
            worst = std::max(worst, std::abs(mat_(swp(i), swp(j)) - std::conj(mat_(i, j))));
    return worst;
}

Superoperator operator+(const Superoperator& a, const Superoperator& b) {
    if (a.dim() != b.dim()) throw ValidationError("Superoperator +: dimension mismatch");
    return Superoperator(a.mat_ + b.mat_);
}

Superoperator operator-(const Superoperator& a, const Superoperator& b) {
    if (a.dim() != b.dim()) throw ValidationError("Superoperator -: dimension mismatch");
    return Superoperator(a.mat_ - b.mat_);
}

Superoperator Superoperator::operator*(Complex scale) const {
    return Superoperator(mat_ * scale);
}

Superoperator compose(const Superoperator& s2, const Superoperator& s1) {
    if (s2.dim() != s1.dim())
        throw ValidationError("compose: dimension mismatch");
    return Superoperator(s2.matrix() * s1.matrix());
}

CMatrix apply(const Superoperator& s, const CMatrix& rho) {
    if (rho.rows() != s.dim() || rho.cols() != s.dim())
        throw ValidationError("apply: state dimension does not match superoperator");
    return unvec(s.matrix() * vec(rho), s.dim());
}

CMatrix apply(const Superoperator& s, const DensityMatrix& rho) {
    return apply(s, rho.data());
}

Superoperator bare_map(const CMatrix& h0, double dt) {
    require_hermitian(h0, 1e-10, "bare_map");
    if (dt <= 0.0) throw ValidationError("bare_map: dt must be positive");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h0);
    CVector phases(h0.rows());
    for (Eigen::Index k = 0; k < h0.rows(); ++k)
        phases(k) = std::exp(Complex(0.0, -es.eigenvalues()(k) * dt));
    CMatrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    // rho -> U rho U^dagger = U rho (conj U)^T
    return Superoperator::from_left_right(u, u.conjugate());
}

Superoperator commutator_map(const CMatrix& h0) {
    require_hermitian(h0, 1e-10, "commutator_map");
    const int d = static_cast<int>(h0.rows());
    CMatrix eye = CMatrix::Identity(d, d);
    return Superoperator::from_left_right(h0, eye) -
           Superoperator::from_left_right(eye, h0.transpose());
}

double Trajectory::max_trace_drift() const {
    double worst = 0.0;
    for (const auto& s : states) worst = std::max(worst, s.trace_deviation());
    return worst;
}

}  // namespace pild
