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

#include <doctest.h>

#include "core.hpp"
#include "oracles.hpp"

using namespace pild;

TEST_CASE("vec/unvec round trip is exact") {
    for (int d = 1; d <= 8; ++d) {
        CMatrix m = oracles::random_complex(d, 100u + static_cast<unsigned>(d));
        CMatrix back = unvec(vec(m), d);
        CHECK((m - back).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("vec stacks columns: (r, c) lands at c*d + r") {
    CMatrix m(2, 2);
    m << Complex(1, 0), Complex(2, 0), Complex(3, 0), Complex(4, 0);
    CVector v = vec(m);
    CHECK(v(0) == Complex(1, 0));  // (0,0)
    CHECK(v(1) == Complex(3, 0));  // (1,0)
    CHECK(v(2) == Complex(2, 0));  // (0,1)
    CHECK(v(3) == Complex(4, 0));  // (1,1)
}

TEST_CASE("bare_map with H0 = 0 is the identity") {
    for (int d : {2, 3, 5}) {
        Superoperator s = bare_map(CMatrix::Zero(d, d), 3.0);
        CHECK((s.matrix() - CMatrix::Identity(d * d, d * d)).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("bare_map on a diagonal H0 rotates the coherence only") {
    const double eps = 0.37, dt = 1.7;
    CMatrix h0 = CMatrix::Zero(2, 2);
    h0(0, 0) = eps;
    h0(1, 1) = -eps;
    CMatrix rho(2, 2);
    rho << Complex(0.6, 0), Complex(0.2, 0.1), Complex(0.2, -0.1), Complex(0.4, 0);
    CMatrix out = pild::apply(bare_map(h0, dt), rho);
    Complex phase = std::exp(Complex(0.0, -2.0 * eps * dt));
    CHECK(std::abs(out(0, 0) - rho(0, 0)) < 1e-14);
    CHECK(std::abs(out(1, 1) - rho(1, 1)) < 1e-14);
    CHECK(std::abs(out(0, 1) - phase * rho(0, 1)) < 1e-14);
}

TEST_CASE("bare_map preserves trace for 100 random states") {
    CMatrix h0 = oracles::random_hermitian(3, 7u);
    Superoperator s = bare_map(h0, 2.5);
    for (unsigned k = 0; k < 100; ++k) {
        CMatrix rho = oracles::random_density(3, 1000u + k);
        CHECK(std::abs(pild::apply(s, rho).trace() - rho.trace()) < 1e-12);
    }
}

TEST_CASE("bare_map keeps Hermitian unit-trace states Hermitian and unit-trace") {
    CMatrix h0 = oracles::random_hermitian(4, 11u);
    Superoperator s = bare_map(h0, 0.8);
    CMatrix rho = oracles::random_density(4, 12u);
    CMatrix out = pild::apply(s, rho);
    CHECK((out - out.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(out.trace() - Complex(1, 0)) < 1e-12);
}

TEST_CASE("bare_map rejects bad input") {
    CMatrix bad(2, 2);
    bad << Complex(0, 0), Complex(1, 0), Complex(0, 0), Complex(0, 0);
    CHECK_THROWS_AS(bare_map(bad, 1.0), ValidationError);
    CHECK_THROWS_AS(bare_map(CMatrix::Zero(2, 2), 0.0), ValidationError);
    CHECK_THROWS_AS(bare_map(CMatrix::Zero(2, 2), -1.0), ValidationError);
}

TEST_CASE("apply: identity, Rabi oscillation against the closed form, dim mismatch") {
    CMatrix rho = oracles::random_density(2, 21u);
    CHECK((pild::apply(Superoperator::identity(2), rho) - rho).cwiseAbs().maxCoeff() == 0.0);

    const double delta = 0.42;
    CMatrix h0(2, 2);
    h0 << Complex(0, 0), Complex(delta, 0), Complex(delta, 0), Complex(0, 0);
    CMatrix ground = CMatrix::Zero(2, 2);
    ground(0, 0) = 1.0;
    for (double t : {0.5, 2.0, 7.3}) {
        CMatrix u = oracles::two_level_unitary(0.0, delta, t);
        CMatrix expected = u * ground * u.adjoint();
        CMatrix got = pild::apply(bare_map(h0, t), ground);
        CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-13);
        CHECK(std::abs(got(0, 0).real() - std::cos(delta * t) * std::cos(delta * t)) < 1e-13);
    }

    CHECK_THROWS_AS(pild::apply(Superoperator::identity(3), rho), ValidationError);
}

TEST_CASE("from_left_right(A, B) acts as rho -> A rho B^T") {
    for (int d : {2, 3, 4}) {
        CMatrix a = oracles::random_complex(d, 31u + static_cast<unsigned>(d));
        CMatrix b = oracles::random_complex(d, 32u + static_cast<unsigned>(d));
        CMatrix rho = oracles::random_density(d, 33u + static_cast<unsigned>(d));
        CMatrix got = pild::apply(Superoperator::from_left_right(a, b), rho);
        CMatrix expected = a * rho * b.transpose();
        CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("compose applies the right operand first and is associative") {
    CMatrix h0 = oracles::random_hermitian(2, 41u);
    Superoperator e1 = bare_map(h0, 1.0);
    CHECK((compose(e1, Superoperator::identity(2)).matrix() - e1.matrix())
              .cwiseAbs()
              .maxCoeff() == 0.0);

    // semigroup: E0(dt) E0(dt) = E0(2 dt)
    Superoperator twice = compose(e1, e1);
    Superoperator direct = bare_map(h0, 2.0);
    CHECK((twice.matrix() - direct.matrix()).cwiseAbs().maxCoeff() < 1e-10);

    Superoperator s1{oracles::random_complex(4, 51u)};
    Superoperator s2{oracles::random_complex(4, 52u)};
    Superoperator s3{oracles::random_complex(4, 53u)};
    CMatrix left = compose(compose(s3, s2), s1).matrix();
    CMatrix right = compose(s3, compose(s2, s1)).matrix();
    CHECK((left - right).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("semigroup property for random split of the interval") {
    CMatrix h0 = oracles::random_hermitian(3, 61u);
    Superoperator a = bare_map(h0, 1.3);
    Superoperator b = bare_map(h0, 0.9);
    Superoperator c = bare_map(h0, 2.2);
    CHECK((compose(a, b).matrix() - c.matrix()).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("superoperator defect measures") {
    CMatrix h0 = oracles::random_hermitian(3, 71u);
    Superoperator u = bare_map(h0, 1.1);
    CHECK(u.trace_defect() < 1e-13);
    CHECK(u.hermiticity_defect() < 1e-13);
}

TEST_CASE("DensityMatrix validation") {
    CMatrix ok(2, 2);
    ok << Complex(0.5, 0), Complex(0.1, 0.2), Complex(0.1, -0.2), Complex(0.5, 0);
    CHECK_NOTHROW(DensityMatrix::validated(ok));

    CMatrix non_hermitian = ok;
    non_hermitian(0, 1) = Complex(0.3, 0.2);
    CHECK_THROWS_AS(DensityMatrix::validated(non_hermitian), ValidationError);

    CMatrix bad_trace = ok * 1.1;
    CHECK_THROWS_AS(DensityMatrix::validated(bad_trace), ValidationError);

    CMatrix indefinite(2, 2);
    indefinite << Complex(1.2, 0), Complex(0, 0), Complex(0, 0), Complex(-0.2, 0);
    CHECK_THROWS_AS(DensityMatrix::validated(indefinite), ValidationError);
}

TEST_CASE("commutator_map equals H0 rho - rho H0") {
    CMatrix h0 = oracles::random_hermitian(3, 81u);
    CMatrix rho = oracles::random_density(3, 82u);
    CMatrix got = pild::apply(commutator_map(h0), rho);
    CHECK((got - (h0 * rho - rho * h0)).cwiseAbs().maxCoeff() < 1e-13);
}
