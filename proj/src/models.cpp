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

#include "models.hpp"

#include <cmath>
#include <cstdio>

namespace pild {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void SystemModel::validate() const {
    require_hermitian(h0, 1e-12, "SystemModel.h0");
    for (const auto& bath : baths) bath.validate(dim());
    for (const auto& jump : jumps) jump.validate(dim());
    if (!basis_labels.empty() && static_cast<int>(basis_labels.size()) != dim())
        throw ValidationError("SystemModel: basis_labels length does not match dimension");
}

std::string SystemModel::physics_json() const {
    std::string out = "{\"h0\":[";
    for (int r = 0; r < dim(); ++r)
        for (int c = 0; c < dim(); ++c) {
            if (r || c) out += ",";
            out += fmt_double(h0(r, c).real()) + "," + fmt_double(h0(r, c).imag());
        }
    out += "],\"baths\":[";
    for (std::size_t b = 0; b < baths.size(); ++b) {
        if (b) out += ",";
        out += "{\"j\":" + spectral_density_json(baths[b].spectral_density);
        out += ",\"beta\":" + (std::isinf(baths[b].beta) ? std::string("\"inf\"")
                                                         : fmt_double(baths[b].beta));
        out += ",\"coupling\":[";
        for (std::size_t k = 0; k < baths[b].coupling_diag.size(); ++k)
            out += (k ? "," : "") + fmt_double(baths[b].coupling_diag[k]);
        out += "]}";
    }
    return out + "]}";
}

SystemModel spin_boson(double eps, double delta, BathSpec bath) {
    SystemModel model;
    model.h0 = CMatrix::Zero(2, 2);
    model.h0(0, 0) = eps;
    model.h0(1, 1) = -eps;
    model.h0(0, 1) = delta;
    model.h0(1, 0) = delta;
    bath.coupling_diag = {1.0, -1.0};
    model.baths.push_back(std::move(bath));
    model.basis_labels = {"1", "2"};
    model.validate();
    return model;
}

SystemModel frenkel_with_ground(const std::vector<double>& site_energies,
                                const Eigen::MatrixXd& couplings,
                                std::vector<BathSpec> site_baths,
                                std::optional<Extraction> extraction) {
    const int n = static_cast<int>(site_energies.size());
    if (n < 1) throw ValidationError("frenkel_with_ground: need at least one site");
    if (couplings.rows() != n || couplings.cols() != n)
        throw ValidationError("frenkel_with_ground: couplings must be " + std::to_string(n) +
                              "x" + std::to_string(n));
    for (int j = 0; j < n; ++j) {
        if (couplings(j, j) != 0.0)
            throw ValidationError("frenkel_with_ground: couplings must have zero diagonal");
        for (int k = j + 1; k < n; ++k)
            if (couplings(j, k) != couplings(k, j))
                throw ValidationError("frenkel_with_ground: couplings must be symmetric");
    }
    if (static_cast<int>(site_baths.size()) != n)
        throw ValidationError("frenkel_with_ground: expected one bath per site, got " +
                              std::to_string(site_baths.size()));

    const int d = n + 1;  // |g> appended last, energy pinned at 0
    SystemModel model;
    model.h0 = CMatrix::Zero(d, d);
    for (int j = 0; j < n; ++j) {
        model.h0(j, j) = site_energies[static_cast<std::size_t>(j)];
        for (int k = 0; k < n; ++k)
            if (j != k) model.h0(j, k) = couplings(j, k);
    }

    for (int k = 0; k < n; ++k) {
        BathSpec bath = std::move(site_baths[static_cast<std::size_t>(k)]);
        bath.coupling_diag.assign(static_cast<std::size_t>(d), 0.0);
        bath.coupling_diag[static_cast<std::size_t>(k)] = 1.0;
        model.baths.push_back(std::move(bath));
    }

    for (int j = 0; j < n; ++j) model.basis_labels.push_back(std::to_string(j + 1));
    model.basis_labels.push_back("g");

    if (extraction) {
        if (extraction->site < 0 || extraction->site >= n)
            throw ValidationError("frenkel_with_ground: extraction site out of range");
        if (extraction->timescale_ps <= 0.0)
            throw ValidationError("frenkel_with_ground: extraction timescale must be positive");
        double gamma = std::sqrt(1.0 / ps_to_fs(extraction->timescale_ps));
        JumpOperator jump;
        jump.matrix = CMatrix::Zero(d, d);
        jump.matrix(n, extraction->site) = gamma;
        jump.label = "extract site " + std::to_string(extraction->site + 1);
        model.jumps.push_back(std::move(jump));
    }

    model.validate();
    return model;
}

}  // namespace pild
