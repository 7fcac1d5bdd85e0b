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

#include "config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace pild {

namespace {

using nlohmann::json;

// hbar / k_B in fs*K: divides temperature into inverse energy.
constexpr double kHbarOverKbFsK = 1.054571817e-34 / 1.380649e-23 * 1e15;

[[noreturn]] void fail(const std::string& msg) { throw ValidationError("config: " + msg); }

const json& need(const json& obj, const char* key, const char* where) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(std::string(where) + ": missing required key '" + key + "'");
    return *it;
}

double need_number(const json& obj, const char* key, const char* where) {
    const json& v = need(obj, key, where);
    if (!v.is_number()) fail(std::string(where) + ": '" + key + "' must be a number");
    return v.get<double>();
}

// Energies may be given either in cm^-1 ("<name>_cm") or directly in fs^-1
// ("<name>_fsinv"); exactly one spelling is accepted.
double energy_field(const json& obj, const std::string& name, const char* where) {
    bool has_cm = obj.contains(name + "_cm");
    bool has_fs = obj.contains(name + "_fsinv");
    if (has_cm == has_fs)
        fail(std::string(where) + ": give exactly one of '" + name + "_cm' or '" + name +
             "_fsinv'");
    if (has_cm) return wavenumber_to_angular_fs(obj[name + "_cm"].get<double>());
    return obj[name + "_fsinv"].get<double>();
}

double parse_beta(const json& obj, const char* where) {
    bool has_beta = obj.contains("beta_fs");
    bool has_temp = obj.contains("temperature_K");
    if (has_beta == has_temp)
        fail(std::string(where) + ": give exactly one of 'beta_fs' or 'temperature_K'");
    if (has_temp) {
        double t = obj["temperature_K"].get<double>();
        if (t <= 0.0) fail(std::string(where) + ": temperature_K must be positive");
        return kHbarOverKbFsK / t;
    }
    const json& b = obj["beta_fs"];
    if (b.is_string()) {
        if (b.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
        fail(std::string(where) + ": beta_fs must be a positive number or \"inf\"");
    }
    double beta = b.get<double>();
    if (beta <= 0.0) fail(std::string(where) + ": beta_fs must be positive");
    return beta;
}

BathSpec parse_bath(const json& obj, const std::string& base_dir, const char* where) {
    if (!obj.is_object()) fail(std::string(where) + ": bath must be an object");
    std::string kind = need(obj, "kind", where).get<std::string>();
    BathSpec spec;
    if (kind == "ohmic") {
        double xi = need_number(obj, "xi", where);
        spec.spectral_density = SpectralDensity::ohmic(xi, energy_field(obj, "omega_c", where));
    } else if (kind == "drude_lorentz") {
        spec.spectral_density = SpectralDensity::drude_lorentz(
            energy_field(obj, "lambda", where), energy_field(obj, "gamma_d", where));
    } else if (kind == "tabulated") {
        std::string file = need(obj, "file", where).get<std::string>();
        std::filesystem::path p(file);
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        spec.spectral_density = SpectralDensity::tabulated_from_file(p.string());
    } else if (kind == "tabulated_inline") {
        // the serialized form of a file-loaded table
        spec.spectral_density =
            SpectralDensity::tabulated(need(obj, "omega_fsinv", where).get<std::vector<double>>(),
                                       need(obj, "j_fsinv", where).get<std::vector<double>>());
    } else {
        fail(std::string(where) + ": unknown bath kind '" + kind + "'");
    }
    spec.beta = parse_beta(obj, where);
    return spec;
}

CMatrix parse_complex_matrix(const json& obj, const char* where) {
    const json& re = need(obj, "matrix_re", where);
    if (!re.is_array() || re.empty()) fail(std::string(where) + ": matrix_re must be a 2D array");
    const std::size_t d = re.size();
    CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    auto fill = [&](const json& rows, bool imag) {
        if (rows.size() != d) fail(std::string(where) + ": matrix must be square");
        for (std::size_t r = 0; r < d; ++r) {
            if (!rows[r].is_array() || rows[r].size() != d)
                fail(std::string(where) + ": matrix must be square");
            for (std::size_t c = 0; c < d; ++c) {
                double v = rows[r][c].get<double>();
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) +=
                    imag ? Complex(0.0, v) : Complex(v, 0.0);
            }
        }
    };
    fill(re, false);
    if (obj.contains("matrix_im")) fill(obj["matrix_im"], true);
    return m;
}

json bath_to_json(const BathSpec& spec) {
    json out;
    const auto& sd = spec.spectral_density;
    switch (sd.kind()) {
        case SpectralDensity::Kind::OhmicExpCutoff:
            out["kind"] = "ohmic";
            out["xi"] = sd.xi();
            out["omega_c_fsinv"] = sd.omega_c();
            break;
        case SpectralDensity::Kind::DrudeLorentz:
            out["kind"] = "drude_lorentz";
            out["lambda_fsinv"] = sd.lambda();
            out["gamma_d_fsinv"] = sd.gamma_d();
            break;
        case SpectralDensity::Kind::Tabulated:
            out["kind"] = "tabulated_inline";
            out["omega_fsinv"] = sd.grid();
            out["j_fsinv"] = sd.values();
            break;
    }
    if (std::isinf(spec.beta))
        out["beta_fs"] = "inf";
    else
        out["beta_fs"] = spec.beta;
    return out;
}

}  // namespace

void validate_observables(const std::vector<std::string>& observables, int dim) {
    if (observables.empty()) fail("outputs.observables must not be empty");
    for (const auto& name : observables) {
        if (name == "populations" || name == "rho") continue;
        if (name.rfind("coherence:", 0) == 0) {
            int i = 0, j = 0;
            char extra = 0;
            if (std::sscanf(name.c_str(), "coherence:%d,%d%c", &i, &j, &extra) != 2)
                fail("malformed coherence observable '" + name + "', expected coherence:i,j");
            if (i < 1 || i > dim || j < 1 || j > dim || i == j)
                fail("coherence indices out of range in '" + name + "' (1-based, distinct, <= " +
                     std::to_string(dim) + ")");
            continue;
        }
        fail("unknown observable '" + name + "'");
    }
}

RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(std::string("not valid JSON: ") + e.what());
    }
    if (!root.is_object()) fail("top level must be an object");
    std::string schema = need(root, "schema", "config").get<std::string>();
    if (schema != RunConfig::kSchema)
        fail("unsupported schema '" + schema + "', expected '" + RunConfig::kSchema + "'");

    RunConfig cfg;

    // model
    const json& model = need(root, "model", "config");
    std::string kind = need(model, "kind", "model").get<std::string>();
    bool is_frenkel = false;
    if (kind == "spin_boson") {
        BathSpec bath = parse_bath(need(model, "bath", "model"), base_dir, "model.bath");
        cfg.base_model = spin_boson(energy_field(model, "eps", "model"),
                                    energy_field(model, "delta", "model"), std::move(bath));
    } else if (kind == "frenkel") {
        is_frenkel = true;
        std::vector<double> energies;
        if (model.contains("site_energies_cm")) {
            for (double e : model["site_energies_cm"].get<std::vector<double>>())
                energies.push_back(wavenumber_to_angular_fs(e));
        } else if (model.contains("site_energies_fsinv")) {
            energies = model["site_energies_fsinv"].get<std::vector<double>>();
        } else {
            fail("model: missing site_energies_cm or site_energies_fsinv");
        }
        const int n = static_cast<int>(energies.size());

        const char* ckey = model.contains("couplings_cm") ? "couplings_cm"
                           : model.contains("couplings_fsinv") ? "couplings_fsinv"
                                                               : nullptr;
        if (!ckey) fail("model: missing couplings_cm or couplings_fsinv");
        const json& rows = model[ckey];
        if (!rows.is_array() || static_cast<int>(rows.size()) != n)
            fail("model: couplings must be an NxN array");
        Eigen::MatrixXd couplings(n, n);
        for (int r = 0; r < n; ++r) {
            if (!rows[static_cast<std::size_t>(r)].is_array() ||
                static_cast<int>(rows[static_cast<std::size_t>(r)].size()) != n)
                fail("model: couplings must be an NxN array");
            for (int c = 0; c < n; ++c) {
                double v = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]
                               .get<double>();
                couplings(r, c) = std::string(ckey) == "couplings_cm"
                                      ? wavenumber_to_angular_fs(v)
                                      : v;
            }
        }

        std::vector<BathSpec> baths;
        if (model.contains("baths")) {
            const json& arr = model["baths"];
            if (!arr.is_array() || static_cast<int>(arr.size()) != n)
                fail("model: 'baths' must list one bath per site");
            for (const auto& b : arr) baths.push_back(parse_bath(b, base_dir, "model.baths"));
        } else if (model.contains("bath")) {
            // one spec replicated across sites
            for (int s = 0; s < n; ++s)
                baths.push_back(parse_bath(model["bath"], base_dir, "model.bath"));
        } else {
            fail("model: missing 'baths' (per site) or 'bath' (shared)");
        }
        cfg.base_model = frenkel_with_ground(energies, couplings, std::move(baths), std::nullopt);
    } else {
        fail("unknown model kind '" + kind + "'");
    }
    const int d = cfg.base_model.dim();
    const int n_sites = is_frenkel ? d - 1 : d;

    // initial state
    const json& init = need(root, "initial_state", "config");
    if (init.contains("site")) {
        int site = init["site"].get<int>();
        if (site < 1 || site > d)
            fail("initial_state.site must be in [1, " + std::to_string(d) + "] (1-based)");
        cfg.initial_state = CMatrix::Zero(d, d);
        cfg.initial_state(site - 1, site - 1) = 1.0;
    } else if (init.contains("matrix_re")) {
        cfg.initial_state = parse_complex_matrix(init, "initial_state");
        if (cfg.initial_state.rows() != d) fail("initial_state matrix dimension mismatch");
    } else {
        fail("initial_state: need 'site' or 'matrix_re'/'matrix_im'");
    }

    // numerics
    const json& num = need(root, "numerics", "config");
    cfg.dt = need_number(num, "dt_fs", "numerics");
    cfg.n_map_steps = static_cast<int>(need_number(num, "n_map_steps", "numerics"));
    cfg.mem_len = static_cast<int>(need_number(num, "mem_len", "numerics"));
    cfg.propagate_to = need_number(num, "propagate_to_fs", "numerics");
    if (cfg.dt <= 0.0) fail("numerics.dt_fs must be positive");
    if (cfg.n_map_steps < 1) fail("numerics.n_map_steps must be >= 1");
    if (cfg.mem_len < 1 || cfg.mem_len > cfg.n_map_steps)
        fail("numerics.mem_len must satisfy 1 <= mem_len <= n_map_steps");
    if (cfg.propagate_to < cfg.n_map_steps * cfg.dt)
        fail("numerics.propagate_to_fs must cover the map window n_map_steps * dt_fs");
    cfg.ttm_tensor_count = num.contains("ttm_tensors")
                               ? num["ttm_tensors"].get<int>()
                               : cfg.n_map_steps;
    if (cfg.ttm_tensor_count < 1 || cfg.ttm_tensor_count > cfg.n_map_steps)
        fail("numerics.ttm_tensors must satisfy 1 <= ttm_tensors <= n_map_steps");
    if (num.contains("kernel_mode")) {
        std::string mode = num["kernel_mode"].get<std::string>();
        if (mode == "interaction_picture")
            cfg.kernel_mode = KernelMode::InteractionPicture;
        else if (mode == "short_time")
            cfg.kernel_mode = KernelMode::ShortTime;
        else
            fail("numerics.kernel_mode must be 'interaction_picture' or 'short_time'");
    }
    if (num.contains("quadrature")) {
        const json& q = num["quadrature"];
        if (q.contains("rel_tol")) cfg.quadrature.rel_tol = q["rel_tol"].get<double>();
        if (q.contains("max_depth")) cfg.quadrature.max_depth = q["max_depth"].get<unsigned>();
        if (q.contains("cutoff_scale"))
            cfg.quadrature.cutoff_scale = q["cutoff_scale"].get<double>();
        if (q.contains("fail_rel")) cfg.quadrature.fail_rel = q["fail_rel"].get<double>();
    }
    if (num.contains("threads")) cfg.threads = num["threads"].get<int>();
    if (num.contains("budget")) cfg.budget = num["budget"].get<std::int64_t>();

    // jump sets
    const json& sets = need(root, "jump_sets", "config");
    if (!sets.is_array() || sets.empty()) fail("jump_sets must be a non-empty array");
    for (const auto& set : sets) {
        RunConfig::JumpSet js;
        js.label = need(set, "label", "jump_sets").get<std::string>();
        const json& jumps = need(set, "jumps", "jump_sets");
        if (!jumps.is_array()) fail("jump_sets[].jumps must be an array");
        for (const auto& j : jumps) {
            JumpOperator op;
            if (j.contains("site")) {
                if (!is_frenkel)
                    fail("site extraction jumps need a frenkel model; use an explicit matrix");
                int site = j["site"].get<int>();
                double tau_ps = need_number(j, "timescale_ps", "jump");
                if (site < 1 || site > n_sites)
                    fail("jump site must be in [1, " + std::to_string(n_sites) + "]");
                if (tau_ps <= 0.0) fail("jump timescale_ps must be positive");
                double gamma = std::sqrt(1.0 / ps_to_fs(tau_ps));
                op.matrix = CMatrix::Zero(d, d);
                op.matrix(d - 1, site - 1) = gamma;  // gamma |g><site|
                op.label = "extract site " + std::to_string(site);
            } else if (j.contains("matrix_re")) {
                op.matrix = parse_complex_matrix(j, "jump");
                if (op.matrix.rows() != d) fail("jump matrix dimension mismatch");
                op.label = j.contains("label") ? j["label"].get<std::string>() : "custom";
            } else {
                fail("jump: need 'site'+'timescale_ps' or 'matrix_re'");
            }
            op.validate(d);
            js.jumps.push_back(std::move(op));
        }
        for (const auto& prev : cfg.jump_sets)
            if (prev.label == js.label) fail("duplicate jump set label '" + js.label + "'");
        cfg.jump_sets.push_back(std::move(js));
    }

    // outputs
    const json& outputs = need(root, "outputs", "config");
    cfg.out_dir = need(outputs, "directory", "outputs").get<std::string>();
    if (cfg.out_dir.empty()) fail("outputs.directory must not be empty");
    {
        std::filesystem::path p(cfg.out_dir);
        if (p.is_relative()) cfg.out_dir = (std::filesystem::path(base_dir) / p).string();
    }
    if (outputs.contains("observables"))
        cfg.observables = outputs["observables"].get<std::vector<std::string>>();
    else
        cfg.observables = {"populations"};
    validate_observables(cfg.observables, d);

    cfg.base_model.validate();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_run_config(buf.str(),
                            std::filesystem::path(path).parent_path().string().empty()
                                ? "."
                                : std::filesystem::path(path).parent_path().string());
}

std::string serialize_run_config(const RunConfig& cfg) {
    json root;
    root["schema"] = RunConfig::kSchema;

    const int d = cfg.base_model.dim();
    json model;
    const bool is_frenkel = !cfg.base_model.basis_labels.empty() &&
                            cfg.base_model.basis_labels.back() == "g";
    if (is_frenkel) {
        model["kind"] = "frenkel";
        const int n = d - 1;
        std::vector<double> energies;
        for (int j = 0; j < n; ++j) energies.push_back(cfg.base_model.h0(j, j).real());
        model["site_energies_fsinv"] = energies;
        json rows = json::array();
        for (int r = 0; r < n; ++r) {
            json row = json::array();
            for (int c = 0; c < n; ++c)
                row.push_back(r == c ? 0.0 : cfg.base_model.h0(r, c).real());
            rows.push_back(row);
        }
        model["couplings_fsinv"] = rows;
        json baths = json::array();
        for (const auto& b : cfg.base_model.baths) baths.push_back(bath_to_json(b));
        model["baths"] = baths;
    } else {
        model["kind"] = "spin_boson";
        model["eps_fsinv"] = cfg.base_model.h0(0, 0).real();
        model["delta_fsinv"] = cfg.base_model.h0(0, 1).real();
        model["bath"] = bath_to_json(cfg.base_model.baths.front());
    }
    root["model"] = model;

    json init;
    {
        json re = json::array(), im = json::array();
        for (int r = 0; r < d; ++r) {
            json re_row = json::array(), im_row = json::array();
            for (int c = 0; c < d; ++c) {
                re_row.push_back(cfg.initial_state(r, c).real());
                im_row.push_back(cfg.initial_state(r, c).imag());
            }
            re.push_back(re_row);
            im.push_back(im_row);
        }
        init["matrix_re"] = re;
        init["matrix_im"] = im;
    }
    root["initial_state"] = init;

    json num;
    num["dt_fs"] = cfg.dt;
    num["n_map_steps"] = cfg.n_map_steps;
    num["mem_len"] = cfg.mem_len;
    num["propagate_to_fs"] = cfg.propagate_to;
    num["ttm_tensors"] = cfg.ttm_tensor_count;
    num["kernel_mode"] = cfg.kernel_mode == KernelMode::InteractionPicture
                             ? "interaction_picture"
                             : "short_time";
    num["quadrature"] = {{"rel_tol", cfg.quadrature.rel_tol},
                         {"max_depth", cfg.quadrature.max_depth},
                         {"cutoff_scale", cfg.quadrature.cutoff_scale},
                         {"fail_rel", cfg.quadrature.fail_rel}};
    num["threads"] = cfg.threads;
    num["budget"] = cfg.budget;
    root["numerics"] = num;

    json sets = json::array();
    for (const auto& js : cfg.jump_sets) {
        json set;
        set["label"] = js.label;
        json jumps = json::array();
        for (const auto& op : js.jumps) {
            json j;
            json re = json::array(), im = json::array();
            for (int r = 0; r < d; ++r) {
                json re_row = json::array(), im_row = json::array();
                for (int c = 0; c < d; ++c) {
                    re_row.push_back(op.matrix(r, c).real());
                    im_row.push_back(op.matrix(r, c).imag());
                }
                re.push_back(re_row);
                im.push_back(im_row);
            }
            j["matrix_re"] = re;
            j["matrix_im"] = im;
            j["label"] = op.label;
            jumps.push_back(j);
        }
        set["jumps"] = jumps;
        sets.push_back(set);
    }
    root["jump_sets"] = sets;

    root["outputs"] = {{"directory", cfg.out_dir}, {"observables", cfg.observables}};
    return root.dump(2) + "\n";
}

}  // namespace pild
