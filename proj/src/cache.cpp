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

#include "cache.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace pild {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json matrix_to_json(const CMatrix& m) {
    json re = json::array(), im = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json re_row = json::array(), im_row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            re_row.push_back(m(r, c).real());
            im_row.push_back(m(r, c).imag());
        }
        re.push_back(re_row);
        im.push_back(im_row);
    }
    return json{{"re", re}, {"im", im}};
}

CMatrix matrix_from_json(const json& obj) {
    const json& re = obj.at("re");
    const json& im = obj.at("im");
    const Eigen::Index rows = static_cast<Eigen::Index>(re.size());
    if (rows == 0) throw ValidationError("cache: empty matrix");
    const Eigen::Index cols = static_cast<Eigen::Index>(re.at(0).size());
    CMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = Complex(re.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>(),
                              im.at(static_cast<std::size_t>(r)).at(static_cast<std::size_t>(c)).get<double>());
    return m;
}

void write_file(const std::string& path, const std::string& text) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cache: cannot write " + path);
    out << text;
}

std::optional<json> read_verified(const std::string& path, const CacheKey& key,
                                  const char* schema, const Logger& logger) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;  // plain miss
    json root;
    try {
        root = json::parse(in);
        if (root.at("schema").get<std::string>() != schema)
            throw std::runtime_error("schema mismatch");
        if (root.at("key").get<std::string>() != key.canonical)
            throw std::runtime_error("content key mismatch");
    } catch (const std::exception& e) {
        log_to(logger, std::string("[cache] warning: ") + path + " unusable (" + e.what() +
                           "), recomputing");
        return std::nullopt;
    }
    return root;
}

}  // namespace

std::string CacheKey::hex() const {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

CacheKey maps_cache_key(const RunConfig& config) {
    std::string canonical = "{\"stage\":\"maps\",\"model\":" + config.base_model.physics_json();
    canonical += ",\"dt\":" + fmt_double(config.dt);
    canonical += ",\"mem_len\":" + std::to_string(config.mem_len);
    canonical += ",\"n_map_steps\":" + std::to_string(config.n_map_steps);
    canonical += ",\"quadrature\":" + quadrature_settings_json(config.quadrature) + "}";
    CacheKey key;
    key.hash = fnv1a64(canonical);
    key.canonical = std::move(canonical);
    return key;
}

CacheKey ttm_cache_key(const RunConfig& config) {
    CacheKey maps_key = maps_cache_key(config);
    std::string canonical = "{\"stage\":\"ttm\",\"maps\":" + maps_key.canonical;
    canonical += ",\"tensors\":" + std::to_string(config.ttm_tensor_count);
    canonical += ",\"kernel_mode\":\"";
    canonical += config.kernel_mode == KernelMode::InteractionPicture ? "interaction_picture"
                                                                      : "short_time";
    canonical += "\"}";
    CacheKey key;
    key.hash = fnv1a64(canonical);
    key.canonical = std::move(canonical);
    return key;
}

std::string maps_cache_path(const std::string& cache_dir, const CacheKey& key) {
    return (std::filesystem::path(cache_dir) / ("maps_" + key.hex() + ".json")).string();
}

std::string ttm_cache_path(const std::string& cache_dir, const CacheKey& key) {
    return (std::filesystem::path(cache_dir) / ("ttm_" + key.hex() + ".json")).string();
}

void save_maps_cache(const std::string& path, const DynamicalMaps& maps, const CacheKey& key) {
    json root;
    root["schema"] = "pild-maps/1";
    root["key"] = key.canonical;
    root["key_hash"] = key.hex();
    root["dt_fs"] = maps.dt;
    root["mem_len"] = maps.mem_len;
    root["dim"] = maps.dim();
    root["count"] = maps.count();
    json arr = json::array();
    for (const auto& m : maps.maps) arr.push_back(matrix_to_json(m.matrix()));
    root["maps"] = arr;
    write_file(path, root.dump() + "\n");
}

std::optional<DynamicalMaps> load_maps_cache(const std::string& path, const CacheKey& key,
                                             const Logger& logger) {
    auto root = read_verified(path, key, "pild-maps/1", logger);
    if (!root) return std::nullopt;
    try {
        DynamicalMaps maps;
        maps.dt = root->at("dt_fs").get<double>();
        maps.mem_len = root->at("mem_len").get<int>();
        const int dim = root->at("dim").get<int>();
        for (const auto& m : root->at("maps")) {
            Superoperator s{matrix_from_json(m)};
            if (s.dim() != dim) throw std::runtime_error("map dimension mismatch");
            maps.maps.push_back(std::move(s));
        }
        if (maps.count() != root->at("count").get<int>())
            throw std::runtime_error("map count mismatch");
        return maps;
    } catch (const std::exception& e) {
        log_to(logger, std::string("[cache] warning: ") + path + " unusable (" + e.what() +
                           "), recomputing");
        return std::nullopt;
    }
}

void save_ttm_cache(const std::string& path, const TtmStage& stage, const CacheKey& key) {
    json root;
    root["schema"] = "pild-ttm/1";
    root["key"] = key.canonical;
    root["key_hash"] = key.hex();
    root["dt_fs"] = stage.tensors.dt;
    root["dim"] = stage.tensors.dim();
    root["count"] = stage.tensors.count();
    root["kernel_mode"] = stage.mode == KernelMode::InteractionPicture ? "interaction_picture"
                                                                       : "short_time";
    json tens = json::array(), kerns = json::array();
    for (const auto& t : stage.tensors.tensors) tens.push_back(matrix_to_json(t.matrix()));
    for (const auto& k : stage.kernel.kernels) kerns.push_back(matrix_to_json(k.matrix()));
    root["tensors"] = tens;
    root["kernels"] = kerns;
    write_file(path, root.dump() + "\n");
}

std::optional<TtmStage> load_ttm_cache(const std::string& path, const CacheKey& key,
                                       const Logger& logger) {
    auto root = read_verified(path, key, "pild-ttm/1", logger);
    if (!root) return std::nullopt;
    try {
        TtmStage stage;
        double dt = root->at("dt_fs").get<double>();
        stage.tensors.dt = dt;
        stage.kernel.dt = dt;
        stage.mode = root->at("kernel_mode").get<std::string>() == "short_time"
                         ? KernelMode::ShortTime
                         : KernelMode::InteractionPicture;
        for (const auto& t : root->at("tensors"))
            stage.tensors.tensors.emplace_back(matrix_from_json(t));
        for (const auto& k : root->at("kernels"))
            stage.kernel.kernels.emplace_back(matrix_from_json(k));
        if (stage.tensors.count() != root->at("count").get<int>() ||
            stage.kernel.count() != stage.tensors.count())
            throw std::runtime_error("tensor count mismatch");
        return stage;
    } catch (const std::exception& e) {
        log_to(logger, std::string("[cache] warning: ") + path + " unusable (" + e.what() +
                           "), recomputing");
        return std::nullopt;
    }
}

}  // namespace pild
