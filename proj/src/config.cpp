// Copyright 2026 The qbvh Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qbvh/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

namespace qbvh {

namespace {

constexpr const char* kLabelGrammar = "expected BVH{2|4|8}-{SR|RS}-{C|U}";

} // namespace

RunConfig parse_config(const std::string& label) {
    const auto fail = [&](const std::string& what) {
        throw std::invalid_argument("bad configuration \"" + label + "\": " + what + "; " +
                                    kLabelGrammar);
    };
    if (label.size() != 9 || label.rfind("BVH", 0) != 0 || label[4] != '-' || label[7] != '-')
        fail("malformed label");
    RunConfig config;
    switch (label[3]) {
        case '2': config.width = 2; break;
        case '4': config.width = 4; break;
        case '8': config.width = 8; break;
        default: fail("invalid width");
    }
    const std::string mode = label.substr(5, 2);
    if (mode == "SR")
        config.stream = false;
    else if (mode == "RS")
        config.stream = true;
    else
        fail("invalid traversal mode");
    switch (label[8]) {
        case 'C': config.compressed = true; break;
        case 'U': config.compressed = false; break;
        default: fail("invalid compression flag");
    }
    return config;
}

std::string config_label(const RunConfig& config) {
    return "BVH" + std::to_string(config.width) + "-" + (config.stream ? "RS" : "SR") + "-" +
           (config.compressed ? "C" : "U");
}

std::vector<RunConfig> all_configs() {
    std::vector<RunConfig> configs;
    for (int width : {2, 4, 8})
        for (bool stream : {false, true})
            for (bool compressed : {true, false})
                configs.push_back({width, stream, compressed});
    return configs;
}

SceneSpec make_scene(const std::string& selector, int res_x, int res_y) {
    SceneSpec spec;
    spec.name = selector;
    spec.camera.width = res_x;
    spec.camera.height = res_y;

    auto count_arg = [&](const std::string& kind) {
        const std::string tail = selector.substr(kind.size() + 1);
        try {
            size_t consumed = 0;
            const int n = std::stoi(tail, &consumed);
            if (consumed != tail.size()) throw std::invalid_argument(tail);
            return n;
        } catch (const std::exception&) {
            throw std::invalid_argument("bad scene \"" + selector + "\": expected " + kind +
                                        ":<count>");
        }
    };

    if (selector == "cornell") {
        spec.mesh = make_cornell();
        spec.camera.position = {0.f, 1.f, 0.92f};
        spec.camera.look_at = {0.f, 0.95f, -1.f};
        spec.camera.vfov_deg = 68.f;
    } else if (selector.rfind("sphere:", 0) == 0) {
        spec.mesh = make_sphere(count_arg("sphere"));
        spec.camera.position = {0.f, 0.6f, 2.8f};
        spec.camera.look_at = {0.f, 0.f, 0.f};
        spec.camera.vfov_deg = 40.f;
    } else if (selector.rfind("grid:", 0) == 0) {
        spec.mesh = make_grid(count_arg("grid"));
        spec.camera.position = {2.4f, 1.7f, 2.9f};
        spec.camera.look_at = {0.f, 0.f, 0.f};
        spec.camera.vfov_deg = 42.f;
    } else if (selector.size() > 4 && selector.substr(selector.size() - 4) == ".obj") {
        spec.mesh = load_obj(selector);
        if (spec.mesh.faces.empty())
            throw std::runtime_error("scene \"" + selector + "\" has no faces");
        const Aabb b = spec.mesh.bounds();
        const Vec3f center = b.centroid();
        const float radius = 0.5f * length(b.extent());
        const Vec3f dir = normalize(Vec3f{0.55f, 0.4f, 0.73f});
        spec.camera.position = center + dir * (2.4f * radius);
        spec.camera.look_at = center;
        spec.camera.vfov_deg = 45.f;
    } else {
        throw std::invalid_argument("bad scene \"" + selector +
                                    "\": expected cornell, sphere:N, grid:N or a .obj path");
    }
    return spec;
}

namespace {

void write_text(const std::string& dir, const std::string& name, const std::string& text) {
    const std::filesystem::path path = std::filesystem::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << text;
}

} // namespace

MatrixResult run_matrix(const MatrixOptions& options) {
    if (options.configs.empty()) throw std::invalid_argument("run_matrix: no configurations");

    MatrixResult result;
    if (!options.out_dir.empty()) std::filesystem::create_directories(options.out_dir);
    const std::vector<Triangle> triangles = options.mesh.to_triangles();
    const BinaryBvh binary = build_binary_sah(triangles);

    // Each tree variant is built once and shared across configurations.
    std::map<int, WideTree> wide_trees;
    std::map<int, CompressedTree> comp_trees;
    auto wide_for = [&](int width) -> const WideTree& {
        auto it = wide_trees.find(width);
        if (it == wide_trees.end())
            it = wide_trees.emplace(width, collapse_to_width(binary, triangles, width)).first;
        return it->second;
    };
    auto comp_for = [&](int width) -> const CompressedTree& {
        auto it = comp_trees.find(width);
        if (it == comp_trees.end())
            it = comp_trees.emplace(width, compress(wide_for(width), options.compress_params))
                     .first;
        return it->second;
    };

    Image reference;
    if (options.diff_reference) {
        TraceTarget ref_target;
        ref_target.wide = &wide_for(options.configs.front().width);
        std::vector<TrafficStats> scratch;
        reference = path_trace(options.camera, ref_target, options.bounces, options.seed, scratch);
    }

    std::string diff_csv;
    if (options.diff_reference) diff_csv = "config,scene,idDiffFraction,meanAbsColor\n";

    for (const RunConfig& config : options.configs) {
        const std::string label = config_label(config);
        try {
            TraceTarget target;
            target.wide = &wide_for(config.width);
            if (config.compressed) target.comp = &comp_for(config.width);
            target.stream = config.stream;
            target.prec = options.prec;

            std::vector<TrafficStats> per_bounce;
            Image image =
                path_trace(options.camera, target, options.bounces, options.seed, per_bounce);

            ConfigResult row;
            row.label = label;
            row.scene = options.scene_name;
            for (const TrafficStats& s : per_bounce) {
                row.stats.merge(s);
                row.bounce_totals.push_back(s.total());
            }
            if (options.bounces == 0) row.bounce_totals.clear();

            if (options.diff_reference) {
                const DiffStats d = image_diff(image, reference);
                char buf[96];
                std::snprintf(buf, sizeof buf, ",%.6f,%.6f\n", d.id_diff_fraction,
                              d.mean_abs_color);
                diff_csv += label + "," + options.scene_name + buf;
            }
            if (!options.out_dir.empty()) write_ppm(image, options.out_dir + "/" + label + ".ppm");
            result.rows.push_back(std::move(row));
            result.images.push_back(std::move(image));
        } catch (const std::exception& e) {
            result.errors.push_back(label + ": " + e.what());
        }
    }

    if (!result.rows.empty()) result.results_csv = report_csv(result.rows);
    if (options.diff_reference) result.diff_csv = diff_csv;
    if (!options.out_dir.empty()) {
        if (!result.results_csv.empty()) write_text(options.out_dir, "results.csv", result.results_csv);
        if (!result.diff_csv.empty()) write_text(options.out_dir, "diff.csv", result.diff_csv);
    }
    return result;
}

} // namespace qbvh
