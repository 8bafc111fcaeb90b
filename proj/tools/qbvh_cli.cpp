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

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qbvh/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Quantized wide-BVH ray tracer with memory traffic accounting"};

    std::string scene = "cornell";
    std::vector<std::string> config_labels;
    std::string res = "512x512";
    int bounces = 0;
    uint64_t seed = 1;
    int qdir = 10;
    std::string out_dir = "out";
    bool diff = false;
    bool inline_tris = false;

    app.add_option("--scene", scene, "Scene: cornell, sphere:N, grid:N or a .obj path")
        ->capture_default_str();
    app.add_option("--config", config_labels,
                   "Configuration label BVH{2|4|8}-{SR|RS}-{C|U}, repeatable, or \"all\"");
    app.add_option("--res", res, "Resolution WxH")->capture_default_str();
    app.add_option("--bounces", bounces, "Diffuse bounces")->capture_default_str();
    app.add_option("--seed", seed, "Path tracing seed")->capture_default_str();
    app.add_option("--qdir", qdir, "Octahedral direction fraction bits (1-14)")
        ->capture_default_str();
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_flag("--diff", diff, "Also render a float reference and write diff.csv");
    app.add_flag("--inline-tris", inline_tris,
                 "Store tiny leaves' triangles inside the compressed node union");

    CLI11_PARSE(app, argc, argv);

    try {
        int res_x = 0, res_y = 0;
        if (std::sscanf(res.c_str(), "%dx%d", &res_x, &res_y) != 2 || res_x < 1 || res_y < 1)
            throw std::invalid_argument("bad --res \"" + res + "\": expected WxH");

        qbvh::MatrixOptions options;
        if (config_labels.empty() ||
            (config_labels.size() == 1 && config_labels.front() == "all")) {
            options.configs = qbvh::all_configs();
        } else {
            for (const std::string& label : config_labels)
                options.configs.push_back(qbvh::parse_config(label));
        }

        qbvh::SceneSpec spec = qbvh::make_scene(scene, res_x, res_y);
        options.mesh = std::move(spec.mesh);
        options.scene_name = spec.name;
        options.camera = spec.camera;
        options.bounces = bounces;
        options.seed = seed;
        options.prec.q_dir = qdir;
        options.compress_params.inline_leaf_triangles = inline_tris;
        options.out_dir = out_dir;
        options.diff_reference = diff;

        const qbvh::MatrixResult result = qbvh::run_matrix(options);
        std::fputs(result.results_csv.c_str(), stdout);
        for (const std::string& err : result.errors) std::fprintf(stderr, "error: %s\n", err.c_str());
        return result.errors.empty() ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
