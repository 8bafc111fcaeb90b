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

#ifndef QBVH_CONFIG_HPP
#define QBVH_CONFIG_HPP

#include <string>
#include <vector>

#include "qbvh/bvh.hpp"
#include "qbvh/metrics.hpp"
#include "qbvh/scene.hpp"

namespace qbvh {

/// One traced configuration: BVH width, traversal mode, compression.
/// The canonical label is "BVH{2|4|8}-{SR|RS}-{C|U}".
struct RunConfig {
    int width = 8;
    bool stream = false;
    bool compressed = false;

    bool operator==(const RunConfig&) const = default;
};

/// Parse a canonical label; throws std::invalid_argument naming the
/// grammar on any malformed token.
RunConfig parse_config(const std::string& label);

std::string config_label(const RunConfig& config);

/// All 12 configurations in fixed order: widths 2, 4, 8; SR before RS;
/// C before U.
std::vector<RunConfig> all_configs();

/// Scene selector: "cornell", "sphere:N", "grid:N" or a path to an OBJ
/// file. Supplies a per-scene default camera at the given resolution.
struct SceneSpec {
    std::string name;
    TriangleMesh mesh;
    Camera camera;
};

SceneSpec make_scene(const std::string& selector, int res_x, int res_y);

struct MatrixOptions {
    std::vector<RunConfig> configs;
    TriangleMesh mesh;
    std::string scene_name;
    Camera camera;
    int bounces = 0;
    uint64_t seed = 1;
    RayPrecision prec;
    CompressParams compress_params;
    std::string out_dir;       // empty: no files written
    bool diff_reference = false; // also render a float reference and diff
};

struct MatrixResult {
    std::vector<ConfigResult> rows;
    std::vector<Image> images; // one per row
    std::string results_csv;
    std::string diff_csv;      // empty unless diff_reference
    std::vector<std::string> errors;
};

/// Build each required tree variant once, render every configuration and
/// emit one combined CSV (plus per-config images and a diff CSV when a
/// reference render is requested).
MatrixResult run_matrix(const MatrixOptions& options);

} // namespace qbvh

#endif // QBVH_CONFIG_HPP
