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

#ifndef QBVH_SCENE_HPP
#define QBVH_SCENE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qbvh/geom.hpp"
#include "qbvh/metrics.hpp"
#include "qbvh/traversal.hpp"

namespace qbvh {

struct TriangleMesh {
    std::vector<Vec3f> positions;
    std::vector<std::array<uint32_t, 3>> faces;

    std::vector<Triangle> to_triangles() const;
    Aabb bounds() const;
};

/// Wavefront OBJ positions and faces; polygons are fan-triangulated,
/// all other statements are ignored. Throws std::runtime_error on I/O or
/// parse failure and on out-of-range indices.
TriangleMesh load_obj(const std::string& path);

/// Closed box room with two rotated blocks inside.
TriangleMesh make_cornell();

/// Icosphere: icosahedron subdivided n times (20 * 4^n triangles),
/// watertight by construction.
TriangleMesh make_sphere(int subdivisions);

/// Cube with each face tessellated into n x n quads; closed, with many
/// coplanar triangles sharing edges across face boundaries.
TriangleMesh make_grid(int n);

struct Camera {
    Vec3f position;
    Vec3f look_at;
    float vfov_deg = 45.f;
    int width = 512;
    int height = 512;
};

/// One ray per pixel through the pixel center, row-major order.
std::vector<FloatRay> generate_primary_rays(const Camera& camera);

struct Image {
    int width = 0;
    int height = 0;
    std::vector<float> rgb;        // 3 floats per pixel, linear
    std::vector<uint32_t> prim_id; // primary-hit triangle id, kNoHit on miss
};

/// Binary PPM (P6) with a sqrt transfer curve. Throws on I/O failure.
void write_ppm(const Image& image, const std::string& path);

struct DiffStats {
    double id_diff_fraction = 0.0; // pixels whose primary-hit id differs
    double mean_abs_color = 0.0;   // mean |a-b| over all linear channels
};

DiffStats image_diff(const Image& a, const Image& b);

/// One configured tracing backend: the float tree plus, for compressed
/// configurations, the quantized tree and ray precision.
struct TraceTarget {
    const WideTree* wide = nullptr;
    const CompressedTree* comp = nullptr; // null -> float kernels
    bool stream = false;                  // ray stream vs single ray
    RayPrecision prec;
};

/// Diffuse path tracer with a fixed bounce count and a counter-based RNG
/// keyed by (pixel, bounce, seed). Traffic is recorded per bounce wave;
/// per_bounce is resized to bounces + 1. Deterministic for a fixed seed.
Image path_trace(const Camera& camera, const TraceTarget& target, int bounces, uint64_t seed,
                 std::vector<TrafficStats>& per_bounce);

} // namespace qbvh

#endif // QBVH_SCENE_HPP
