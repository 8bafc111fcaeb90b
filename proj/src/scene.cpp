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

#include "qbvh/scene.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qbvh {

std::vector<Triangle> TriangleMesh::to_triangles() const {
    std::vector<Triangle> tris;
    tris.reserve(faces.size());
    for (const auto& f : faces)
        tris.push_back({positions[f[0]], positions[f[1]], positions[f[2]]});
    return tris;
}

Aabb TriangleMesh::bounds() const {
    Aabb b;
    for (const Vec3f& p : positions) b.expand(p);
    return b;
}

// ---------------------------------------------------------------------------
// OBJ loading
// ---------------------------------------------------------------------------

namespace {

uint32_t resolve_obj_index(long idx, size_t vertex_count, const std::string& line) {
    long resolved = idx < 0 ? (long)vertex_count + idx : idx - 1;
    if (resolved < 0 || resolved >= (long)vertex_count)
        throw std::runtime_error("load_obj: vertex index out of range in \"" + line + "\"");
    return (uint32_t)resolved;
}

} // namespace

TriangleMesh load_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_obj: cannot open " + path);

    TriangleMesh mesh;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            Vec3f p;
            if (!(ls >> p.x >> p.y >> p.z))
                throw std::runtime_error("load_obj: malformed vertex \"" + line + "\"");
            if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
                throw std::runtime_error("load_obj: non-finite vertex \"" + line + "\"");
            mesh.positions.push_back(p);
        } else if (tag == "f") {
            std::vector<uint32_t> corners;
            std::string token;
            while (ls >> token) {
                // "i", "i/t", "i//n" or "i/t/n"; only the position index is used.
                const size_t slash = token.find('/');
                const std::string head = slash == std::string::npos ? token : token.substr(0, slash);
                size_t consumed = 0;
                long idx = 0;
                try {
                    idx = std::stol(head, &consumed);
                } catch (const std::exception&) {
                    throw std::runtime_error("load_obj: malformed face \"" + line + "\"");
                }
                if (consumed != head.size() || idx == 0)
                    throw std::runtime_error("load_obj: malformed face \"" + line + "\"");
                corners.push_back(resolve_obj_index(idx, mesh.positions.size(), line));
            }
            if (corners.size() < 3)
                throw std::runtime_error("load_obj: face with fewer than 3 vertices");
            for (size_t i = 2; i < corners.size(); ++i)
                mesh.faces.push_back({corners[0], corners[i - 1], corners[i]});
        }
    }
    return mesh;
}

// ---------------------------------------------------------------------------
// Procedural scenes
// ---------------------------------------------------------------------------

namespace {

// Closed axis box rotated around Y, appended with outward winding.
void add_box(TriangleMesh& mesh, const Vec3f& center, const Vec3f& half, float y_rot_deg) {
    const float a = y_rot_deg * 3.14159265358979323846f / 180.f;
    const float ca = std::cos(a);
    const float sa = std::sin(a);
    const uint32_t base = (uint32_t)mesh.positions.size();
    for (int i = 0; i < 8; ++i) {
        const float x = (i & 1) ? half.x : -half.x;
        const float y = (i & 2) ? half.y : -half.y;
        const float z = (i & 4) ? half.z : -half.z;
        mesh.positions.push_back({center.x + ca * x + sa * z, center.y + y,
                                  center.z - sa * x + ca * z});
    }
    // Two triangles per face, consistent outward orientation.
    const int quads[6][4] = {{0, 2, 6, 4},  // -x
                             {1, 5, 7, 3},  // +x
                             {0, 4, 5, 1},  // -y
                             {2, 3, 7, 6},  // +y
                             {0, 1, 3, 2},  // -z
                             {4, 6, 7, 5}}; // +z
    for (const int* q : quads) {
        mesh.faces.push_back({base + q[0], base + q[1], base + q[2]});
        mesh.faces.push_back({base + q[0], base + q[2], base + q[3]});
    }
}

} // namespace

TriangleMesh make_cornell() {
    TriangleMesh mesh;
    add_box(mesh, {0.f, 1.f, 0.f}, {1.f, 1.f, 1.f}, 0.f);            // room
    add_box(mesh, {-0.35f, 0.6f, -0.3f}, {0.3f, 0.6f, 0.3f}, 18.f);  // tall block
    add_box(mesh, {0.4f, 0.3f, 0.35f}, {0.28f, 0.3f, 0.28f}, -15.f); // short block
    return mesh;
}

TriangleMesh make_sphere(int subdivisions) {
    if (subdivisions < 0 || subdivisions > 8)
        throw std::invalid_argument("make_sphere: subdivisions must be in [0, 8]");

    TriangleMesh mesh;
    const float t = (1.f + std::sqrt(5.f)) / 2.f;
    const float verts[12][3] = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0},
                                {0, -1, t}, {0, 1, t},  {0, -1, -t}, {0, 1, -t},
                                {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
    for (const auto& v : verts) mesh.positions.push_back(normalize(Vec3f{v[0], v[1], v[2]}));
    const uint32_t faces[20][3] = {{0, 11, 5}, {0, 5, 1},   {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                   {1, 5, 9},  {5, 11, 4},  {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                   {3, 9, 4},  {3, 4, 2},   {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                   {4, 9, 5},  {2, 4, 11},  {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    for (const auto& f : faces) mesh.faces.push_back({f[0], f[1], f[2]});

    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<uint32_t, uint32_t>, uint32_t> midpoint;
        auto mid = [&](uint32_t a, uint32_t b) {
            const auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            const uint32_t idx = (uint32_t)mesh.positions.size();
            mesh.positions.push_back(
                normalize((mesh.positions[a] + mesh.positions[b]) * 0.5f));
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<uint32_t, 3>> next;
        next.reserve(mesh.faces.size() * 4);
        for (const auto& f : mesh.faces) {
            const uint32_t ab = mid(f[0], f[1]);
            const uint32_t bc = mid(f[1], f[2]);
            const uint32_t ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        mesh.faces = std::move(next);
    }
    return mesh;
}

TriangleMesh make_grid(int n) {
    if (n < 1 || n > 512) throw std::invalid_argument("make_grid: n must be in [1, 512]");

    TriangleMesh mesh;
    std::map<std::array<float, 3>, uint32_t> dedup;
    auto vertex = [&](float x, float y, float z) {
        const std::array<float, 3> key{x, y, z};
        auto it = dedup.find(key);
        if (it != dedup.end()) return it->second;
        const uint32_t idx = (uint32_t)mesh.positions.size();
        mesh.positions.push_back({x, y, z});
        dedup.emplace(key, idx);
        return idx;
    };
    auto coord = [&](int i) { return 2.f * (float)i / (float)n - 1.f; };

    // Each cube face tessellated n x n; shared edges and corners dedup to
    // identical vertices, so the surface is closed.
    for (int face = 0; face < 6; ++face) {
        const int axis = face / 2;
        const float sign = (face & 1) ? 1.f : -1.f;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                auto corner = [&](int di, int dj) {
                    float uv[2] = {coord(i + di), coord(j + dj)};
                    float p[3];
                    p[axis] = sign;
                    p[(axis + 1) % 3] = uv[0];
                    p[(axis + 2) % 3] = uv[1];
                    return vertex(p[0], p[1], p[2]);
                };
                const uint32_t v00 = corner(0, 0);
                const uint32_t v10 = corner(1, 0);
                const uint32_t v11 = corner(1, 1);
                const uint32_t v01 = corner(0, 1);
                if (sign > 0.f) {
                    mesh.faces.push_back({v00, v10, v11});
                    mesh.faces.push_back({v00, v11, v01});
                } else {
                    mesh.faces.push_back({v00, v11, v10});
                    mesh.faces.push_back({v00, v01, v11});
                }
            }
        }
    }
    return mesh;
}

// ---------------------------------------------------------------------------
// Camera and primary rays
// ---------------------------------------------------------------------------

std::vector<FloatRay> generate_primary_rays(const Camera& camera) {
    if (camera.width < 1 || camera.height < 1)
        throw std::invalid_argument("generate_primary_rays: empty resolution");
    const Vec3f forward = camera.look_at - camera.position;
    if (length(forward) == 0.f)
        throw std::invalid_argument("generate_primary_rays: degenerate camera");
    const Vec3f f = normalize(forward);
    Vec3f up{0.f, 1.f, 0.f};
    if (std::abs(dot(f, up)) > 0.999f) up = {0.f, 0.f, 1.f};
    const Vec3f right = normalize(cross(f, up));
    const Vec3f cam_up = cross(right, f);

    const float tan_half = std::tan(camera.vfov_deg * 3.14159265358979323846f / 360.f);
    const float aspect = (float)camera.width / (float)camera.height;

    std::vector<FloatRay> rays;
    rays.reserve((size_t)camera.width * camera.height);
    for (int y = 0; y < camera.height; ++y) {
        for (int x = 0; x < camera.width; ++x) {
            const float sx = (2.f * ((float)x + 0.5f) / (float)camera.width - 1.f) * tan_half * aspect;
            const float sy = (1.f - 2.f * ((float)y + 0.5f) / (float)camera.height) * tan_half;
            FloatRay ray;
            ray.origin = camera.position;
            ray.dir = normalize(f + right * sx + cam_up * sy);
            rays.push_back(ray);
        }
    }
    return rays;
}

// ---------------------------------------------------------------------------
// Image output and comparison
// ---------------------------------------------------------------------------

void write_ppm(const Image& image, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_ppm: cannot open " + path);
    out << "P6\n" << image.width << " " << image.height << "\n255\n";
    std::vector<uint8_t> row((size_t)image.width * 3);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                const float v = image.rgb[((size_t)y * image.width + x) * 3 + c];
                const float enc = std::sqrt(std::clamp(v, 0.f, 1.f));
                row[(size_t)x * 3 + c] = (uint8_t)std::lround(enc * 255.f);
            }
        }
        out.write((const char*)row.data(), (std::streamsize)row.size());
    }
    if (!out) throw std::runtime_error("write_ppm: write failed for " + path);
}

DiffStats image_diff(const Image& a, const Image& b) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("image_diff: size mismatch");
    DiffStats stats;
    const size_t pixels = (size_t)a.width * a.height;
    size_t id_diffs = 0;
    double color_sum = 0.0;
    for (size_t i = 0; i < pixels; ++i) {
        if (a.prim_id[i] != b.prim_id[i]) ++id_diffs;
        for (int c = 0; c < 3; ++c)
            color_sum += std::abs((double)a.rgb[i * 3 + c] - (double)b.rgb[i * 3 + c]);
    }
    stats.id_diff_fraction = pixels ? (double)id_diffs / (double)pixels : 0.0;
    stats.mean_abs_color = pixels ? color_sum / (double)(pixels * 3) : 0.0;
    return stats;
}

// ---------------------------------------------------------------------------
// Path tracing
// ---------------------------------------------------------------------------

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double rng_uniform(uint64_t seed, uint64_t pixel, uint64_t bounce, uint64_t salt) {
    const uint64_t h = splitmix64(splitmix64(splitmix64(seed) ^ pixel) ^ (bounce << 8 | salt));
    return (double)(h >> 11) * 0x1.0p-53;
}

Vec3f cosine_sample(const Vec3f& n, double u1, double u2) {
    const float r = std::sqrt((float)u1);
    const float phi = 2.f * 3.14159265358979323846f * (float)u2;
    const float lx = r * std::cos(phi);
    const float ly = r * std::sin(phi);
    const float lz = std::sqrt(std::max(0.f, 1.f - (float)u1));
    // Deterministic orthonormal basis around n.
    const Vec3f a = std::abs(n.z) < 0.9f ? Vec3f{0.f, 0.f, 1.f} : Vec3f{1.f, 0.f, 0.f};
    const Vec3f t = normalize(cross(a, n));
    const Vec3f b = cross(n, t);
    return normalize(t * lx + b * ly + n * lz);
}

struct WaveHit {
    bool hit = false;
    uint32_t prim = kNoHit;     // pool index
    uint32_t orig_id = kNoHit;  // original mesh triangle id
    Vec3f point;                // world hit position
    Vec3f normal;               // geometric normal, against the incoming ray
};

constexpr float kAlbedo = 0.7f;
constexpr float kAmbient = 0.15f;

} // namespace

Image path_trace(const Camera& camera, const TraceTarget& target, int bounces, uint64_t seed,
                 std::vector<TrafficStats>& per_bounce) {
    if (!target.wide) throw std::invalid_argument("path_trace: no tree");
    if (bounces < 0) throw std::invalid_argument("path_trace: negative bounce count");

    const WideTree& wide = *target.wide;
    const bool compressed = target.comp != nullptr;
    const float float_eps = length(wide.bounds.extent()) * 1e-4f;

    Image image;
    image.width = camera.width;
    image.height = camera.height;
    image.rgb.assign((size_t)camera.width * camera.height * 3, 0.f);
    image.prim_id.assign((size_t)camera.width * camera.height, kNoHit);

    per_bounce.assign((size_t)bounces + 1, TrafficStats{});

    std::vector<FloatRay> rays = generate_primary_rays(camera);
    std::vector<uint32_t> pixel_of(rays.size());
    for (uint32_t i = 0; i < rays.size(); ++i) pixel_of[i] = i;
    std::vector<float> throughput(rays.size(), 1.f);

    for (int bounce = 0; bounce <= bounces && !rays.empty(); ++bounce) {
        TrafficStats& stats = per_bounce[bounce];
        std::vector<WaveHit> hits(rays.size());

        if (compressed) {
            const CompressedTree& tree = *target.comp;
            std::vector<FxRayState> states;
            states.reserve(rays.size());
            for (const FloatRay& r : rays) states.push_back(ray_to_fixed(r, tree, target.prec));
            if (target.stream) {
                traverse_stream(states, tree, target.prec, stats);
            } else {
                for (FxRayState& s : states) traverse_single(s, tree, target.prec, stats);
            }
            for (size_t i = 0; i < states.size(); ++i) {
                const FxRayState& s = states[i];
                if (s.prim == kNoHit) continue;
                WaveHit& h = hits[i];
                h.hit = true;
                h.prim = s.prim;
                h.orig_id = tree.prim_ids[s.prim];
                const double t = s.t.to_double();
                for (int axis = 0; axis < 3; ++axis) {
                    const FixedP& o = axis == 0 ? s.origin.x : (axis == 1 ? s.origin.y : s.origin.z);
                    const FixedP& d = axis == 0 ? s.dir.x : (axis == 1 ? s.dir.y : s.dir.z);
                    h.point[axis] = (float)std::ldexp(o.to_double() + t * d.to_double(),
                                                      tree.leaf_exp[axis]);
                }
                // Geometric normal of the quantized triangle.
                const CompNode& leaf = tree.nodes[tree.tri_leaf[s.prim]];
                const QTriangle& qt = tree.triangles[s.prim];
                Vec3f v[3];
                for (int k = 0; k < 3; ++k)
                    for (int axis = 0; axis < 3; ++axis)
                        v[k][axis] = (float)std::ldexp(
                            (double)leaf.frame.origin[axis] + qt.coord(k, axis),
                            tree.leaf_exp[axis]);
                Vec3f n = normalize(cross(v[1] - v[0], v[2] - v[0]));
                if (dot(n, rays[i].dir) > 0.f) n = n * -1.f;
                h.normal = n;
            }
        } else {
            std::vector<FloatRayState> states(rays.size());
            for (size_t i = 0; i < rays.size(); ++i) states[i].ray = rays[i];
            if (target.stream) {
                traverse_stream(states, wide, stats);
            } else {
                for (FloatRayState& s : states) traverse_single(s, wide, stats);
            }
            for (size_t i = 0; i < states.size(); ++i) {
                const FloatRayState& s = states[i];
                if (s.prim == kNoHit) continue;
                WaveHit& h = hits[i];
                h.hit = true;
                h.prim = s.prim;
                h.orig_id = wide.prim_ids[s.prim];
                h.point = rays[i].origin + rays[i].dir * s.ray.t_max;
                const Triangle& tri = wide.triangles[s.prim];
                Vec3f n = normalize(cross(tri.v1 - tri.v0, tri.v2 - tri.v0));
                if (dot(n, rays[i].dir) > 0.f) n = n * -1.f;
                h.normal = n;
            }
        }

        // Shade and build the next wave.
        std::vector<FloatRay> next_rays;
        std::vector<uint32_t> next_pixels;
        std::vector<float> next_throughput;
        for (size_t i = 0; i < rays.size(); ++i) {
            const uint32_t px = pixel_of[i];
            const WaveHit& h = hits[i];
            if (!h.hit) {
                for (int c = 0; c < 3; ++c) image.rgb[(size_t)px * 3 + c] += throughput[i];
                continue;
            }
            if (bounce == 0) image.prim_id[px] = h.orig_id;
            const float shade =
                throughput[i] * kAmbient * std::abs(dot(h.normal, rays[i].dir * -1.f));
            for (int c = 0; c < 3; ++c) image.rgb[(size_t)px * 3 + c] += shade;
            if (bounce == bounces) continue;

            FloatRay bounce_ray;
            if (compressed) {
                for (int axis = 0; axis < 3; ++axis)
                    bounce_ray.origin[axis] =
                        h.point[axis] +
                        h.normal[axis] * (float)std::ldexp(1.0, target.comp->leaf_exp[axis]);
            } else {
                bounce_ray.origin = h.point + h.normal * float_eps;
            }
            bounce_ray.dir = cosine_sample(h.normal, rng_uniform(seed, px, bounce, 0),
                                           rng_uniform(seed, px, bounce, 1));
            next_rays.push_back(bounce_ray);
            next_pixels.push_back(px);
            next_throughput.push_back(throughput[i] * kAlbedo);
        }
        rays = std::move(next_rays);
        pixel_of = std::move(next_pixels);
        throughput = std::move(next_throughput);
    }
    return image;
}

} // namespace qbvh
