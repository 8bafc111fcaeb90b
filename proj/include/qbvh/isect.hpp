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

#ifndef QBVH_ISECT_HPP
#define QBVH_ISECT_HPP

#include <cstdint>
#include <limits>

#include "qbvh/fixed_point.hpp"
#include "qbvh/geom.hpp"
#include "qbvh/quantize.hpp"

namespace qbvh {

/// Ray in the common intersection space: per-axis units of the global
/// leaf grid. origin has q_org fractional bits, dir q_dir; t_max is the
/// current closest-hit distance (initially the t format's maximum).
struct FxRay {
    FxVec3 origin;
    FxVec3 dir;
    FixedP t_max;
};

/// Slab test per the fixed-point traversal scheme: t interval starts at
/// [0, max of the t format]; zero direction components use the explicit
/// parallel inside/outside test. Entering t is rounded toward -infinity
/// and exiting t toward +infinity, so the fixed-point interval encloses
/// the exact one and boundary hits are never dropped.
struct FxBoxHit {
    bool hit = false;
    FixedP t_entry; // slab t_min; meaningful when hit
};

FxBoxHit ray_box_fixed_entry(const FxRay& ray, const FxVec3& box_lo, const FxVec3& box_hi);

inline bool ray_box_fixed(const FxRay& ray, const FxVec3& box_lo, const FxVec3& box_hi) {
    return ray_box_fixed_entry(ray, box_lo, box_hi).hit;
}

/// Max bits observed in each stage of the triangle test; compared against
/// precision_requirements by the tests.
struct FxBitUsage {
    int edge_bits = 0;   // edge vectors
    int offset_bits = 0; // vertex-to-origin vectors
    int normal_bits = 0; // edge-plane normals
    int dot_bits = 0;    // decision dot products
};

struct FxTriHit {
    bool hit = false;
    FixedP dist;
    uint32_t u_bits = 0; // barycentric, 24 fractional bits
    uint32_t v_bits = 0;
};

/// Edge-function ray-triangle test on a quantized triangle placed at its
/// leaf frame origin (common units). All intermediates are exact; the hit
/// distance is rounded toward -infinity so closest-hit updates never
/// overstate. two_sided accepts both orientations; otherwise back faces
/// are rejected. A ray in the triangle plane (dotn == 0) is a miss.
FxTriHit ray_tri_fixed(const FxRay& ray, const QTriangle& tri, const FxVec3& frame_origin,
                       int r_tri, bool two_sided = true, FxBitUsage* usage = nullptr);

/// Float reference kernels with the same contracts.
struct FloatRay {
    Vec3f origin;
    Vec3f dir;
    float t_max = std::numeric_limits<float>::max();
};

struct FloatBoxHit {
    bool hit = false;
    float t_entry = 0.f;
};

FloatBoxHit ray_box_float_entry(const FloatRay& ray, const Aabb& box);

inline bool ray_box_float(const FloatRay& ray, const Aabb& box) {
    return ray_box_float_entry(ray, box).hit;
}

struct FloatTriHit {
    bool hit = false;
    float t = 0.f;
    float u = 0.f;
    float v = 0.f;
};

FloatTriHit ray_tri_float(const FloatRay& ray, const Triangle& tri, bool two_sided = true);

/// Bit requirements of the four intersection stages for the given ray and
/// triangle formats.
struct PrecisionReq {
    int r1 = 0, q1 = 0; // edge vectors
    int r2 = 0, q2 = 0; // vertex-to-origin vectors
    int r3 = 0, q3 = 0; // edge-plane normals
    int r4 = 0, q4 = 0; // decision dot products
};

PrecisionReq precision_requirements(int r_org, int q_org, int r_dir, int q_dir, int r_tri,
                                    int q_tri);

} // namespace qbvh

#endif // QBVH_ISECT_HPP
