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

#include "qbvh/isect.hpp"

#include <algorithm>
#include <cmath>

namespace qbvh {

namespace {

const FixedP kFxZero = FixedP(0, 0, 0);

FixedP fx_neg(const FixedP& a) { return fx_sub(kFxZero, a); }

} // namespace

FxBoxHit ray_box_fixed_entry(const FxRay& ray, const FxVec3& box_lo, const FxVec3& box_hi) {
    FixedP t_min = kFxZero;
    // The t format is fixed by the operand formats; start t_max at its
    // largest representable value.
    const int r_t = std::max(box_lo.x.range_bits(), ray.origin.x.range_bits()) + 1 +
                    ray.dir.x.frac_bits();
    const int q_t = ray.dir.x.range_bits() +
                    std::max(box_lo.x.frac_bits(), ray.origin.x.frac_bits());
    FixedP t_max = FixedP::max_value(r_t, q_t);
    bool t_max_open = true; // no slab has clipped t_max yet

    for (int axis = 0; axis < 3; ++axis) {
        const FixedP& o = axis == 0 ? ray.origin.x : (axis == 1 ? ray.origin.y : ray.origin.z);
        const FixedP& d = axis == 0 ? ray.dir.x : (axis == 1 ? ray.dir.y : ray.dir.z);
        const FixedP& lo = axis == 0 ? box_lo.x : (axis == 1 ? box_lo.y : box_lo.z);
        const FixedP& hi = axis == 0 ? box_hi.x : (axis == 1 ? box_hi.y : box_hi.z);

        if (d.is_zero()) {
            // Ray parallel and outside
            if (fx_cmp(o, lo) < 0 || fx_cmp(o, hi) > 0) return {};
            continue;
        }
        // Two intersections; rounding directions keep the interval conservative.
        FixedP t1, t2;
        if (d.is_negative()) {
            t1 = fx_div_floor(fx_sub(hi, o), d);
            t2 = fx_div_ceil(fx_sub(lo, o), d);
        } else {
            t1 = fx_div_floor(fx_sub(lo, o), d);
            t2 = fx_div_ceil(fx_sub(hi, o), d);
        }
        if (fx_cmp(t1, t_min) > 0) t_min = t1;
        if (t_max_open || fx_cmp(t2, t_max) < 0) {
            t_max = t2;
            t_max_open = false;
        }
        if (fx_cmp(t_min, t_max) > 0) return {}; // No intersection
    }
    return {true, t_min};
}

FxTriHit ray_tri_fixed(const FxRay& ray, const QTriangle& tri, const FxVec3& frame_origin,
                       int r_tri, bool two_sided, FxBitUsage* usage) {
    // Vertices in common units: origin + 8-bit coordinates, format (r_tri.0).
    auto vertex = [&](int v) -> FxVec3 {
        return {FixedP(frame_origin.x.raw() + tri.coord(v, 0), r_tri, 0),
                FixedP(frame_origin.y.raw() + tri.coord(v, 1), r_tri, 0),
                FixedP(frame_origin.z.raw() + tri.coord(v, 2), r_tri, 0)};
    };
    const FxVec3 a = vertex(0);
    const FxVec3 b = vertex(1);
    const FxVec3 c = vertex(2);

    const FxVec3 ab = fx_sub3(b, a);
    const FxVec3 ac = fx_sub3(c, a);
    const FxVec3 bc = fx_sub3(c, b);
    const FxVec3 a0 = fx_sub3(ray.origin, a);
    const FxVec3 b0 = fx_sub3(ray.origin, b);
    const FxVec3 c0 = fx_sub3(ray.origin, c);

    const FxVec3 an = fx_cross(ab, a0);
    const FxVec3 bn = fx_cross(bc, b0);
    const FxVec3 cn = fx_cross(c0, ac);
    const FixedP dota = fx_dot(an, ray.dir);
    const FixedP dotb = fx_dot(bn, ray.dir);
    const FixedP dotc = fx_dot(cn, ray.dir);

    if (usage) {
        auto note = [](int& slot, const FxVec3& v) {
            slot = std::max({slot, bit_length(v.x.raw()), bit_length(v.y.raw()),
                             bit_length(v.z.raw())});
        };
        note(usage->edge_bits, ab);
        note(usage->edge_bits, ac);
        note(usage->edge_bits, bc);
        note(usage->offset_bits, a0);
        note(usage->offset_bits, b0);
        note(usage->offset_bits, c0);
        note(usage->normal_bits, an);
        note(usage->normal_bits, bn);
        note(usage->normal_bits, cn);
        usage->dot_bits = std::max({usage->dot_bits, bit_length(dota.raw()),
                                    bit_length(dotb.raw()), bit_length(dotc.raw())});
    }

    const bool back = dota.raw() > 0 || dotb.raw() > 0 || dotc.raw() > 0;
    const bool front = dota.raw() < 0 || dotb.raw() < 0 || dotc.raw() < 0;
    if (two_sided ? (back && front) : back) return {}; // Early rejection

    const FxVec3 n = fx_cross(ab, ac);
    const FixedP dotn = fx_dot(ray.dir, n);
    if (dotn.is_zero()) return {}; // ray in the triangle plane
    const FixedP dist = fx_div_floor(fx_neg(fx_dot(a0, n)), dotn);

    if (dist.is_negative() || fx_cmp(dist, ray.t_max) > 0) return {}; // Out of bounds

    // Barycentrics: edge dot ratios, truncated to 24 fractional bits.
    // dotb weights vertex 0, dotc vertex 1, dota vertex 2.
    FxTriHit hit;
    hit.hit = true;
    hit.dist = dist;
    const int128 denom = dota.raw() + dotb.raw() + dotc.raw();
    if (denom != 0) {
        hit.u_bits = (uint32_t)((dotc.raw() << 24) / denom);
        hit.v_bits = (uint32_t)((dota.raw() << 24) / denom);
    }
    return hit;
}

FloatBoxHit ray_box_float_entry(const FloatRay& ray, const Aabb& box) {
    float t_min = 0.f;
    float t_max = std::numeric_limits<float>::max();
    for (int axis = 0; axis < 3; ++axis) {
        const float o = ray.origin[axis];
        const float d = ray.dir[axis];
        if (d == 0.f) {
            if (o < box.lo[axis] || o > box.hi[axis]) return {};
            continue;
        }
        float t1 = (box.lo[axis] - o) / d;
        float t2 = (box.hi[axis] - o) / d;
        if (d < 0.f) std::swap(t1, t2);
        t_min = std::max(t_min, t1);
        t_max = std::min(t_max, t2);
        if (t_min > t_max) return {};
    }
    return {true, t_min};
}

FloatTriHit ray_tri_float(const FloatRay& ray, const Triangle& tri, bool two_sided) {
    const Vec3f ab = tri.v1 - tri.v0;
    const Vec3f ac = tri.v2 - tri.v0;
    const Vec3f bc = tri.v2 - tri.v1;
    const Vec3f a0 = ray.origin - tri.v0;
    const Vec3f b0 = ray.origin - tri.v1;
    const Vec3f c0 = ray.origin - tri.v2;

    const float dota = dot(cross(ab, a0), ray.dir);
    const float dotb = dot(cross(bc, b0), ray.dir);
    const float dotc = dot(cross(c0, ac), ray.dir);

    const bool back = dota > 0.f || dotb > 0.f || dotc > 0.f;
    const bool front = dota < 0.f || dotb < 0.f || dotc < 0.f;
    if (two_sided ? (back && front) : back) return {};

    const Vec3f n = cross(ab, ac);
    const float dotn = dot(ray.dir, n);
    if (dotn == 0.f) return {};
    const float dist = -dot(a0, n) / dotn;
    if (dist < 0.f || dist > ray.t_max) return {};

    FloatTriHit hit;
    hit.hit = true;
    hit.t = dist;
    const float denom = dota + dotb + dotc;
    if (denom != 0.f) {
        hit.u = dotc / denom;
        hit.v = dota / denom;
    }
    return hit;
}

PrecisionReq precision_requirements(int r_org, int q_org, int r_dir, int q_dir, int r_tri,
                                    int q_tri) {
    PrecisionReq req;
    req.r1 = r_tri + 1;
    req.q1 = q_tri;
    req.r2 = std::max(r_tri, r_org) + 1;
    req.q2 = std::max(q_tri, q_org);
    req.r3 = req.r2 + (r_tri + 1) + 1;
    req.q3 = req.q2 + q_tri;
    req.r4 = req.r3 + r_dir + 2;
    req.q4 = req.q3 + q_dir;
    return req;
}

} // namespace qbvh
