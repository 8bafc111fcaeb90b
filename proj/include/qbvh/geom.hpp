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

#ifndef QBVH_GEOM_HPP
#define QBVH_GEOM_HPP

#include <algorithm>
#include <cmath>
#include <limits>

namespace qbvh {

struct Vec3f {
    float x = 0.f, y = 0.f, z = 0.f;

    float operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
    float& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }

    Vec3f operator+(const Vec3f& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3f operator-(const Vec3f& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3f operator*(float s) const { return {x * s, y * s, z * s}; }

    bool operator==(const Vec3f&) const = default;
};

inline Vec3f min3(const Vec3f& a, const Vec3f& b) {
    return {std::min(a.x, b.x), std::min(a.y, b.y), std::min(a.z, b.z)};
}
inline Vec3f max3(const Vec3f& a, const Vec3f& b) {
    return {std::max(a.x, b.x), std::max(a.y, b.y), std::max(a.z, b.z)};
}
inline float dot(const Vec3f& a, const Vec3f& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3f cross(const Vec3f& a, const Vec3f& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline float length(const Vec3f& v) { return std::sqrt(dot(v, v)); }
inline Vec3f normalize(const Vec3f& v) {
    float len = length(v);
    return len > 0.f ? v * (1.f / len) : v;
}

struct Aabb {
    Vec3f lo{std::numeric_limits<float>::max(), std::numeric_limits<float>::max(),
             std::numeric_limits<float>::max()};
    Vec3f hi{std::numeric_limits<float>::lowest(), std::numeric_limits<float>::lowest(),
             std::numeric_limits<float>::lowest()};

    bool empty() const { return lo.x > hi.x; }
    void expand(const Vec3f& p) { lo = min3(lo, p); hi = max3(hi, p); }
    void expand(const Aabb& b) { lo = min3(lo, b.lo); hi = max3(hi, b.hi); }
    Vec3f extent() const { return hi - lo; }
    Vec3f centroid() const { return (lo + hi) * 0.5f; }

    float surface_area() const {
        if (empty()) return 0.f;
        Vec3f d = extent();
        return 2.f * (d.x * d.y + d.y * d.z + d.z * d.x);
    }

    bool contains(const Aabb& b) const {
        return lo.x <= b.lo.x && lo.y <= b.lo.y && lo.z <= b.lo.z &&
               hi.x >= b.hi.x && hi.y >= b.hi.y && hi.z >= b.hi.z;
    }
};

struct Triangle {
    Vec3f v0, v1, v2;

    Aabb bounds() const {
        Aabb b;
        b.expand(v0);
        b.expand(v1);
        b.expand(v2);
        return b;
    }
};

} // namespace qbvh

#endif // QBVH_GEOM_HPP
