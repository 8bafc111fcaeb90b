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

#include "qbvh/quantize.hpp"

#include <cmath>
#include <stdexcept>

namespace qbvh {

namespace detail {

void decompose(double d, int64_t& m, int& s) {
    if (d == 0.0) {
        m = 0;
        s = 0;
        return;
    }
    int e = 0;
    double frac = std::frexp(d, &e); // |frac| in [0.5, 1)
    m = (int64_t)std::ldexp(frac, 53);
    s = e - 53;
}

int128 floor_shift(int64_t m, int s) {
    if (m == 0) return 0;
    if (s >= 0) return checked_shl((int128)m, s);
    int shift = -s;
    if (shift > 127) return m < 0 ? -1 : 0;
    return (int128)m >> shift;
}

int128 ceil_shift(int64_t m, int s) {
    return -floor_shift(-m, s);
}

int128 round_shift(int64_t m, int s) {
    if (m == 0) return 0;
    if (s >= 0) return checked_shl((int128)m, s);
    int shift = -s;
    if (shift > 126) return 0; // |m * 2^s| < 2^-63, rounds to zero either way
    return ((int128)m + ((int128)1 << (shift - 1))) >> shift;
}

} // namespace detail

double QuantFrame::origin_world(int axis) const {
    return std::ldexp((double)origin[axis], exp[axis]);
}

int compute_scale(double min_bounds, double max_bounds, int zero_extent_scale) {
    if (!std::isfinite(min_bounds) || !std::isfinite(max_bounds))
        throw std::invalid_argument("compute_scale: non-finite bounds");
    if (max_bounds < min_bounds)
        throw std::domain_error("compute_scale: max < min");
    const double extent = max_bounds - min_bounds;
    if (extent == 0.0) return zero_extent_scale;
    // Smallest e with extent <= 255 * 2^e. ldexp(extent, -e) lands near 2^8,
    // so the scaled comparison is exact in double.
    int e = std::ilogb(extent) - 8;
    while (std::ldexp(extent, -e) > 255.0) ++e;
    return e;
}

int32_t compute_root_origin(double p, int scale) {
    if (!std::isfinite(p)) throw std::invalid_argument("compute_root_origin: non-finite corner");
    int64_t m = 0;
    int s = 0;
    detail::decompose(p, m, s);
    int128 origin = detail::floor_shift(m, s - scale);
    if (origin < INT32_MIN || origin > INT32_MAX)
        throw std::overflow_error("origin exceeds 32 bits: scene outside representable world");
    return (int32_t)origin;
}

namespace {

// floor((p - origin*2^e) / 2^e) == floor(p / 2^e) - origin, and likewise
// for ceil/round, because the origin is an integer number of cells.
int128 grid_floor(double p, int e, int32_t origin) {
    int64_t m = 0;
    int s = 0;
    detail::decompose(p, m, s);
    return detail::floor_shift(m, s - e) - origin;
}

int128 grid_ceil(double p, int e, int32_t origin) {
    int64_t m = 0;
    int s = 0;
    detail::decompose(p, m, s);
    return detail::ceil_shift(m, s - e) - origin;
}

int128 grid_round(double p, int e, int32_t origin) {
    int64_t m = 0;
    int s = 0;
    detail::decompose(p, m, s);
    return detail::round_shift(m, s - e) - origin;
}

uint8_t to_u8(int128 coord, const char* what) {
    if (coord < 0 || coord > 255)
        throw std::domain_error(std::string("frame mismatch: ") + what + " outside [0,255]");
    return (uint8_t)coord;
}

} // namespace

QBox quantize_bounds(const QuantFrame& frame, const Vec3f& p_lo, const Vec3f& p_hi) {
    QBox box;
    for (int axis = 0; axis < 3; ++axis) {
        box.lo[axis] = to_u8(grid_floor(p_lo[axis], frame.exp[axis], frame.origin[axis]),
                             "quantized lower bound");
        box.hi[axis] = to_u8(grid_ceil(p_hi[axis], frame.exp[axis], frame.origin[axis]),
                             "quantized upper bound");
    }
    return box;
}

bool bounds_fit(const QuantFrame& frame, const Vec3f& p_lo, const Vec3f& p_hi) {
    for (int axis = 0; axis < 3; ++axis) {
        if (grid_floor(p_lo[axis], frame.exp[axis], frame.origin[axis]) < 0) return false;
        if (grid_ceil(p_hi[axis], frame.exp[axis], frame.origin[axis]) > 255) return false;
    }
    return true;
}

QTriangle quantize_triangle(const QuantFrame& frame, const Vec3f& v0, const Vec3f& v1,
                            const Vec3f& v2) {
    const Vec3f* verts[3] = {&v0, &v1, &v2};
    QTriangle tri;
    for (int v = 0; v < 3; ++v)
        for (int axis = 0; axis < 3; ++axis)
            tri.v[v * 3 + axis] =
                to_u8(grid_round((*verts[v])[axis], frame.exp[axis], frame.origin[axis]),
                      "quantized vertex");
    return tri;
}

QuantFrame derive_child_frame(const QuantFrame& parent, const QBox& child_box,
                              const std::array<int, 3>& child_exp) {
    QuantFrame child;
    for (int axis = 0; axis < 3; ++axis) {
        if (child_exp[axis] > parent.exp[axis])
            throw std::domain_error("derive_child_frame: child scale coarser than parent");
        if (child_exp[axis] < INT8_MIN || child_exp[axis] > INT8_MAX)
            throw std::domain_error("derive_child_frame: exponent outside int8");
        const int shift = parent.exp[axis] - child_exp[axis];
        const int128 origin =
            checked_shl((int128)parent.origin[axis] + child_box.lo[axis], shift);
        if (origin < INT32_MIN || origin > INT32_MAX)
            throw std::overflow_error("derive_child_frame: origin exceeds 32 bits");
        child.origin[axis] = (int32_t)origin;
        child.exp[axis] = (int8_t)child_exp[axis];
    }
    return child;
}

std::array<int, 3> broadcast_leaf_scales(std::span<const std::array<int, 3>> leaf_scales) {
    if (leaf_scales.empty())
        throw std::invalid_argument("broadcast_leaf_scales: empty leaf list");
    std::array<int, 3> coarsest = leaf_scales.front();
    for (const auto& s : leaf_scales)
        for (int axis = 0; axis < 3; ++axis) coarsest[axis] = std::max(coarsest[axis], s[axis]);
    return coarsest;
}

} // namespace qbvh
