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

#ifndef QBVH_QUANTIZE_HPP
#define QBVH_QUANTIZE_HPP

#include <array>
#include <cstdint>
#include <span>

#include "qbvh/fixed_point.hpp"
#include "qbvh/geom.hpp"

namespace qbvh {

/// Scale exponent used when an axis has zero extent (the adaptive formula
/// has no finite answer there; any fine scale is conservative).
inline constexpr int kZeroExtentScale = -20;

/// Per-node local coordinate system: an integer origin counted in grid
/// cells of 2^e[axis] world units, plus the per-axis scale exponents.
/// All quantized coordinates inside the node are relative to this frame.
struct QuantFrame {
    std::array<int32_t, 3> origin{0, 0, 0};
    std::array<int8_t, 3> exp{0, 0, 0};

    /// World-space coordinate of the frame origin on one axis.
    double origin_world(int axis) const;

    bool operator==(const QuantFrame&) const = default;
};

/// Axis-aligned box with 8-bit coordinates in the owning frame's grid.
/// lo > hi is the reserved empty-slot sentinel and fails every slab test.
struct QBox {
    std::array<uint8_t, 3> lo{0, 0, 0};
    std::array<uint8_t, 3> hi{0, 0, 0};

    static QBox empty_sentinel() { return {{255, 255, 255}, {0, 0, 0}}; }
    bool is_empty_sentinel() const { return lo[0] > hi[0]; }

    bool operator==(const QBox&) const = default;
};

/// Triangle with 9 x 8-bit vertex coordinates in the owning leaf frame.
struct QTriangle {
    std::array<uint8_t, 9> v{}; // v0.xyz, v1.xyz, v2.xyz

    uint8_t coord(int vertex, int axis) const { return v[vertex * 3 + axis]; }

    bool operator==(const QTriangle&) const = default;
};

/// Smallest integer e with (max_bounds - min_bounds) <= 255 * 2^e, i.e.
/// ceil(log2(extent / (2^8 - 1))). Zero extent returns zero_extent_scale.
/// Throws std::invalid_argument on non-finite input, std::domain_error on
/// max < min.
int compute_scale(double min_bounds, double max_bounds,
                  int zero_extent_scale = kZeroExtentScale);

/// floor(p / 2^scale), evaluated exactly. Throws std::overflow_error when
/// the result does not fit a 32-bit origin.
int32_t compute_root_origin(double p, int scale);

/// Conservative box quantization: floor for lower bounds, ceil for upper.
/// Throws std::domain_error (frame mismatch) if a coordinate falls
/// outside [0, 255].
QBox quantize_bounds(const QuantFrame& frame, const Vec3f& p_lo, const Vec3f& p_hi);

/// Non-throwing probe used by the build pipeline to pick fitting scales.
bool bounds_fit(const QuantFrame& frame, const Vec3f& p_lo, const Vec3f& p_hi);

/// Vertex quantization to the leaf grid: round to nearest, ties toward
/// +infinity. Same range check as quantize_bounds.
QTriangle quantize_triangle(const QuantFrame& frame, const Vec3f& v0, const Vec3f& v1,
                            const Vec3f& v2);

/// Child frame with the origin provided by the parent: the quantized
/// lower corner of child_box, re-expressed in the child's grid units.
/// child_exp must be per-axis <= parent.exp.
QuantFrame derive_child_frame(const QuantFrame& parent, const QBox& child_box,
                              const std::array<int, 3>& child_exp);

/// Per-axis maximum (coarsest) exponent over all leaf scales; the shared
/// grid that keeps triangle quantization watertight across leaves.
std::array<int, 3> broadcast_leaf_scales(std::span<const std::array<int, 3>> leaf_scales);

namespace detail {

/// Exact evaluation of m * 2^s rounded to an integer; round-to-nearest
/// ties toward +infinity for round_shift. m is a 53-bit double mantissa.
int128 floor_shift(int64_t m, int s);
int128 ceil_shift(int64_t m, int s);
int128 round_shift(int64_t m, int s);

/// Decompose a finite double into (mantissa, exponent) with d == m * 2^s.
void decompose(double d, int64_t& m, int& s);

} // namespace detail

} // namespace qbvh

#endif // QBVH_QUANTIZE_HPP
