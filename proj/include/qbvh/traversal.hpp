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

#ifndef QBVH_TRAVERSAL_HPP
#define QBVH_TRAVERSAL_HPP

#include <array>
#include <cstdint>
#include <span>

#include "qbvh/bvh.hpp"
#include "qbvh/isect.hpp"
#include "qbvh/metrics.hpp"
#include "qbvh/oct_dir.hpp"

namespace qbvh {

inline constexpr uint32_t kNoHit = UINT32_MAX;

/// Ray conversion precision: range/fraction bits of the common-space
/// origin and fraction bits of the octahedral direction. r_org + q_org is
/// limited to 31 so origins fit the 3 x 4-byte record fields.
struct RayPrecision {
    int r_org = 16;
    int q_org = 8;
    int q_dir = 10;
};

/// Working state of one fixed-point ray: quantized origin and direction
/// plus the running closest hit. t decreases monotonically as hits are
/// found; prim indexes the compressed triangle pool.
struct FxRayState {
    FxVec3 origin;   // common units, q_org fractional bits
    OctDir32 dir_word;
    FxVec3 dir;      // decoded, per-axis scaled to common units
    FixedP t;        // current closest distance (starts at the format max)
    uint32_t prim = kNoHit;
    uint32_t u_bits = 0;
    uint32_t v_bits = 0;
};

/// Working state of one float ray for the uncompressed configurations.
struct FloatRayState {
    FloatRay ray; // t_max shrinks to the running closest hit
    uint32_t prim = kNoHit;
    float u = 0.f;
    float v = 0.f;
};

/// The 32-byte ray memory record: 16-byte intersection record, 12-byte
/// origin, 4-byte compressed direction. The serialized form is the unit
/// of ray traffic accounting.
struct RayRecord {
    uint32_t t_bits = 0;
    uint32_t id = kNoHit;
    uint32_t u_bits = 0;
    uint32_t v_bits = 0;
    std::array<int32_t, 3> origin{0, 0, 0};
    uint32_t dir = 0;
};

std::array<uint8_t, 32> serialize_ray_record(const RayRecord& record);

RayRecord to_record(const FxRayState& state, const CompressedTree& tree);
RayRecord to_record(const FloatRayState& state, const WideTree& tree);

/// Quantize a float ray into the tree's common space: origin rounded to
/// q_org fractional leaf-grid units, direction oct-encoded and re-decoded.
/// Throws std::invalid_argument if the origin does not fit (r_org.q_org).
FxRayState ray_to_fixed(const FloatRay& ray, const CompressedTree& tree,
                        const RayPrecision& prec);

/// Single-ray traversal with a per-ray stack, children visited
/// front-to-back by slab entry distance. Charges one node fetch per
/// visit, one triangle fetch per test, 4 bytes per stack push/pop and a
/// constant 32 bytes of ray traffic.
void traverse_single(FxRayState& state, const CompressedTree& tree, const RayPrecision& prec,
                     TrafficStats& stats, FxBitUsage* usage = nullptr);
void traverse_single(FloatRayState& state, const WideTree& tree, TrafficStats& stats);

/// Ray-stream traversal over a shared stack of (node, ray list) entries.
/// Node data is fetched once per entry regardless of list length; each
/// listed ray costs a 32-byte load plus 4-byte list reads/writes, stack
/// entries cost 12 bytes each way, and improved hits store 16 bytes.
/// Hit results are identical to traverse_single on every ray.
void traverse_stream(std::span<FxRayState> states, const CompressedTree& tree,
                     const RayPrecision& prec, TrafficStats& stats, FxBitUsage* usage = nullptr);
void traverse_stream(std::span<FloatRayState> states, const WideTree& tree, TrafficStats& stats);

} // namespace qbvh

#endif // QBVH_TRAVERSAL_HPP
