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

#ifndef QBVH_BVH_HPP
#define QBVH_BVH_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qbvh/geom.hpp"
#include "qbvh/quantize.hpp"

namespace qbvh {

/// Binary SAH builder intermediate node.
struct BuildNode {
    Aabb bounds;
    int32_t left = -1;
    int32_t right = -1;
    uint32_t first = 0; // leaf triangle range into BinaryBvh::tri_order
    uint32_t count = 0; // 0 for inner nodes

    bool is_leaf() const { return count > 0; }
};

struct BinaryBvh {
    std::vector<BuildNode> nodes;    // nodes[0] is the root
    std::vector<uint32_t> tri_order; // permutation of input triangle indices
};

struct SahParams {
    int bin_count = 16;
    uint32_t max_leaf_size = 4;
    float traversal_cost = 1.f;
    float intersection_cost = 1.f;
};

/// Top-down binned SAH build. Deterministic for a fixed input order.
/// Throws std::invalid_argument on an empty mesh or non-finite coordinates.
BinaryBvh build_binary_sah(std::span<const Triangle> triangles, const SahParams& params = {});

enum class NodeType : uint8_t {
    kInner = 0,
    kLeaf = 1,
    kInlineLeaf = 2, // compressed leaf with triangles stored in the union space
};

inline constexpr int kMaxWidth = 8;

/// Wide BVH node over float bounds ("uncompressed"). Child slot boxes live
/// in the parent; leaf nodes carry a triangle range and no own bounds.
/// Empty slots have child == -1 and an inverted (default) Aabb.
struct WideNode {
    std::array<Aabb, kMaxWidth> child_bounds{};
    std::array<int32_t, kMaxWidth> child{-1, -1, -1, -1, -1, -1, -1, -1};
    NodeType type = NodeType::kLeaf;
    uint32_t prim_offset = 0;
    uint32_t prim_count = 0;
};

struct WideTree {
    int width = 2;
    std::vector<WideNode> nodes;     // nodes[0] is the root
    std::vector<Triangle> triangles; // pool reordered by leaf ranges
    std::vector<uint32_t> prim_ids;  // pool index -> original mesh triangle id
    Aabb bounds;                     // root (scene) bounds

    size_t node_pool_bytes() const;
    size_t triangle_pool_bytes() const { return triangles.size() * 36; }
};

/// Greedy collapse of a binary BVH into width-W nodes: the slot with the
/// largest surface area is repeatedly replaced by its two children until
/// all W slots are used. width must be 2, 4 or 8.
WideTree collapse_to_width(const BinaryBvh& binary, std::span<const Triangle> triangles,
                           int width);

/// Compressed wide node: 8-bit child boxes and a quantization frame.
struct CompNode {
    QuantFrame frame;
    std::array<QBox, kMaxWidth> child_box{};
    std::array<int32_t, kMaxWidth> child{-1, -1, -1, -1, -1, -1, -1, -1};
    NodeType type = NodeType::kLeaf;
    uint32_t prim_offset = 0;
    uint32_t prim_count = 0;
    std::array<QTriangle, 3> inline_tris{}; // valid when type == kInlineLeaf
};

struct CompressedTree {
    int width = 2;
    std::vector<CompNode> nodes;      // same indices as the source WideTree
    std::vector<QTriangle> triangles; // 9-byte pool, same order as WideTree pool
    std::vector<uint32_t> prim_ids;
    std::vector<int32_t> tri_leaf;    // pool index -> owning leaf node
    std::array<int, 3> leaf_exp{0, 0, 0}; // broadcast leaf-grid exponents
    int r_tri = 0;  // range bits of leaf-space vertex coordinates
    int r_box = 0;  // range bits of node box coordinates in leaf units

    size_t node_pool_bytes() const;
    size_t triangle_pool_bytes() const { return triangles.size() * 9; }
};

struct CompressParams {
    int zero_extent_scale = kZeroExtentScale;
    bool inline_leaf_triangles = false; // keep tiny leaves inside the node union
};

/// Two-pass conversion of a float wide tree into the compressed form:
/// pass 1 assigns per-node frames from the adaptive power-of-two scales
/// and quantizes boxes and triangles; pass 2 broadcasts the coarsest leaf
/// scale to all leaves, propagates scales up the tree and re-quantizes.
CompressedTree compress(const WideTree& wide, const CompressParams& params = {});

/// Serialized node sizes in bytes: {64,36} W=2, {116,56} W=4, {228,96} W=8.
size_t node_byte_size(int width, bool compressed);

/// Byte-exact node records matching node_byte_size.
std::vector<uint8_t> serialize_node(const WideNode& node, int width);
std::vector<uint8_t> serialize_node(const CompNode& node, int width);

/// Exact-arithmetic audit of a compressed tree: parent/child containment,
/// scale monotonicity, 8-bit validity, triangles inside their leaf slot,
/// and conservativeness against the float tree. Returns human-readable
/// violations; empty means the hierarchy is sound.
std::vector<std::string> validate_hierarchy(const CompressedTree& tree, const WideTree& wide);

} // namespace qbvh

#endif // QBVH_BVH_HPP
