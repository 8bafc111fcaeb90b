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

#include "qbvh/bvh.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace qbvh {

// ---------------------------------------------------------------------------
// Binary SAH builder
// ---------------------------------------------------------------------------

namespace {

Aabb range_bounds(std::span<const Aabb> tri_bounds, std::span<const uint32_t> order,
                  uint32_t first, uint32_t count) {
    Aabb b;
    for (uint32_t i = first; i < first + count; ++i) b.expand(tri_bounds[order[i]]);
    return b;
}

} // namespace

BinaryBvh build_binary_sah(std::span<const Triangle> triangles, const SahParams& params) {
    if (triangles.empty()) throw std::invalid_argument("build_binary_sah: empty mesh");

    const uint32_t n = (uint32_t)triangles.size();
    std::vector<Aabb> tri_bounds(n);
    std::vector<Vec3f> centroids(n);
    for (uint32_t i = 0; i < n; ++i) {
        const Triangle& t = triangles[i];
        for (const Vec3f* v : {&t.v0, &t.v1, &t.v2})
            if (!std::isfinite(v->x) || !std::isfinite(v->y) || !std::isfinite(v->z))
                throw std::invalid_argument("build_binary_sah: non-finite vertex");
        tri_bounds[i] = t.bounds();
        centroids[i] = tri_bounds[i].centroid();
    }

    BinaryBvh bvh;
    bvh.tri_order.resize(n);
    for (uint32_t i = 0; i < n; ++i) bvh.tri_order[i] = i;
    bvh.nodes.reserve(2 * n);

    std::vector<int> bin_of(n);

    struct Work {
        int32_t node;
        uint32_t first, count;
    };
    std::vector<Work> stack;

    bvh.nodes.push_back(BuildNode{range_bounds(tri_bounds, bvh.tri_order, 0, n)});
    stack.push_back({0, 0, n});

    const int bins = params.bin_count;
    while (!stack.empty()) {
        Work w = stack.back();
        stack.pop_back();

        if (w.count <= params.max_leaf_size) {
            bvh.nodes[w.node].first = w.first;
            bvh.nodes[w.node].count = w.count;
            continue;
        }

        Aabb cb;
        for (uint32_t i = w.first; i < w.first + w.count; ++i)
            cb.expand(centroids[bvh.tri_order[i]]);

        int best_axis = -1, best_split = -1;
        double best_cost = std::numeric_limits<double>::infinity();
        for (int axis = 0; axis < 3; ++axis) {
            const float lo = cb.lo[axis];
            const float ext = cb.hi[axis] - lo;
            if (!(ext > 0.f)) continue;

            std::vector<uint32_t> bin_count(bins, 0);
            std::vector<Aabb> bin_box(bins);
            for (uint32_t i = w.first; i < w.first + w.count; ++i) {
                const uint32_t tri = bvh.tri_order[i];
                int b = (int)((centroids[tri][axis] - lo) / ext * bins);
                b = std::clamp(b, 0, bins - 1);
                bin_count[b]++;
                bin_box[b].expand(tri_bounds[tri]);
            }

            // Suffix sweep, then prefix sweep scoring each split plane.
            std::vector<double> right_cost(bins, 0.0);
            Aabb acc;
            uint32_t cnt = 0;
            for (int b = bins - 1; b >= 1; --b) {
                acc.expand(bin_box[b]);
                cnt += bin_count[b];
                right_cost[b] = (double)acc.surface_area() * cnt;
            }
            acc = Aabb{};
            cnt = 0;
            for (int b = 0; b < bins - 1; ++b) {
                acc.expand(bin_box[b]);
                cnt += bin_count[b];
                if (cnt == 0 || cnt == w.count) continue;
                double cost = (double)acc.surface_area() * cnt + right_cost[b + 1];
                if (cost < best_cost) {
                    best_cost = cost;
                    best_axis = axis;
                    best_split = b;
                }
            }
        }

        uint32_t mid;
        auto begin = bvh.tri_order.begin() + w.first;
        auto end = begin + w.count;
        if (best_axis < 0) {
            // Degenerate centroid distribution: median split keeps progress.
            mid = w.first + w.count / 2;
        } else {
            const float lo = cb.lo[best_axis];
            const float ext = cb.hi[best_axis] - lo;
            for (uint32_t i = w.first; i < w.first + w.count; ++i) {
                const uint32_t tri = bvh.tri_order[i];
                int b = (int)((centroids[tri][best_axis] - lo) / ext * bins);
                bin_of[tri] = std::clamp(b, 0, bins - 1);
            }
            auto split_it = std::stable_partition(
                begin, end, [&](uint32_t tri) { return bin_of[tri] <= best_split; });
            mid = w.first + (uint32_t)(split_it - begin);
        }

        const uint32_t left_count = mid - w.first;
        const uint32_t right_count = w.count - left_count;
        const int32_t left = (int32_t)bvh.nodes.size();
        const int32_t right = left + 1;
        bvh.nodes.push_back(BuildNode{range_bounds(tri_bounds, bvh.tri_order, w.first, left_count)});
        bvh.nodes.push_back(BuildNode{range_bounds(tri_bounds, bvh.tri_order, mid, right_count)});
        bvh.nodes[w.node].left = left;
        bvh.nodes[w.node].right = right;
        Aabb merged = bvh.nodes[left].bounds;
        merged.expand(bvh.nodes[right].bounds);
        bvh.nodes[w.node].bounds = merged;
        stack.push_back({right, mid, right_count});
        stack.push_back({left, w.first, left_count});
    }
    return bvh;
}

// ---------------------------------------------------------------------------
// Collapse to width
// ---------------------------------------------------------------------------

WideTree collapse_to_width(const BinaryBvh& binary, std::span<const Triangle> triangles,
                           int width) {
    if (width != 2 && width != 4 && width != 8)
        throw std::invalid_argument("collapse_to_width: width must be 2, 4 or 8");

    WideTree out;
    out.width = width;
    out.bounds = binary.nodes[0].bounds;
    out.prim_ids = binary.tri_order;
    out.triangles.reserve(binary.tri_order.size());
    for (uint32_t id : binary.tri_order) out.triangles.push_back(triangles[id]);

    struct Work {
        int32_t wide;
        int32_t bin;
    };
    std::vector<Work> stack;
    out.nodes.emplace_back();
    stack.push_back({0, 0});

    std::vector<int32_t> slots;
    while (!stack.empty()) {
        Work w = stack.back();
        stack.pop_back();
        const BuildNode& bn = binary.nodes[w.bin];

        if (bn.is_leaf()) {
            WideNode& node = out.nodes[w.wide];
            node.type = NodeType::kLeaf;
            node.prim_offset = bn.first;
            node.prim_count = bn.count;
            continue;
        }

        // Expand the largest-surface-area inner slot until width slots used.
        slots.clear();
        slots.push_back(bn.left);
        slots.push_back(bn.right);
        while ((int)slots.size() < width) {
            int best = -1;
            float best_area = -1.f;
            for (int i = 0; i < (int)slots.size(); ++i) {
                const BuildNode& s = binary.nodes[slots[i]];
                if (s.is_leaf()) continue;
                float area = s.bounds.surface_area();
                if (area > best_area) {
                    best_area = area;
                    best = i;
                }
            }
            if (best < 0) break;
            const BuildNode& s = binary.nodes[slots[best]];
            slots[best] = s.left;
            slots.push_back(s.right);
        }

        out.nodes[w.wide].type = NodeType::kInner;
        for (int k = 0; k < (int)slots.size(); ++k) {
            const int32_t child_wide = (int32_t)out.nodes.size();
            out.nodes.emplace_back();
            out.nodes[w.wide].child_bounds[k] = binary.nodes[slots[k]].bounds;
            out.nodes[w.wide].child[k] = child_wide;
            stack.push_back({child_wide, slots[k]});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Node byte layouts
// ---------------------------------------------------------------------------

size_t node_byte_size(int width, bool compressed) {
    switch (width) {
        case 2: return compressed ? 36 : 64;
        case 4: return compressed ? 56 : 116;
        case 8: return compressed ? 96 : 228;
        default: throw std::invalid_argument("node_byte_size: width must be 2, 4 or 8");
    }
}

size_t WideTree::node_pool_bytes() const { return nodes.size() * node_byte_size(width, false); }
size_t CompressedTree::node_pool_bytes() const { return nodes.size() * node_byte_size(width, true); }

namespace {

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back((uint8_t)(v & 0xff));
    out.push_back((uint8_t)((v >> 8) & 0xff));
    out.push_back((uint8_t)((v >> 16) & 0xff));
    out.push_back((uint8_t)((v >> 24) & 0xff));
}

void put_f32(std::vector<uint8_t>& out, float f) {
    uint32_t v;
    std::memcpy(&v, &f, 4);
    put_u32(out, v);
}

// Type byte: 0 inner, 1 leaf, 2 + (count - 1) for inline leaves.
uint8_t type_byte(NodeType type, uint32_t prim_count) {
    if (type == NodeType::kInlineLeaf) return (uint8_t)(2 + (prim_count - 1));
    return (uint8_t)type;
}

} // namespace

std::vector<uint8_t> serialize_node(const WideNode& node, int width) {
    const size_t total = node_byte_size(width, false);
    std::vector<uint8_t> out;
    out.reserve(total);
    for (int axis = 0; axis < 3; ++axis) {
        for (int k = 0; k < width; ++k) put_f32(out, node.child_bounds[k].lo[axis]);
        for (int k = 0; k < width; ++k) put_f32(out, node.child_bounds[k].hi[axis]);
    }
    if (node.type == NodeType::kInner) {
        for (int k = 0; k < width; ++k) put_u32(out, (uint32_t)node.child[k]);
    } else {
        put_u32(out, node.prim_offset);
        put_u32(out, node.prim_count);
        for (int k = 2; k < width; ++k) put_u32(out, 0);
    }
    out.push_back(type_byte(node.type, node.prim_count));
    out.resize(total, 0);
    return out;
}

std::vector<uint8_t> serialize_node(const CompNode& node, int width) {
    const size_t total = node_byte_size(width, true);
    std::vector<uint8_t> out;
    out.reserve(total);
    for (int axis = 0; axis < 3; ++axis) {
        for (int k = 0; k < width; ++k) out.push_back(node.child_box[k].lo[axis]);
        for (int k = 0; k < width; ++k) out.push_back(node.child_box[k].hi[axis]);
    }
    const size_t union_bytes = (size_t)width * 4;
    if (node.type == NodeType::kInner) {
        for (int k = 0; k < width; ++k) put_u32(out, (uint32_t)node.child[k]);
    } else if (node.type == NodeType::kInlineLeaf) {
        size_t written = 0;
        for (uint32_t t = 0; t < node.prim_count; ++t, written += 9)
            out.insert(out.end(), node.inline_tris[t].v.begin(), node.inline_tris[t].v.end());
        out.resize(out.size() + (union_bytes - written), 0);
    } else {
        put_u32(out, node.prim_offset);
        put_u32(out, node.prim_count);
        for (int k = 2; k < width; ++k) put_u32(out, 0);
    }
    for (int axis = 0; axis < 3; ++axis) put_u32(out, (uint32_t)node.frame.origin[axis]);
    for (int axis = 0; axis < 3; ++axis) out.push_back((uint8_t)node.frame.exp[axis]);
    out.push_back(type_byte(node.type, node.prim_count));
    out.resize(total, 0);
    return out;
}

// ---------------------------------------------------------------------------
// Two-pass compression
// ---------------------------------------------------------------------------

namespace {

// Exact per-axis check that [lo, hi] quantizes into [0, 255] for a frame
// whose real origin is origin_cells * 2^origin_exp.
bool axis_fits(int128 origin_cells, int origin_exp, int exp, double lo, double hi) {
    int64_t m = 0;
    int s = 0;
    // origin in units of 2^exp.
    const int128 origin = checked_shl(origin_cells, origin_exp - exp);
    detail::decompose(lo, m, s);
    if (detail::floor_shift(m, s - exp) - origin < 0) return false;
    detail::decompose(hi, m, s);
    if (detail::ceil_shift(m, s - exp) - origin > 255) return false;
    return true;
}

// Per-node bounds of everything the node's frame must cover: for inner
// nodes the union of child slot boxes, for leaves the triangle bounds.
std::vector<Aabb> content_bounds(const WideTree& wide) {
    std::vector<Aabb> content(wide.nodes.size());
    for (size_t i = 0; i < wide.nodes.size(); ++i) {
        const WideNode& node = wide.nodes[i];
        Aabb b;
        if (node.type == NodeType::kInner) {
            for (int k = 0; k < wide.width; ++k)
                if (node.child[k] >= 0) b.expand(node.child_bounds[k]);
        } else {
            for (uint32_t t = node.prim_offset; t < node.prim_offset + node.prim_count; ++t)
                b.expand(wide.triangles[t].bounds());
        }
        content[i] = b;
    }
    return content;
}

// Assign frames top-down. Scales start from target and are raised per axis
// where the snapped origin would push coordinates past 255; for non-root
// nodes the parent scale is always a fitting upper bound.
std::vector<QuantFrame> assign_frames(const WideTree& wide, const std::vector<Aabb>& content,
                                      const std::vector<std::array<int, 3>>& target,
                                      std::vector<std::array<int, 3>>& used) {
    const size_t n = wide.nodes.size();
    std::vector<QuantFrame> frames(n);
    used.assign(n, {0, 0, 0});

    for (int axis = 0; axis < 3; ++axis) {
        int e = target[0][axis];
        int32_t origin = compute_root_origin(content[0].lo[axis], e);
        while (!axis_fits(origin, e, e, content[0].lo[axis], content[0].hi[axis])) {
            ++e;
            origin = compute_root_origin(content[0].lo[axis], e);
        }
        frames[0].origin[axis] = origin;
        frames[0].exp[axis] = (int8_t)e;
        used[0][axis] = e;
    }

    // Children always carry larger indices, so one forward sweep suffices.
    for (size_t i = 0; i < n; ++i) {
        const WideNode& node = wide.nodes[i];
        if (node.type != NodeType::kInner) continue;
        for (int k = 0; k < wide.width; ++k) {
            const int32_t c = node.child[k];
            if (c < 0) continue;
            const QBox slot = quantize_bounds(frames[i], node.child_bounds[k].lo,
                                              node.child_bounds[k].hi);
            std::array<int, 3> cand{};
            for (int axis = 0; axis < 3; ++axis) {
                int e = std::min(target[c][axis], used[i][axis]);
                const int128 origin_cells = (int128)frames[i].origin[axis] + slot.lo[axis];
                while (e < used[i][axis] &&
                       !axis_fits(origin_cells, used[i][axis], e, content[c].lo[axis],
                                  content[c].hi[axis])) {
                    ++e;
                }
                if (!axis_fits(origin_cells, used[i][axis], e, content[c].lo[axis],
                               content[c].hi[axis]))
                    throw std::runtime_error("compress: child frame does not fit at parent scale");
                cand[axis] = e;
            }
            frames[c] = derive_child_frame(frames[i], slot, cand);
            used[c] = cand;
        }
    }
    return frames;
}

CompressedTree emit(const WideTree& wide, const std::vector<QuantFrame>& frames,
                    const std::array<int, 3>& leaf_exp, const CompressParams& params) {
    CompressedTree out;
    out.width = wide.width;
    out.leaf_exp = leaf_exp;
    out.prim_ids = wide.prim_ids;
    out.nodes.resize(wide.nodes.size());
    out.triangles.resize(wide.triangles.size());
    out.tri_leaf.assign(wide.triangles.size(), -1);

    int128 max_abs_vert = 0;
    int128 max_abs_box = 0;
    const size_t union_bytes = (size_t)wide.width * 4;

    for (size_t i = 0; i < wide.nodes.size(); ++i) {
        const WideNode& src = wide.nodes[i];
        CompNode& dst = out.nodes[i];
        dst.frame = frames[i];
        dst.type = src.type;
        dst.prim_offset = src.prim_offset;
        dst.prim_count = src.prim_count;

        for (int axis = 0; axis < 3; ++axis) {
            const int shift = frames[i].exp[axis] - leaf_exp[axis];
            if (shift < 0) throw std::runtime_error("compress: node finer than leaf grid");
            int128 reach = checked_shl((int128)std::abs((int64_t)frames[i].origin[axis]) + 256,
                                       shift);
            max_abs_box = std::max(max_abs_box, reach);
        }

        if (src.type == NodeType::kInner) {
            for (int k = 0; k < wide.width; ++k) {
                if (src.child[k] < 0) {
                    dst.child_box[k] = QBox::empty_sentinel();
                    continue;
                }
                dst.child[k] = src.child[k];
                dst.child_box[k] = quantize_bounds(frames[i], src.child_bounds[k].lo,
                                                   src.child_bounds[k].hi);
            }
            continue;
        }

        for (int axis = 0; axis < 3; ++axis) {
            const int128 o = frames[i].origin[axis];
            max_abs_vert = std::max({max_abs_vert, o < 0 ? -o : o,
                                     o + 255 < 0 ? -(o + 255) : o + 255});
        }
        for (uint32_t t = src.prim_offset; t < src.prim_offset + src.prim_count; ++t) {
            const Triangle& tri = wide.triangles[t];
            out.triangles[t] = quantize_triangle(frames[i], tri.v0, tri.v1, tri.v2);
            out.tri_leaf[t] = (int32_t)i;
        }
        if (params.inline_leaf_triangles && src.prim_count >= 1 &&
            (size_t)src.prim_count * 9 <= union_bytes) {
            dst.type = NodeType::kInlineLeaf;
            for (uint32_t t = 0; t < src.prim_count; ++t)
                dst.inline_tris[t] = out.triangles[src.prim_offset + t];
        }
    }

    out.r_tri = std::max(1, bit_length(max_abs_vert));
    out.r_box = std::max(1, bit_length(max_abs_box));
    return out;
}

} // namespace

CompressedTree compress(const WideTree& wide, const CompressParams& params) {
    if (wide.nodes.empty()) throw std::invalid_argument("compress: empty tree");
    const size_t n = wide.nodes.size();
    const std::vector<Aabb> content = content_bounds(wide);

    std::vector<std::array<int, 3>> natural(n);
    for (size_t i = 0; i < n; ++i)
        for (int axis = 0; axis < 3; ++axis)
            natural[i][axis] = compute_scale(content[i].lo[axis], content[i].hi[axis],
                                             params.zero_extent_scale);

    // Pass 1: frames from the per-node adaptive scales, full quantization.
    std::vector<std::array<int, 3>> used;
    std::vector<QuantFrame> frames = assign_frames(wide, content, natural, used);
    std::vector<std::array<int, 3>> leaf_scales;
    for (size_t i = 0; i < n; ++i)
        if (wide.nodes[i].type != NodeType::kInner) leaf_scales.push_back(used[i]);
    std::array<int, 3> finest{INT8_MAX, INT8_MAX, INT8_MAX};
    for (const auto& u : used)
        for (int axis = 0; axis < 3; ++axis) finest[axis] = std::min(finest[axis], u[axis]);
    (void)emit(wide, frames, finest, params); // pass-1 result superseded below

    // Pass 2: broadcast the coarsest leaf scale, propagate upward, requantize.
    std::array<int, 3> leaf_exp = broadcast_leaf_scales(leaf_scales);
    std::vector<std::array<int, 3>> target(n);
    while (true) {
        for (size_t ri = n; ri-- > 0;) {
            const WideNode& node = wide.nodes[ri];
            if (node.type != NodeType::kInner) {
                target[ri] = leaf_exp;
                continue;
            }
            target[ri] = natural[ri];
            for (int k = 0; k < wide.width; ++k)
                if (node.child[k] >= 0)
                    for (int axis = 0; axis < 3; ++axis)
                        target[ri][axis] = std::max(target[ri][axis], target[node.child[k]][axis]);
        }
        frames = assign_frames(wide, content, target, used);
        bool leaf_raised = false;
        for (size_t i = 0; i < n; ++i) {
            if (wide.nodes[i].type == NodeType::kInner) continue;
            for (int axis = 0; axis < 3; ++axis)
                if (used[i][axis] > leaf_exp[axis]) {
                    leaf_exp[axis] = used[i][axis];
                    leaf_raised = true;
                }
        }
        if (!leaf_raised) break;
    }
    return emit(wide, frames, leaf_exp, params);
}

// ---------------------------------------------------------------------------
// Hierarchy validation (exact integer arithmetic)
// ---------------------------------------------------------------------------

namespace {

// Compare a * 2^ea with b * 2^eb exactly, robust to large exponent gaps.
int cmp_scaled(int128 a, int ea, int128 b, int eb) {
    if (ea < eb) return -cmp_scaled(b, eb, a, ea);
    if (ea > eb) {
        const int shift = ea - eb;
        if (a == 0) return b > 0 ? -1 : (b < 0 ? 1 : 0);
        if (bit_length(a) + shift > 126) return a > 0 ? 1 : -1;
        a = a << shift;
    }
    return a < b ? -1 : (a > b ? 1 : 0);
}

int cmp_grid_double(int128 cells, int exp, double d) {
    int64_t m = 0;
    int s = 0;
    detail::decompose(d, m, s);
    return cmp_scaled(cells, exp, (int128)m, s);
}

} // namespace

std::vector<std::string> validate_hierarchy(const CompressedTree& tree, const WideTree& wide) {
    std::vector<std::string> violations;
    auto report = [&](size_t node, const std::string& what) {
        violations.push_back("node " + std::to_string(node) + ": " + what);
    };

    if (tree.nodes.size() != wide.nodes.size()) {
        violations.push_back("node count differs from source tree");
        return violations;
    }

    uint64_t covered = 0;
    for (size_t i = 0; i < tree.nodes.size(); ++i) {
        const CompNode& node = tree.nodes[i];
        const WideNode& src = wide.nodes[i];

        if (node.type == NodeType::kInner) {
            for (int k = 0; k < tree.width; ++k) {
                const int32_t c = node.child[k];
                if (c < 0) {
                    if (!node.child_box[k].is_empty_sentinel())
                        report(i, "empty slot without sentinel box");
                    continue;
                }
                const QBox& box = node.child_box[k];
                const CompNode& child = tree.nodes[c];
                for (int axis = 0; axis < 3; ++axis) {
                    if (box.lo[axis] > box.hi[axis]) {
                        report(i, "slot " + std::to_string(k) + " axis " + std::to_string(axis) +
                                      ": lo > hi on a used slot");
                        continue;
                    }
                    const int pe = node.frame.exp[axis];
                    const int128 slot_lo = (int128)node.frame.origin[axis] + box.lo[axis];
                    const int128 slot_hi = (int128)node.frame.origin[axis] + box.hi[axis];

                    // Conservativeness against the float child box.
                    if (cmp_grid_double(slot_lo, pe, src.child_bounds[k].lo[axis]) > 0)
                        report(i, "slot " + std::to_string(k) + ": quantized lo above float lo");
                    if (cmp_grid_double(slot_hi, pe, src.child_bounds[k].hi[axis]) < 0)
                        report(i, "slot " + std::to_string(k) + ": quantized hi below float hi");

                    // Scale monotonicity and origin derivation.
                    const int ce = child.frame.exp[axis];
                    if (ce > pe)
                        report(i, "child " + std::to_string(c) + ": coarser scale than parent");
                    if (cmp_scaled(child.frame.origin[axis], ce, slot_lo, pe) != 0)
                        report(i, "child " + std::to_string(c) + ": origin != quantized slot lo");

                    // Containment of the child's own content in the slot.
                    if (child.type == NodeType::kInner) {
                        for (int gk = 0; gk < tree.width; ++gk) {
                            if (child.child[gk] < 0) continue;
                            const QBox& gb = child.child_box[gk];
                            const int128 g_lo = (int128)child.frame.origin[axis] + gb.lo[axis];
                            const int128 g_hi = (int128)child.frame.origin[axis] + gb.hi[axis];
                            if (cmp_scaled(g_lo, ce, slot_lo, pe) < 0 ||
                                cmp_scaled(g_hi, ce, slot_hi, pe) > 0)
                                report(c, "child box extends beyond its slot in node " +
                                              std::to_string(i));
                        }
                    } else {
                        for (uint32_t t = child.prim_offset;
                             t < child.prim_offset + child.prim_count; ++t)
                            for (int v = 0; v < 3; ++v) {
                                const int128 coord = (int128)child.frame.origin[axis] +
                                                     tree.triangles[t].coord(v, axis);
                                if (cmp_scaled(coord, ce, slot_lo, pe) < 0 ||
                                    cmp_scaled(coord, ce, slot_hi, pe) > 0)
                                    report(c, "triangle vertex outside leaf slot");
                            }
                    }
                }
            }
        } else {
            for (int axis = 0; axis < 3; ++axis)
                if (node.frame.exp[axis] != tree.leaf_exp[axis])
                    report(i, "leaf scale differs from the broadcast leaf grid");
            if ((size_t)node.prim_offset + node.prim_count > tree.triangles.size())
                report(i, "triangle range outside pool");
            else
                covered += node.prim_count;
        }
    }
    if (covered != tree.triangles.size())
        violations.push_back("leaf ranges do not cover the triangle pool exactly");
    return violations;
}

} // namespace qbvh
