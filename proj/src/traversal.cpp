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

#include "qbvh/traversal.hpp"

#include <algorithm>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace qbvh {

// ---------------------------------------------------------------------------
// Ray records
// ---------------------------------------------------------------------------

std::array<uint8_t, 32> serialize_ray_record(const RayRecord& record) {
    std::array<uint8_t, 32> out{};
    size_t pos = 0;
    auto put = [&](uint32_t v) {
        out[pos++] = (uint8_t)(v & 0xff);
        out[pos++] = (uint8_t)((v >> 8) & 0xff);
        out[pos++] = (uint8_t)((v >> 16) & 0xff);
        out[pos++] = (uint8_t)((v >> 24) & 0xff);
    };
    put(record.t_bits);
    put(record.id);
    put(record.u_bits);
    put(record.v_bits);
    for (int axis = 0; axis < 3; ++axis) put((uint32_t)record.origin[axis]);
    put(record.dir);
    return out;
}

namespace {

uint32_t float_bits(float f) {
    uint32_t v;
    std::memcpy(&v, &f, 4);
    return v;
}

} // namespace

RayRecord to_record(const FxRayState& state, const CompressedTree& tree) {
    RayRecord r;
    r.t_bits = float_bits((float)state.t.to_double());
    r.id = state.prim == kNoHit ? kNoHit : tree.prim_ids[state.prim];
    r.u_bits = state.u_bits;
    r.v_bits = state.v_bits;
    for (int axis = 0; axis < 3; ++axis) {
        const FixedP& o = axis == 0 ? state.origin.x : (axis == 1 ? state.origin.y : state.origin.z);
        r.origin[axis] = (int32_t)o.raw();
    }
    r.dir = state.dir_word.packed;
    return r;
}

RayRecord to_record(const FloatRayState& state, const WideTree& tree) {
    RayRecord r;
    r.t_bits = float_bits(state.ray.t_max);
    r.id = state.prim == kNoHit ? kNoHit : tree.prim_ids[state.prim];
    r.u_bits = float_bits(state.u);
    r.v_bits = float_bits(state.v);
    for (int axis = 0; axis < 3; ++axis) r.origin[axis] = (int32_t)float_bits(state.ray.origin[axis]);
    r.dir = oct_encode(state.ray.dir.x, state.ray.dir.y, state.ray.dir.z, kOctMaxFracBits).packed;
    return r;
}

// ---------------------------------------------------------------------------
// Ray quantization
// ---------------------------------------------------------------------------

FxRayState ray_to_fixed(const FloatRay& ray, const CompressedTree& tree,
                        const RayPrecision& prec) {
    if (prec.r_org < 0 || prec.q_org < 0 || prec.r_org + prec.q_org > 31)
        throw std::domain_error("ray_to_fixed: r_org + q_org must fit a 32-bit origin field");

    FxRayState state;
    state.dir_word = oct_encode(ray.dir.x, ray.dir.y, ray.dir.z, prec.q_dir);
    const FxVec3 decoded = oct_decode(state.dir_word, prec.q_dir);

    const int e_ref = *std::max_element(tree.leaf_exp.begin(), tree.leaf_exp.end());
    const int e_min = *std::min_element(tree.leaf_exp.begin(), tree.leaf_exp.end());
    const int r_dir = 1 + (e_ref - e_min);
    for (int axis = 0; axis < 3; ++axis) {
        const FixedP& d = axis == 0 ? decoded.x : (axis == 1 ? decoded.y : decoded.z);
        FixedP& out = axis == 0 ? state.dir.x : (axis == 1 ? state.dir.y : state.dir.z);
        out = FixedP(checked_shl(d.raw(), e_ref - tree.leaf_exp[axis]), r_dir, prec.q_dir);
    }

    const int128 bound = (int128)1 << (prec.r_org + prec.q_org);
    for (int axis = 0; axis < 3; ++axis) {
        if (!std::isfinite(ray.origin[axis]))
            throw std::invalid_argument("ray_to_fixed: non-finite origin");
        int64_t m = 0;
        int s = 0;
        detail::decompose(ray.origin[axis], m, s);
        const int128 val = detail::round_shift(m, s + prec.q_org - tree.leaf_exp[axis]);
        if (val < -bound || val >= bound)
            throw std::invalid_argument("ray_to_fixed: origin outside representable world");
        FixedP& out = axis == 0 ? state.origin.x : (axis == 1 ? state.origin.y : state.origin.z);
        out = FixedP(val, prec.r_org, prec.q_org);
    }

    const int r_t = std::max(tree.r_box, prec.r_org) + 1 + prec.q_dir;
    const int q_t = r_dir + prec.q_org;
    state.t = FixedP::max_value(r_t, q_t);
    return state;
}

// ---------------------------------------------------------------------------
// Traversal engines (shared skeleton over fixed-point and float contexts)
// ---------------------------------------------------------------------------

namespace {

struct FxContext {
    using State = FxRayState;
    using Node = CompNode;
    using TEntry = FixedP;

    const CompressedTree& tree;
    FxBitUsage* usage = nullptr;

    int width() const { return tree.width; }
    size_t node_bytes() const { return node_byte_size(tree.width, true); }
    size_t tri_bytes() const { return 9; }
    const Node& node(int32_t i) const { return tree.nodes[i]; }
    static bool is_inner(const Node& n) { return n.type == NodeType::kInner; }

    static bool less(const TEntry& a, const TEntry& b) { return fx_less(a, b); }

    bool box_test(const Node& n, int k, const State& s, TEntry& t_entry) const {
        FxVec3 lo, hi;
        for (int axis = 0; axis < 3; ++axis) {
            const int shift = n.frame.exp[axis] - tree.leaf_exp[axis];
            const int128 base = (int128)n.frame.origin[axis];
            FixedP& l = axis == 0 ? lo.x : (axis == 1 ? lo.y : lo.z);
            FixedP& h = axis == 0 ? hi.x : (axis == 1 ? hi.y : hi.z);
            l = FixedP(checked_shl(base + n.child_box[k].lo[axis], shift), tree.r_box, 0);
            h = FixedP(checked_shl(base + n.child_box[k].hi[axis], shift), tree.r_box, 0);
        }
        const FxRay view{s.origin, s.dir, s.t};
        const FxBoxHit hit = ray_box_fixed_entry(view, lo, hi);
        t_entry = hit.t_entry;
        return hit.hit;
    }

    void leaf_test(const Node& n, State& s, TrafficStats& stats, bool charge_stores) const {
        FxVec3 origin;
        for (int axis = 0; axis < 3; ++axis) {
            FixedP& o = axis == 0 ? origin.x : (axis == 1 ? origin.y : origin.z);
            o = FixedP(n.frame.origin[axis], tree.r_tri, 0);
        }
        const bool inline_tris = n.type == NodeType::kInlineLeaf;
        for (uint32_t t = n.prim_offset; t < n.prim_offset + n.prim_count; ++t) {
            if (!inline_tris) stats.record(Traffic::kTriangles, tri_bytes());
            ++stats.tri_tests;
            const QTriangle& tri =
                inline_tris ? n.inline_tris[t - n.prim_offset] : tree.triangles[t];
            const FxRay view{s.origin, s.dir, s.t};
            const FxTriHit hit = ray_tri_fixed(view, tri, origin, tree.r_tri, true, usage);
            if (!hit.hit) continue;
            const int cmp = fx_cmp(hit.dist, s.t);
            if (cmp < 0 || (cmp == 0 && t < s.prim)) {
                s.t = hit.dist;
                s.prim = t;
                s.u_bits = hit.u_bits;
                s.v_bits = hit.v_bits;
                if (charge_stores) stats.record(Traffic::kRayStores, 16);
            }
        }
    }
};

struct FloatContext {
    using State = FloatRayState;
    using Node = WideNode;
    using TEntry = float;

    const WideTree& tree;

    int width() const { return tree.width; }
    size_t node_bytes() const { return node_byte_size(tree.width, false); }
    size_t tri_bytes() const { return 36; }
    const Node& node(int32_t i) const { return tree.nodes[i]; }
    static bool is_inner(const Node& n) { return n.type == NodeType::kInner; }

    static bool less(TEntry a, TEntry b) { return a < b; }

    bool box_test(const Node& n, int k, const State& s, TEntry& t_entry) const {
        const FloatBoxHit hit = ray_box_float_entry(s.ray, n.child_bounds[k]);
        t_entry = hit.t_entry;
        return hit.hit;
    }

    void leaf_test(const Node& n, State& s, TrafficStats& stats, bool charge_stores) const {
        for (uint32_t t = n.prim_offset; t < n.prim_offset + n.prim_count; ++t) {
            stats.record(Traffic::kTriangles, tri_bytes());
            ++stats.tri_tests;
            const FloatTriHit hit = ray_tri_float(s.ray, tree.triangles[t], true);
            if (!hit.hit) continue;
            if (hit.t < s.ray.t_max || (hit.t == s.ray.t_max && t < s.prim)) {
                s.ray.t_max = hit.t;
                s.prim = t;
                s.u = hit.u;
                s.v = hit.v;
                if (charge_stores) stats.record(Traffic::kRayStores, 16);
            }
        }
    }
};

template <class Ctx>
void traverse_single_impl(typename Ctx::State& state, const Ctx& ctx, TrafficStats& stats) {
    stats.record(Traffic::kRayLoads, 32); // whole ray record, once per ray

    struct Candidate {
        typename Ctx::TEntry t_entry;
        int32_t node;
    };
    std::vector<int32_t> stack;
    std::array<Candidate, kMaxWidth> hits;

    stack.push_back(0);
    stats.record(Traffic::kSrStack, 4);
    while (!stack.empty()) {
        const int32_t idx = stack.back();
        stack.pop_back();
        stats.record(Traffic::kSrStack, 4);
        stats.record(Traffic::kNodeBounds, ctx.node_bytes());
        const typename Ctx::Node& node = ctx.node(idx);

        if (!Ctx::is_inner(node)) {
            ctx.leaf_test(node, state, stats, false);
            continue;
        }
        int hit_count = 0;
        for (int k = 0; k < ctx.width(); ++k) {
            if (node.child[k] < 0) continue;
            ++stats.box_tests;
            typename Ctx::TEntry t_entry;
            if (ctx.box_test(node, k, state, t_entry)) hits[hit_count++] = {t_entry, node.child[k]};
        }
        std::stable_sort(hits.begin(), hits.begin() + hit_count,
                         [](const Candidate& a, const Candidate& b) {
                             return Ctx::less(a.t_entry, b.t_entry);
                         });
        // Push far-to-near so the nearest child pops first.
        for (int i = hit_count - 1; i >= 0; --i) {
            stack.push_back(hits[i].node);
            stats.record(Traffic::kSrStack, 4);
        }
    }
}

template <class Ctx>
void traverse_stream_impl(std::span<typename Ctx::State> states, const Ctx& ctx,
                          TrafficStats& stats) {
    if (states.empty()) throw std::invalid_argument("traverse_stream: no rays");

    struct StreamEntry {
        int32_t node = 0;
        uint32_t list_offset = 0;
        uint32_t ray_count = 0;
        uint32_t progress = 0; // processed-children bitmask (layout only)
    };
    std::vector<uint32_t> arena(states.size());
    for (uint32_t i = 0; i < states.size(); ++i) arena[i] = i;

    std::vector<StreamEntry> stack;
    stack.push_back({0, 0, (uint32_t)states.size(), 0});
    stats.record(Traffic::kRsStack, 12);

    std::array<std::vector<uint32_t>, kMaxWidth> lists;
    while (!stack.empty()) {
        const StreamEntry entry = stack.back();
        stack.pop_back();
        stats.record(Traffic::kRsStack, 12);
        stats.record(Traffic::kNodeBounds, ctx.node_bytes()); // once per entry
        const typename Ctx::Node& node = ctx.node(entry.node);

        if (!Ctx::is_inner(node)) {
            for (uint32_t i = entry.list_offset; i < entry.list_offset + entry.ray_count; ++i) {
                stats.record(Traffic::kRayLists, 4);
                stats.record(Traffic::kRayLoads, 32);
                ctx.leaf_test(node, states[arena[i]], stats, true);
            }
            continue;
        }

        for (int k = 0; k < ctx.width(); ++k) lists[k].clear();
        for (uint32_t i = entry.list_offset; i < entry.list_offset + entry.ray_count; ++i) {
            const uint32_t ray = arena[i];
            stats.record(Traffic::kRayLists, 4);
            stats.record(Traffic::kRayLoads, 32);
            for (int k = 0; k < ctx.width(); ++k) {
                if (node.child[k] < 0) continue;
                ++stats.box_tests;
                typename Ctx::TEntry t_entry;
                if (ctx.box_test(node, k, states[ray], t_entry)) {
                    lists[k].push_back(ray);
                    stats.record(Traffic::kRayLists, 4);
                }
            }
        }
        // Fixed child-index processing order: push in reverse so child 0 pops first.
        for (int k = ctx.width() - 1; k >= 0; --k) {
            if (lists[k].empty()) continue;
            StreamEntry child;
            child.node = node.child[k];
            child.list_offset = (uint32_t)arena.size();
            child.ray_count = (uint32_t)lists[k].size();
            arena.insert(arena.end(), lists[k].begin(), lists[k].end());
            stack.push_back(child);
            stats.record(Traffic::kRsStack, 12);
        }
    }
}

} // namespace

void traverse_single(FxRayState& state, const CompressedTree& tree, const RayPrecision& prec,
                     TrafficStats& stats, FxBitUsage* usage) {
    (void)prec;
    traverse_single_impl(state, FxContext{tree, usage}, stats);
}

void traverse_single(FloatRayState& state, const WideTree& tree, TrafficStats& stats) {
    traverse_single_impl(state, FloatContext{tree}, stats);
}

void traverse_stream(std::span<FxRayState> states, const CompressedTree& tree,
                     const RayPrecision& prec, TrafficStats& stats, FxBitUsage* usage) {
    (void)prec;
    traverse_stream_impl(states, FxContext{tree, usage}, stats);
}

void traverse_stream(std::span<FloatRayState> states, const WideTree& tree,
                     TrafficStats& stats) {
    traverse_stream_impl(states, FloatContext{tree}, stats);
}

} // namespace qbvh
