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

#include "qbvh/metrics.hpp"

#include <cinttypes>
#include <cstdio>
#include <stdexcept>

namespace qbvh {

void TrafficStats::record(Traffic category, uint64_t bytes) {
    switch (category) {
        case Traffic::kNodeBounds: node_bounds += bytes; return;
        case Traffic::kTriangles: triangles += bytes; return;
        case Traffic::kRayLoads: ray_loads += bytes; return;
        case Traffic::kRayStores: ray_stores += bytes; return;
        case Traffic::kSrStack: sr_stack += bytes; return;
        case Traffic::kRsStack: rs_stack += bytes; return;
        case Traffic::kRayLists: ray_lists += bytes; return;
    }
    throw std::invalid_argument("TrafficStats::record: unknown category");
}

void TrafficStats::merge(const TrafficStats& other) {
    node_bounds += other.node_bounds;
    triangles += other.triangles;
    ray_loads += other.ray_loads;
    ray_stores += other.ray_stores;
    sr_stack += other.sr_stack;
    rs_stack += other.rs_stack;
    ray_lists += other.ray_lists;
    box_tests += other.box_tests;
    tri_tests += other.tri_tests;
}

double TrafficStats::ray_fraction() const {
    const uint64_t t = total();
    if (t == 0) return 0.0;
    return (double)(ray_loads + ray_stores + ray_lists) / (double)t;
}

std::string report_csv(std::span<const ConfigResult> rows) {
    if (rows.empty()) throw std::invalid_argument("report_csv: no configurations");

    size_t bounce_cols = 0;
    for (const ConfigResult& row : rows)
        bounce_cols = std::max(bounce_cols, row.bounce_totals.size());

    std::string out = "config,scene,nodeBounds,triangles,rayLoads,rayStores,srStack,rsStack,"
                      "rayLists,total,rayPct,boxTests,triTests";
    for (size_t b = 0; b < bounce_cols; ++b) out += ",bounce" + std::to_string(b);
    out += "\n";

    char buf[64];
    for (const ConfigResult& row : rows) {
        const TrafficStats& s = row.stats;
        out += row.label + "," + row.scene;
        for (uint64_t v : {s.node_bounds, s.triangles, s.ray_loads, s.ray_stores, s.sr_stack,
                           s.rs_stack, s.ray_lists, s.total()}) {
            std::snprintf(buf, sizeof buf, ",%" PRIu64, v);
            out += buf;
        }
        std::snprintf(buf, sizeof buf, ",%.2f", 100.0 * s.ray_fraction());
        out += buf;
        std::snprintf(buf, sizeof buf, ",%" PRIu64 ",%" PRIu64, s.box_tests, s.tri_tests);
        out += buf;
        for (size_t b = 0; b < bounce_cols; ++b) {
            const uint64_t v = b < row.bounce_totals.size() ? row.bounce_totals[b] : 0;
            std::snprintf(buf, sizeof buf, ",%" PRIu64, v);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

} // namespace qbvh
