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

#ifndef QBVH_METRICS_HPP
#define QBVH_METRICS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qbvh {

enum class Traffic {
    kNodeBounds,
    kTriangles,
    kRayLoads,
    kRayStores,
    kSrStack,
    kRsStack,
    kRayLists,
};

/// Byte-exact traffic accumulator plus intersection counters. Accumulators
/// are single-owner; merge() is the only cross-thread operation.
struct TrafficStats {
    uint64_t node_bounds = 0;
    uint64_t triangles = 0;
    uint64_t ray_loads = 0;
    uint64_t ray_stores = 0;
    uint64_t sr_stack = 0;
    uint64_t rs_stack = 0;
    uint64_t ray_lists = 0;
    uint64_t box_tests = 0; // per-child slab evaluations
    uint64_t tri_tests = 0;

    void record(Traffic category, uint64_t bytes);
    void merge(const TrafficStats& other);

    /// Sum of all byte categories (counters excluded).
    uint64_t total() const {
        return node_bounds + triangles + ray_loads + ray_stores + sr_stack + rs_stack + ray_lists;
    }
    /// Ray access traffic (loads + stores + lists) as a fraction of total.
    double ray_fraction() const;

    bool operator==(const TrafficStats&) const = default;
};

/// One CSV row: a configuration's totals plus optional per-bounce totals.
struct ConfigResult {
    std::string label;
    std::string scene;
    TrafficStats stats;
    std::vector<uint64_t> bounce_totals; // total bytes per bounce, when path tracing
};

/// CSV with a fixed column order (see README): label, scene, the seven
/// byte categories, total, ray traffic percentage, the two intersection
/// counters, then one column per bounce when present.
std::string report_csv(std::span<const ConfigResult> rows);

} // namespace qbvh

#endif // QBVH_METRICS_HPP
