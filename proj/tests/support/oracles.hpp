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
//
// Test-only oracles: arbitrary-precision rational arithmetic checks that
// stay independent of the fixed-point implementation they verify.

#ifndef QBVH_TESTS_SUPPORT_ORACLES_HPP
#define QBVH_TESTS_SUPPORT_ORACLES_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <optional>

#include "qbvh/fixed_point.hpp"
#include "qbvh/geom.hpp"

namespace qbvh::test {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt to_big(int128 v) {
    const bool neg = v < 0;
    uint128 m = neg ? (uint128)0 - (uint128)v : (uint128)v;
    BigInt out = (uint64_t)(m >> 64);
    out <<= 64;
    out += (uint64_t)m;
    return neg ? -out : out;
}

inline BigRat pow2(int e) {
    BigInt p = BigInt(1) << (e < 0 ? -e : e);
    return e < 0 ? BigRat(1, p) : BigRat(p);
}

/// Exact rational value of a fixed-point number: val / 2^Q.
inline BigRat fx_value(const FixedP& a) { return BigRat(to_big(a.raw())) * pow2(-a.frac_bits()); }

/// Deterministic generator for property tests (raw splitmix64 stream).
class TestRng {
public:
    explicit TestRng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    // Uniform in [lo, hi] inclusive.
    int64_t range(int64_t lo, int64_t hi) {
        return lo + (int64_t)(next() % (uint64_t)(hi - lo + 1));
    }

    double uniform() { return (double)(next() >> 11) * 0x1.0p-53; }

private:
    uint64_t state_;
};

/// Exact rational slab test over rational box/ray; mirrors the fixed-point
/// contract (t interval clipped to [0, inf), parallel handled explicitly).
struct RationalSlabResult {
    bool hit = false;
    BigRat t_min, t_max;
    bool bounded = false; // t_max was clipped by some axis
};

inline RationalSlabResult rational_slab(const std::array<BigRat, 3>& origin,
                                        const std::array<BigRat, 3>& dir,
                                        const std::array<BigRat, 3>& lo,
                                        const std::array<BigRat, 3>& hi) {
    RationalSlabResult r;
    r.t_min = 0;
    for (int axis = 0; axis < 3; ++axis) {
        if (dir[axis] == 0) {
            if (origin[axis] < lo[axis] || origin[axis] > hi[axis]) return r;
            continue;
        }
        BigRat t1 = (lo[axis] - origin[axis]) / dir[axis];
        BigRat t2 = (hi[axis] - origin[axis]) / dir[axis];
        if (dir[axis] < 0) std::swap(t1, t2);
        if (t1 > r.t_min) r.t_min = t1;
        if (!r.bounded || t2 < r.t_max) {
            r.t_max = t2;
            r.bounded = true;
        }
        if (r.bounded && r.t_min > r.t_max) return r;
    }
    r.hit = true;
    return r;
}

} // namespace qbvh::test

#endif // QBVH_TESTS_SUPPORT_ORACLES_HPP
