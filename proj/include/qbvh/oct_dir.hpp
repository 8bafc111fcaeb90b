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

#ifndef QBVH_OCT_DIR_HPP
#define QBVH_OCT_DIR_HPP

#include <cstdint>

#include "qbvh/fixed_point.hpp"

namespace qbvh {

/// A direction packed into 4 bytes as two signed 16-bit octahedral-map
/// coordinates. Coordinates are stored on a power-of-two grid with
/// frac_bits fractional bits (ix = round(px * 2^frac_bits)), so decoding
/// yields exact fixed-point components and re-encoding a decoded
/// direction reproduces the packed word bit for bit. frac_bits is
/// limited to [1, 14] by the int16 fields; the six axis directions are
/// represented exactly at every precision.
struct OctDir32 {
    uint32_t packed = 0;

    bool operator==(const OctDir32&) const = default;
};

/// Max fractional bits of the stored octahedral coordinates.
inline constexpr int kOctMaxFracBits = 14;

/// Encode a nonzero direction (need not be unit length). Throws
/// std::invalid_argument on a zero or non-finite vector.
OctDir32 oct_encode(double dx, double dy, double dz, int frac_bits);

/// Decode to a fixed-point direction with format (1.frac_bits) per
/// component; components are L1-normalized, |c| <= 1, not all zero.
FxVec3 oct_decode(OctDir32 dir, int frac_bits);

} // namespace qbvh

#endif // QBVH_OCT_DIR_HPP
