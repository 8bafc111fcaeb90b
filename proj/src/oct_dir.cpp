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

#include "qbvh/oct_dir.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qbvh {

namespace {

void check_frac_bits(int frac_bits) {
    if (frac_bits < 1 || frac_bits > kOctMaxFracBits)
        throw std::domain_error("oct frac_bits must be in [1, 14]");
}

int sign_not_zero(double v) { return v >= 0.0 ? 1 : -1; }
int32_t sign_not_zero(int32_t v) { return v >= 0 ? 1 : -1; }

} // namespace

OctDir32 oct_encode(double dx, double dy, double dz, int frac_bits) {
    check_frac_bits(frac_bits);
    if (!std::isfinite(dx) || !std::isfinite(dy) || !std::isfinite(dz))
        throw std::invalid_argument("oct_encode: non-finite direction");
    const double l1 = std::abs(dx) + std::abs(dy) + std::abs(dz);
    if (l1 == 0.0) throw std::invalid_argument("oct_encode: zero direction");

    double px = dx / l1;
    double py = dy / l1;
    if (dz < 0.0) {
        // Fold the lower hemisphere over the diagonals.
        const double ox = px;
        px = (1.0 - std::abs(py)) * sign_not_zero(ox);
        py = (1.0 - std::abs(ox)) * sign_not_zero(py);
    }
    const int32_t scale = 1 << frac_bits;
    int32_t ix = std::clamp((int32_t)std::llround(px * scale), -scale, scale);
    int32_t iy = std::clamp((int32_t)std::llround(py * scale), -scale, scale);
    // On the fold seam (the partner coordinate saturated) the decoded
    // component is exactly 0 and its stored sign is unrecoverable; store
    // the positive word so re-encoding a decoded direction is stable.
    if (ix < 0 && std::abs(iy) == scale) ix = -ix;
    if (iy < 0 && std::abs(ix) == scale) iy = -iy;
    return OctDir32{(uint32_t)(uint16_t)(int16_t)ix | ((uint32_t)(uint16_t)(int16_t)iy << 16)};
}

FxVec3 oct_decode(OctDir32 dir, int frac_bits) {
    check_frac_bits(frac_bits);
    const int32_t scale = 1 << frac_bits;
    int32_t ix = std::clamp((int32_t)(int16_t)(dir.packed & 0xffffu), -scale, scale);
    int32_t iy = std::clamp((int32_t)(int16_t)(dir.packed >> 16), -scale, scale);

    int32_t x = ix;
    int32_t y = iy;
    const int32_t z = scale - std::abs(ix) - std::abs(iy);
    if (z < 0) {
        x = (scale - std::abs(iy)) * sign_not_zero(ix);
        y = (scale - std::abs(ix)) * sign_not_zero(iy);
    }
    return {FixedP(x, 1, frac_bits), FixedP(y, 1, frac_bits), FixedP(z, 1, frac_bits)};
}

} // namespace qbvh
