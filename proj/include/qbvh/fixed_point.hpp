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

#ifndef QBVH_FIXED_POINT_HPP
#define QBVH_FIXED_POINT_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qbvh {

using int128 = __int128;
using uint128 = unsigned __int128;

/// Number of significant bits in |v| (0 for v == 0). Exact for any int128.
int bit_length(int128 v);

/// v << shift with overflow detection. Throws std::overflow_error if the
/// shifted value no longer fits the signed 128-bit backing integer.
int128 checked_shl(int128 v, int shift);

/// Exact signed fixed-point number in format (R.Q): R range bits, Q
/// fractional bits, represented value = val / 2^Q. The backing integer is
/// 128 bits wide; a value is valid when val is in [-2^(R+Q), 2^(R+Q)-1],
/// i.e. R+Q magnitude bits plus a sign bit. Construction validates the
/// format and arithmetic never wraps: every overflow of the backing width
/// or of the declared format is a hard error.
class FixedP {
public:
    /// Widest supported format: R+Q must not exceed this.
    static constexpr int kMaxFormatBits = 126;

    FixedP() = default;
    FixedP(int128 val, int range_bits, int frac_bits);

    int128 raw() const { return val_; }
    int range_bits() const { return r_; }
    int frac_bits() const { return q_; }

    bool is_zero() const { return val_ == 0; }
    bool is_negative() const { return val_ < 0; }
    /// True when val == -2^(R+Q), the one value excluded from multiplication.
    bool is_most_negative() const;

    /// Lossy conversion for reporting and shading; arithmetic never uses it.
    double to_double() const;

    /// Largest representable value of format (R.Q): val = 2^(R+Q)-1.
    static FixedP max_value(int range_bits, int frac_bits);

private:
    int128 val_ = 0;
    int16_t r_ = 0;
    int16_t q_ = 0;
};

/// (R1.Q1) +/- (R2.Q2) -> (max(R1,R2)+1).(max(Q1,Q2)); the lower-Q operand
/// is rescaled up first, so the result is exact.
FixedP fx_add(const FixedP& a, const FixedP& b);
FixedP fx_sub(const FixedP& a, const FixedP& b);

/// (R1.Q1) * (R2.Q2) -> (R1+R2).(Q1+Q2), exact. Operands equal to the
/// most-negative value of their format are rejected.
FixedP fx_mul(const FixedP& a, const FixedP& b);

/// (R1.Q1) / (R2.Q2) -> (R1+Q2).(R2+Q1): numerator = a.val << (b.Q + b.R),
/// quotient truncated toward zero. b must be nonzero.
FixedP fx_div(const FixedP& a, const FixedP& b);

/// Directional-rounding variants of fx_div used where a conservative
/// t-interval is required. Same format rules as fx_div.
FixedP fx_div_floor(const FixedP& a, const FixedP& b);
FixedP fx_div_ceil(const FixedP& a, const FixedP& b);

/// Exact upscale to newQ >= Q fractional bits; R unchanged, value identical.
FixedP fx_rescale(const FixedP& a, int new_frac_bits);

/// Exact value comparison across formats: -1, 0, +1.
int fx_cmp(const FixedP& a, const FixedP& b);

inline bool fx_less(const FixedP& a, const FixedP& b) { return fx_cmp(a, b) < 0; }

/// 3-vector of FixedP. Component formats may differ per axis; derived
/// formats follow the scalar propagation rules componentwise.
struct FxVec3 {
    FixedP x, y, z;
};

FxVec3 fx_add3(const FxVec3& a, const FxVec3& b);
FxVec3 fx_sub3(const FxVec3& a, const FxVec3& b);
FxVec3 fx_cross(const FxVec3& a, const FxVec3& b);
FixedP fx_dot(const FxVec3& a, const FxVec3& b);

} // namespace qbvh

#endif // QBVH_FIXED_POINT_HPP
