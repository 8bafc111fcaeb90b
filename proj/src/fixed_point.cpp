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

#include "qbvh/fixed_point.hpp"

#include <algorithm>
#include <cmath>

namespace qbvh {

namespace {

constexpr int128 kInt128Max = (int128)(~(uint128)0 >> 1);
constexpr int128 kInt128Min = -kInt128Max - 1;

uint128 abs_u128(int128 v) {
    return v < 0 ? (uint128)0 - (uint128)v : (uint128)v;
}

[[noreturn]] void throw_overflow(const char* what) {
    throw std::overflow_error(std::string("fixed-point overflow: ") + what);
}

} // namespace

int bit_length(int128 v) {
    uint128 m = abs_u128(v);
    int bits = 0;
    uint64_t hi = (uint64_t)(m >> 64);
    if (hi != 0) {
        bits = 128 - __builtin_clzll(hi);
    } else {
        uint64_t lo = (uint64_t)m;
        bits = lo != 0 ? 64 - __builtin_clzll(lo) : 0;
    }
    return bits;
}

int128 checked_shl(int128 v, int shift) {
    if (shift < 0) throw std::domain_error("checked_shl: negative shift");
    if (v == 0 || shift == 0) return v;
    if (bit_length(v) + shift > 127) throw_overflow("shift exceeds 128-bit backing");
    return v << shift;
}

FixedP::FixedP(int128 val, int range_bits, int frac_bits)
    : val_(val), r_((int16_t)range_bits), q_((int16_t)frac_bits) {
    if (range_bits < 0 || frac_bits < 0)
        throw std::domain_error("FixedP: R and Q must be non-negative");
    if (range_bits + frac_bits > kMaxFormatBits)
        throw std::domain_error("FixedP: format exceeds backing width");
    const uint128 bound = (uint128)1 << (range_bits + frac_bits);
    if (val >= 0 ? (uint128)val >= bound : abs_u128(val) > bound)
        throw_overflow("value does not fit declared (R.Q) format");
}

bool FixedP::is_most_negative() const {
    return val_ < 0 && abs_u128(val_) == (uint128)1 << (r_ + q_);
}

double FixedP::to_double() const {
    return std::ldexp((double)val_, -q_);
}

FixedP FixedP::max_value(int range_bits, int frac_bits) {
    if (range_bits + frac_bits > kMaxFormatBits || range_bits + frac_bits < 1)
        throw std::domain_error("FixedP::max_value: bad format");
    return FixedP(((int128)1 << (range_bits + frac_bits)) - 1, range_bits, frac_bits);
}

FixedP fx_rescale(const FixedP& a, int new_frac_bits) {
    if (new_frac_bits < a.frac_bits())
        throw std::domain_error("fx_rescale: downscaling is not exact");
    if (new_frac_bits == a.frac_bits()) return a;
    int shift = new_frac_bits - a.frac_bits();
    return FixedP(checked_shl(a.raw(), shift), a.range_bits(), new_frac_bits);
}

namespace {

FixedP add_sub(const FixedP& a, const FixedP& b, bool subtract) {
    const int r = std::max(a.range_bits(), b.range_bits()) + 1;
    const int q = std::max(a.frac_bits(), b.frac_bits());
    int128 av = checked_shl(a.raw(), q - a.frac_bits());
    int128 bv = checked_shl(b.raw(), q - b.frac_bits());
    if (subtract) bv = -bv; // bv > int128 min after checked_shl of a valid value
    if ((bv > 0 && av > kInt128Max - bv) || (bv < 0 && av < kInt128Min - bv))
        throw_overflow("addition exceeds 128-bit backing");
    return FixedP(av + bv, r, q);
}

} // namespace

FixedP fx_add(const FixedP& a, const FixedP& b) { return add_sub(a, b, false); }
FixedP fx_sub(const FixedP& a, const FixedP& b) { return add_sub(a, b, true); }

FixedP fx_mul(const FixedP& a, const FixedP& b) {
    if (a.is_most_negative() || b.is_most_negative())
        throw std::domain_error("fx_mul: most-negative operand rejected");
    const int r = a.range_bits() + b.range_bits();
    const int q = a.frac_bits() + b.frac_bits();
    if (bit_length(a.raw()) + bit_length(b.raw()) > 127)
        throw_overflow("product exceeds 128-bit backing");
    return FixedP(a.raw() * b.raw(), r, q);
}

namespace {

enum class RoundDir { kTrunc, kFloor, kCeil };

FixedP div_impl(const FixedP& a, const FixedP& b, RoundDir dir) {
    if (b.raw() == 0) throw std::domain_error("fx_div: division by zero");
    const int r = a.range_bits() + b.frac_bits();
    const int q = b.range_bits() + a.frac_bits();
    int128 num = checked_shl(a.raw(), b.frac_bits() + b.range_bits());
    int128 den = b.raw();
    int128 quot = num / den; // truncates toward zero
    int128 rem = num % den;
    if (rem != 0) {
        const bool negative = (num < 0) != (den < 0);
        if (dir == RoundDir::kFloor && negative) quot -= 1;
        if (dir == RoundDir::kCeil && !negative) quot += 1;
    }
    return FixedP(quot, r, q);
}

} // namespace

FixedP fx_div(const FixedP& a, const FixedP& b) { return div_impl(a, b, RoundDir::kTrunc); }
FixedP fx_div_floor(const FixedP& a, const FixedP& b) { return div_impl(a, b, RoundDir::kFloor); }
FixedP fx_div_ceil(const FixedP& a, const FixedP& b) { return div_impl(a, b, RoundDir::kCeil); }

int fx_cmp(const FixedP& a, const FixedP& b) {
    const int q = std::max(a.frac_bits(), b.frac_bits());
    int128 av = checked_shl(a.raw(), q - a.frac_bits());
    int128 bv = checked_shl(b.raw(), q - b.frac_bits());
    return av < bv ? -1 : (av > bv ? 1 : 0);
}

FxVec3 fx_add3(const FxVec3& a, const FxVec3& b) {
    return {fx_add(a.x, b.x), fx_add(a.y, b.y), fx_add(a.z, b.z)};
}

FxVec3 fx_sub3(const FxVec3& a, const FxVec3& b) {
    return {fx_sub(a.x, b.x), fx_sub(a.y, b.y), fx_sub(a.z, b.z)};
}

FxVec3 fx_cross(const FxVec3& a, const FxVec3& b) {
    return {fx_sub(fx_mul(a.y, b.z), fx_mul(a.z, b.y)),
            fx_sub(fx_mul(a.z, b.x), fx_mul(a.x, b.z)),
            fx_sub(fx_mul(a.x, b.y), fx_mul(a.y, b.x))};
}

FixedP fx_dot(const FxVec3& a, const FxVec3& b) {
    return fx_add(fx_add(fx_mul(a.x, b.x), fx_mul(a.y, b.y)), fx_mul(a.z, b.z));
}

} // namespace qbvh
