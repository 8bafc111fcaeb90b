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

#include <doctest.h>

#include "qbvh/fixed_point.hpp"
#include "support/oracles.hpp"

using namespace qbvh;
using test::BigRat;
using test::fx_value;
using test::to_big;

namespace {

// Random value strictly inside format (r.q), never the most-negative one.
FixedP random_fixed(test::TestRng& rng, int r, int q) {
    const int64_t bound = ((int64_t)1 << (r + q)) - 1;
    return FixedP(rng.range(-bound, bound), r, q);
}

} // namespace

TEST_CASE("addition and subtraction formats and values") {
    FixedP a(5, 4, 2), b(3, 4, 2);
    FixedP sum = fx_add(a, b);
    CHECK(sum.raw() == 8);
    CHECK(sum.range_bits() == 5);
    CHECK(sum.frac_bits() == 2);
    CHECK(sum.to_double() == 2.0);

    // Lower-Q operand is rescaled up before combining.
    FixedP c(1, 2, 1), d(1, 2, 2);
    FixedP mixed = fx_add(c, d);
    CHECK(mixed.raw() == 3);
    CHECK(mixed.range_bits() == 3);
    CHECK(mixed.frac_bits() == 2);
    CHECK(fx_value(mixed) == BigRat(3, 4));

    FixedP x(-23, 5, 3);
    FixedP zero = fx_sub(x, x);
    CHECK(zero.raw() == 0);
    CHECK(zero.range_bits() == x.range_bits() + 1);
    CHECK(zero.frac_bits() == x.frac_bits());
}

TEST_CASE("multiplication formats and values") {
    FixedP prod = fx_mul(FixedP(3, 2, 1), FixedP(2, 2, 1));
    CHECK(prod.raw() == 6);
    CHECK(prod.range_bits() == 4);
    CHECK(prod.frac_bits() == 2);
    CHECK(prod.to_double() == 1.5);

    FixedP neg = fx_mul(FixedP(-4, 3, 2), FixedP(6, 3, 2));
    CHECK(neg.raw() == -24);
    CHECK(neg.range_bits() == 6);
    CHECK(neg.frac_bits() == 4);
    CHECK(neg.to_double() == -1.5);

    FixedP z = fx_mul(FixedP(0, 1, 0), FixedP(77, 5, 3));
    CHECK(z.raw() == 0);
    CHECK(z.range_bits() == 6);
    CHECK(z.frac_bits() == 3);
}

TEST_CASE("division formats, truncation, and errors") {
    FixedP q = fx_div(FixedP(4, 2, 2), FixedP(8, 2, 2));
    CHECK(q.raw() == 8);
    CHECK(q.range_bits() == 4);
    CHECK(q.frac_bits() == 4);
    CHECK(q.to_double() == 0.5);

    FixedP x(13, 3, 2);
    FixedP self = fx_div(x, x);
    CHECK(fx_value(self) == BigRat(1));
    CHECK(self.range_bits() == x.range_bits() + x.frac_bits());
    CHECK(self.frac_bits() == x.range_bits() + x.frac_bits());

    FixedP third = fx_div(FixedP(1, 4, 0), FixedP(3, 4, 0));
    CHECK(third.raw() == 5); // (1 << 4) / 3 truncated
    CHECK(third.range_bits() == 4);
    CHECK(third.frac_bits() == 4);
    CHECK(third.to_double() == 0.3125);

    CHECK_THROWS_AS(fx_div(FixedP(1, 2, 0), FixedP(0, 2, 0)), std::domain_error);
}

TEST_CASE("rescale is an exact left shift") {
    FixedP up = fx_rescale(FixedP(3, 2, 1), 4);
    CHECK(up.raw() == 24);
    CHECK(up.range_bits() == 2);
    CHECK(up.frac_bits() == 4);
    CHECK(fx_value(up) == BigRat(3, 2));

    FixedP same = fx_rescale(FixedP(3, 2, 1), 1);
    CHECK(same.raw() == 3);

    FixedP negv = fx_rescale(FixedP(-1, 1, 0), 8);
    CHECK(negv.raw() == -256);
    CHECK(negv.range_bits() == 1);
    CHECK(negv.frac_bits() == 8);

    CHECK_THROWS_AS(fx_rescale(FixedP(3, 2, 4), 2), std::domain_error);
}

TEST_CASE("format and precondition errors") {
    CHECK_THROWS_AS(FixedP(256, 4, 4), std::overflow_error); // needs 9 bits
    CHECK_NOTHROW(FixedP(-256, 4, 4));                        // most-negative representable
    CHECK_NOTHROW(FixedP(255, 4, 4));
    CHECK_THROWS_AS(FixedP(1, -1, 0), std::domain_error);
    CHECK_THROWS_AS(FixedP(1, 100, 100), std::domain_error);

    // Most-negative operands are rejected for multiplication only.
    FixedP most_negative(-16, 2, 2);
    CHECK(most_negative.is_most_negative());
    CHECK_THROWS_AS(fx_mul(most_negative, FixedP(1, 2, 2)), std::domain_error);
    CHECK_THROWS_AS(fx_mul(FixedP(1, 2, 2), most_negative), std::domain_error);
    CHECK_NOTHROW(fx_add(most_negative, most_negative));

    // Backing-width overflow is a hard error, never a wrap.
    FixedP huge(((int128)1 << 120) - 1, 120, 0);
    CHECK_THROWS_AS(fx_mul(huge, huge), std::overflow_error);
    CHECK_THROWS_AS(fx_rescale(huge, 20), std::overflow_error);
}

TEST_CASE("randomized ops match the rational oracle exactly") {
    test::TestRng rng(0x5eed);
    for (int iter = 0; iter < 20000; ++iter) {
        const int r1 = (int)rng.range(0, 12), q1 = (int)rng.range(0, 12);
        const int r2 = (int)rng.range(0, 12), q2 = (int)rng.range(0, 12);
        FixedP a = random_fixed(rng, r1, q1);
        FixedP b = random_fixed(rng, r2, q2);

        FixedP sum = fx_add(a, b);
        CHECK(fx_value(sum) == fx_value(a) + fx_value(b));
        CHECK(sum.range_bits() == std::max(r1, r2) + 1);
        CHECK(sum.frac_bits() == std::max(q1, q2));

        FixedP diff = fx_sub(a, b);
        CHECK(fx_value(diff) == fx_value(a) - fx_value(b));

        FixedP prod = fx_mul(a, b);
        CHECK(fx_value(prod) == fx_value(a) * fx_value(b));
        CHECK(prod.range_bits() == r1 + r2);
        CHECK(prod.frac_bits() == q1 + q2);

        if (b.raw() != 0) {
            FixedP quot = fx_div(a, b);
            // Alg.-form truncation: numerator shifted by (b.Q + b.R), then
            // integer division toward zero.
            test::BigInt num = to_big(a.raw()) << (q2 + r2);
            test::BigInt expect = num / to_big(b.raw()); // cpp_int / truncates toward zero
            CHECK(to_big(quot.raw()) == expect);
            CHECK(quot.range_bits() == r1 + q2);
            CHECK(quot.frac_bits() == r2 + q1);
        }

        // Format soundness: |val| < 2^(R+Q) after every operation.
        for (const FixedP* v : {&sum, &diff, &prod})
            CHECK(bit_length(v->raw()) <= v->range_bits() + v->frac_bits());
    }
}

TEST_CASE("addition value-associativity at matched formats") {
    test::TestRng rng(0xa550c);
    for (int iter = 0; iter < 2000; ++iter) {
        FixedP a = random_fixed(rng, 8, (int)rng.range(0, 6));
        FixedP b = random_fixed(rng, 8, (int)rng.range(0, 6));
        FixedP c = random_fixed(rng, 8, (int)rng.range(0, 6));
        FixedP left = fx_add(fx_add(a, b), c);
        FixedP right = fx_add(a, fx_add(b, c));
        CHECK(fx_cmp(left, right) == 0);
        CHECK(fx_value(left) == fx_value(right));
    }
}

TEST_CASE("cross and dot products") {
    auto unit = [](int axis) {
        FxVec3 v{FixedP(0, 2, 0), FixedP(0, 2, 0), FixedP(0, 2, 0)};
        (axis == 0 ? v.x : axis == 1 ? v.y : v.z) = FixedP(1, 2, 0);
        return v;
    };
    FxVec3 ez = fx_cross(unit(0), unit(1));
    CHECK(ez.x.raw() == 0);
    CHECK(ez.y.raw() == 0);
    CHECK(ez.z.raw() == 1);
    CHECK(ez.z.range_bits() == 5); // a.R + b.R + 1
    CHECK(fx_dot(unit(0), unit(1)).raw() == 0);

    FxVec3 v123{FixedP(1, 3, 0), FixedP(2, 3, 0), FixedP(3, 3, 0)};
    FixedP d = fx_dot(v123, v123);
    CHECK(d.raw() == 14);
    CHECK(d.range_bits() == 8); // a.R + b.R + 2
    CHECK(fx_cmp(fx_dot(v123, v123), fx_dot(v123, v123)) == 0);

    test::TestRng rng(0xc405);
    for (int iter = 0; iter < 1000; ++iter) {
        FxVec3 a{random_fixed(rng, 10, 2), random_fixed(rng, 10, 2), random_fixed(rng, 10, 2)};
        FxVec3 b{random_fixed(rng, 10, 2), random_fixed(rng, 10, 2), random_fixed(rng, 10, 2)};

        FxVec3 cr = fx_cross(a, b);
        const BigRat ax = fx_value(a.x), ay = fx_value(a.y), az = fx_value(a.z);
        const BigRat bx = fx_value(b.x), by = fx_value(b.y), bz = fx_value(b.z);
        CHECK(fx_value(cr.x) == ay * bz - az * by);
        CHECK(fx_value(cr.y) == az * bx - ax * bz);
        CHECK(fx_value(cr.z) == ax * by - ay * bx);

        CHECK(fx_value(fx_dot(a, b)) == ax * bx + ay * by + az * bz);
        CHECK(fx_cmp(fx_dot(a, b), fx_dot(b, a)) == 0);

        FxVec3 self = fx_cross(a, a);
        CHECK(self.x.raw() == 0);
        CHECK(self.y.raw() == 0);
        CHECK(self.z.raw() == 0);
    }
}

TEST_CASE("exact comparison across formats") {
    CHECK(fx_cmp(FixedP(4, 3, 2), FixedP(2, 4, 1)) == 0);   // 1.0 == 1.0
    CHECK(fx_cmp(FixedP(5, 3, 2), FixedP(2, 4, 1)) > 0);    // 1.25 > 1.0
    CHECK(fx_cmp(FixedP(-5, 3, 2), FixedP(2, 4, 1)) < 0);
}
