// Copyright 2026 The sdiqrng Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sdiqrng/philox.h"

#include <cmath>
#include <set>

#include "gtest/gtest.h"

using namespace sdiqrng;

// Known-answer blocks. Reference generators that pre-increment their counter
// report these at counter c - 1.
TEST(philox, known_answers) {
    using B = Philox4x64::Block;
    ASSERT_EQ(
        Philox4x64::generate({0, 0, 0, 0}, {0, 0}),
        (B{0x16554d9eca36314cULL, 0xdb20fe9d672d0fdcULL, 0xd7e772cee186176bULL, 0x7e68b68aec7ba23bULL}));
    ASSERT_EQ(
        Philox4x64::generate({1, 0, 0, 0}, {0, 0}),
        (B{0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL, 0x1c8667a55d902e79ULL, 0x907d7a052fd5b4dcULL}));
    ASSERT_EQ(
        Philox4x64::generate({1, 0, 0, 0}, {0x0123456789abcdefULL, 0xfedcba9876543210ULL}),
        (B{0x2d2e7c09c193c5faULL, 0xd56c6aa2d11f06aaULL, 0x184fcdf7f5474a23ULL, 0x367832d087008054ULL}));
    ASSERT_EQ(
        Philox4x64::generate({6, 0, 0, 0}, {42, 7}),
        (B{0x3504a7246974976fULL, 0xaa43bf412a418704ULL, 0x9d827440575d0711ULL, 0xf014d54a08eb243bULL}));
}

TEST(philox, to_unit_range) {
    ASSERT_EQ(Philox4x64::to_unit(0), 0.0);
    ASSERT_LT(Philox4x64::to_unit(~uint64_t{0}), 1.0);
    ASSERT_EQ(Philox4x64::to_unit(uint64_t{1} << 63), 0.5);
}

TEST(philox, stream_is_deterministic_and_keyed) {
    PhiloxStream a(5, 1), b(5, 1), c(5, 2), d(6, 1);
    std::set<uint64_t> seen;
    for (int k = 0; k < 1000; ++k) {
        uint64_t va = a.next_u64();
        ASSERT_EQ(va, b.next_u64());
        ASSERT_NE(va, c.next_u64());
        ASSERT_NE(va, d.next_u64());
        seen.insert(va);
    }
    ASSERT_EQ(seen.size(), 1000u);
}

TEST(philox, stream_walks_block_words_in_order) {
    PhiloxStream s(42, 7);
    for (uint64_t ctr = 0; ctr < 8; ++ctr) {
        auto block = Philox4x64::generate({ctr, 0, 0, 0}, {42, 7});
        for (uint64_t w : block) {
            ASSERT_EQ(s.next_u64(), w);
        }
    }
}

TEST(philox, uniform_mean) {
    PhiloxStream s(9, 9);
    double sum = 0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        double u = s.uniform(-2, 4);
        ASSERT_GE(u, -2);
        ASSERT_LT(u, 4);
        sum += u;
    }
    // Standard error of the mean is sqrt(3 / n).
    ASSERT_NEAR(sum / n, 1, 5 * std::sqrt(3.0 / n));
}
