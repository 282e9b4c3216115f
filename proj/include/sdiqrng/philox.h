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

#ifndef SDIQRNG_PHILOX_H
#define SDIQRNG_PHILOX_H

#include <array>
#include <cstdint>

namespace sdiqrng {

/// Philox4x64-10 counter-based generator (Salmon et al., SC'11). The output
/// block is a pure function of (key, counter), so any round of a simulation
/// can be regenerated independently of how the work was sharded.
class Philox4x64 {
   public:
    using Block = std::array<uint64_t, 4>;
    using Key = std::array<uint64_t, 2>;

    static Block generate(Block counter, Key key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            counter = single_round(counter, key);
        }
        return counter;
    }

    /// Top 53 bits mapped to [0, 1).
    static double to_unit(uint64_t x) {
        return static_cast<double>(x >> 11) * 0x1.0p-53;
    }

   private:
    static constexpr uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
    static constexpr uint64_t kMul1 = 0xCA5A826395121157ULL;
    static constexpr uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
    static constexpr uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

    static Block single_round(const Block &c, const Key &k) {
        unsigned __int128 p0 = static_cast<unsigned __int128>(kMul0) * c[0];
        unsigned __int128 p1 = static_cast<unsigned __int128>(kMul1) * c[2];
        uint64_t hi0 = static_cast<uint64_t>(p0 >> 64);
        uint64_t lo0 = static_cast<uint64_t>(p0);
        uint64_t hi1 = static_cast<uint64_t>(p1 >> 64);
        uint64_t lo1 = static_cast<uint64_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

/// Sequential stream over one Philox key, for code that just wants numbers.
class PhiloxStream {
   public:
    PhiloxStream(uint64_t seed, uint64_t stream) : key_{seed, stream} {
    }

    uint64_t next_u64() {
        if (index_ == 4) {
            block_ = Philox4x64::generate({counter_++, 0, 0, 0}, key_);
            index_ = 0;
        }
        return block_[index_++];
    }
    double next_unit() {
        return Philox4x64::to_unit(next_u64());
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_unit();
    }

   private:
    Philox4x64::Key key_;
    Philox4x64::Block block_{};
    uint64_t counter_ = 0;
    int index_ = 4;
};

}  // namespace sdiqrng

#endif
