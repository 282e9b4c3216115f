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

#ifndef SDIQRNG_TOEPLITZ_H
#define SDIQRNG_TOEPLITZ_H

#include <cstdint>
#include <vector>

#include "sdiqrng/bits.h"

namespace sdiqrng {

/// An m_out x n_in binary Toeplitz matrix with entry (i, j) = seed[i + n_in - 1 - j].
/// The first row is seed[n_in-1 .. 0] read backwards, the first column is
/// seed[n_in-1 .. n_in+m_out-2].
struct ToeplitzSpec {
    uint64_t n_in = 0;
    uint64_t m_out = 0;
    BitBuffer seed;

    void validate() const;
    bool entry(uint64_t row, uint64_t col) const {
        return seed.get(row + n_in - 1 - col);
    }
};

uint64_t required_seed_length(uint64_t n_in, uint64_t m_out);

enum class ExtractMethod {
    /// Row-by-row GF(2) dot products straight from the matrix definition.
    Naive,
    /// The product is a slice of the GF(2)[z] polynomial product seed * input.
    Accelerated,
};

BitBuffer extract(const BitBuffer &input, const ToeplitzSpec &spec, ExtractMethod method = ExtractMethod::Accelerated);

struct SeedLedger {
    uint64_t bits_consumed_extraction = 0;
    uint64_t bits_consumed_test_selection = 0;
    uint64_t bits_produced = 0;
    int64_t net_expansion = 0;
};

/// Position (35 bits) plus state (2 bits) chosen for every test round.
inline constexpr uint64_t kTestSelectionBits = 37;

SeedLedger ledger(uint64_t n_test_states, uint64_t l_bits, uint64_t seed_len);

/// Block-wise extraction of a long raw sequence: each block of at most
/// block_bits input bits is hashed with a prefix of one shared seed.
struct ExtractionBlock {
    uint64_t offset = 0;
    uint64_t n_in = 0;
    uint64_t m_out = 0;
};

struct BlockPlan {
    std::vector<ExtractionBlock> blocks;
    uint64_t total_out = 0;
    uint64_t seed_length = 0;
};

/// Output of block k is floor(target*end_k/n_raw) - floor(target*start_k/n_raw)
/// bits, so the blocks add up to exactly `target`.
BlockPlan plan_blocks(uint64_t n_raw, uint64_t target, uint64_t block_bits);

BitBuffer extract_blocks(
    const BitBuffer &raw,
    const BlockPlan &plan,
    const BitBuffer &seed,
    ExtractMethod method = ExtractMethod::Accelerated);

}  // namespace sdiqrng

#endif
