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

#include "sdiqrng/toeplitz.h"

#include <algorithm>
#include <string>

#include "sdiqrng/error.h"
#include "sdiqrng/gf2_poly.h"

namespace sdiqrng {

void ToeplitzSpec::validate() const {
    if (m_out == 0 || m_out > n_in) {
        throw Error(ErrorKind::InvalidLength, "Toeplitz output length must satisfy 1 <= m_out <= n_in");
    }
    if (seed.size() != n_in + m_out - 1) {
        throw Error(
            ErrorKind::InvalidLength,
            "Toeplitz seed has " + std::to_string(seed.size()) + " bits, expected " +
                std::to_string(n_in + m_out - 1));
    }
}

uint64_t required_seed_length(uint64_t n_in, uint64_t m_out) {
    if (m_out > n_in) {
        throw Error(ErrorKind::InvalidLength, "output length exceeds input length");
    }
    if (n_in == 0 || m_out == 0) {
        throw Error(ErrorKind::InvalidLength, "Toeplitz dimensions must be positive");
    }
    return n_in + m_out - 1;
}

namespace {

BitBuffer extract_naive(const BitBuffer &input, const ToeplitzSpec &spec) {
    BitBuffer out(spec.m_out);
    for (uint64_t i = 0; i < spec.m_out; ++i) {
        bool acc = false;
        for (uint64_t j = 0; j < spec.n_in; ++j) {
            acc ^= spec.entry(i, j) & input.get(j);
        }
        out.set(i, acc);
    }
    return out;
}

BitBuffer extract_accelerated(const BitBuffer &input, const ToeplitzSpec &spec) {
    // out[i] = sum_j seed[i + n - 1 - j] x[j] = coefficient n-1+i of seed(z) * x(z).
    auto product = gf2_poly_mul(spec.seed.words(), input.words());
    BitBuffer full = BitBuffer::from_words(std::move(product), spec.seed.size() + input.size());
    return full.slice(spec.n_in - 1, spec.m_out);
}

}  // namespace

BitBuffer extract(const BitBuffer &input, const ToeplitzSpec &spec, ExtractMethod method) {
    spec.validate();
    if (input.size() != spec.n_in) {
        throw Error(
            ErrorKind::InvalidLength,
            "input has " + std::to_string(input.size()) + " bits, Toeplitz matrix expects " +
                std::to_string(spec.n_in));
    }
    return method == ExtractMethod::Naive ? extract_naive(input, spec) : extract_accelerated(input, spec);
}

SeedLedger ledger(uint64_t n_test_states, uint64_t l_bits, uint64_t seed_len) {
    SeedLedger out;
    out.bits_consumed_extraction = seed_len;
    out.bits_consumed_test_selection = kTestSelectionBits * n_test_states;
    out.bits_produced = l_bits;
    out.net_expansion = static_cast<int64_t>(l_bits) - static_cast<int64_t>(seed_len) -
                        static_cast<int64_t>(out.bits_consumed_test_selection);
    return out;
}

BlockPlan plan_blocks(uint64_t n_raw, uint64_t target, uint64_t block_bits) {
    if (block_bits == 0) {
        throw Error(ErrorKind::InvalidLength, "block size must be positive");
    }
    if (target > n_raw) {
        throw Error(ErrorKind::InvalidLength, "cannot extract more bits than the raw input holds");
    }
    BlockPlan plan;
    auto cumulative = [&](uint64_t end) {
        return static_cast<uint64_t>((static_cast<unsigned __int128>(target) * end) / n_raw);
    };
    uint64_t max_in = 0;
    uint64_t max_out = 0;
    for (uint64_t start = 0; start < n_raw; start += block_bits) {
        uint64_t end = std::min(n_raw, start + block_bits);
        uint64_t m = cumulative(end) - cumulative(start);
        if (m == 0) {
            continue;
        }
        plan.blocks.push_back({start, end - start, m});
        max_in = std::max(max_in, end - start);
        max_out = std::max(max_out, m);
        plan.total_out += m;
    }
    plan.seed_length = plan.blocks.empty() ? 0 : max_in + max_out - 1;
    return plan;
}

BitBuffer extract_blocks(const BitBuffer &raw, const BlockPlan &plan, const BitBuffer &seed, ExtractMethod method) {
    if (seed.size() != plan.seed_length) {
        throw Error(
            ErrorKind::InvalidLength,
            "seed has " + std::to_string(seed.size()) + " bits, block plan needs " +
                std::to_string(plan.seed_length));
    }
    BitBuffer out;
    for (const auto &block : plan.blocks) {
        if (block.offset + block.n_in > raw.size()) {
            throw Error(ErrorKind::InvalidLength, "block plan does not fit the raw input");
        }
        ToeplitzSpec spec{block.n_in, block.m_out, seed.slice(0, block.n_in + block.m_out - 1)};
        out.append(extract(raw.slice(block.offset, block.n_in), spec, method));
    }
    return out;
}

}  // namespace sdiqrng
