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

#ifndef SDIQRNG_BITS_H
#define SDIQRNG_BITS_H

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace sdiqrng {

/// Packed bit sequence. Bit i lives in word i/64 at position i%64, which on
/// serialization becomes byte i/8 at position i%8 (LSB first). Bits past
/// size() are always zero.
class BitBuffer {
   public:
    BitBuffer() = default;
    explicit BitBuffer(uint64_t bit_count);

    static BitBuffer from_bytes(std::span<const uint8_t> payload, uint64_t bit_count);
    /// One entry per bit, each 0 or 1.
    static BitBuffer from_bits(std::span<const uint8_t> bits);
    static BitBuffer from_words(std::vector<uint64_t> words, uint64_t bit_count);

    uint64_t size() const {
        return bit_count_;
    }
    bool empty() const {
        return bit_count_ == 0;
    }

    bool get(uint64_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1;
    }
    void set(uint64_t i, bool v) {
        uint64_t mask = uint64_t{1} << (i & 63);
        if (v) {
            words_[i >> 6] |= mask;
        } else {
            words_[i >> 6] &= ~mask;
        }
    }
    void push_back(bool v);
    void append(const BitBuffer &other);

    /// Bits [offset, offset + count) as a new buffer.
    BitBuffer slice(uint64_t offset, uint64_t count) const;
    /// Up to 64 bits starting at offset, zero-filled past the end.
    uint64_t read_word(uint64_t offset) const;

    uint64_t popcount() const;
    BitBuffer operator^(const BitBuffer &other) const;
    bool operator==(const BitBuffer &other) const = default;

    std::span<const uint64_t> words() const {
        return words_;
    }
    std::vector<uint8_t> to_bytes() const;

   private:
    void clear_tail();

    std::vector<uint64_t> words_;
    uint64_t bit_count_ = 0;
};

/// File layout: the 8 ASCII bytes "QRNGBITS", the bit count as a little-endian
/// uint64, then ceil(bit_count/8) payload bytes.
void write_bits_file(const std::filesystem::path &path, const BitBuffer &bits);
BitBuffer read_bits_file(const std::filesystem::path &path);

}  // namespace sdiqrng

#endif
