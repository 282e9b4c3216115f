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

#include "sdiqrng/bits.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <string>

#include "sdiqrng/error.h"

namespace sdiqrng {

namespace {

constexpr std::array<char, 8> kMagic = {'Q', 'R', 'N', 'G', 'B', 'I', 'T', 'S'};

uint64_t words_for(uint64_t bits) {
    return (bits + 63) / 64;
}

}  // namespace

BitBuffer::BitBuffer(uint64_t bit_count) : words_(words_for(bit_count), 0), bit_count_(bit_count) {
}

BitBuffer BitBuffer::from_bytes(std::span<const uint8_t> payload, uint64_t bit_count) {
    if (payload.size() != (bit_count + 7) / 8) {
        throw Error(ErrorKind::InvalidLength, "payload size does not match bit count");
    }
    BitBuffer out(bit_count);
    for (size_t k = 0; k < payload.size(); ++k) {
        out.words_[k / 8] |= uint64_t{payload[k]} << (8 * (k % 8));
    }
    uint64_t tail = bit_count % 8;
    if (tail != 0 && (payload.back() >> tail) != 0) {
        throw Error(ErrorKind::InvalidLength, "unused trailing payload bits must be zero");
    }
    return out;
}

BitBuffer BitBuffer::from_bits(std::span<const uint8_t> bits) {
    BitBuffer out(bits.size());
    for (size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) {
            out.words_[i >> 6] |= uint64_t{1} << (i & 63);
        }
    }
    return out;
}

BitBuffer BitBuffer::from_words(std::vector<uint64_t> words, uint64_t bit_count) {
    if (words.size() < words_for(bit_count)) {
        throw Error(ErrorKind::InvalidLength, "not enough words for bit count");
    }
    BitBuffer out;
    words.resize(words_for(bit_count));
    out.words_ = std::move(words);
    out.bit_count_ = bit_count;
    out.clear_tail();
    return out;
}

void BitBuffer::clear_tail() {
    uint64_t tail = bit_count_ & 63;
    if (tail != 0) {
        words_.back() &= (uint64_t{1} << tail) - 1;
    }
}

void BitBuffer::push_back(bool v) {
    if ((bit_count_ & 63) == 0) {
        words_.push_back(0);
    }
    if (v) {
        words_.back() |= uint64_t{1} << (bit_count_ & 63);
    }
    ++bit_count_;
}

void BitBuffer::append(const BitBuffer &other) {
    uint64_t shift = bit_count_ & 63;
    if (shift == 0) {
        words_.insert(words_.end(), other.words_.begin(), other.words_.end());
    } else {
        for (uint64_t w : other.words_) {
            words_.back() |= w << shift;
            words_.push_back(w >> (64 - shift));
        }
    }
    bit_count_ += other.bit_count_;
    words_.resize(words_for(bit_count_));
}

uint64_t BitBuffer::read_word(uint64_t offset) const {
    uint64_t w = offset >> 6;
    uint64_t s = offset & 63;
    if (w >= words_.size()) {
        return 0;
    }
    uint64_t lo = words_[w] >> s;
    if (s != 0 && w + 1 < words_.size()) {
        lo |= words_[w + 1] << (64 - s);
    }
    return lo;
}

BitBuffer BitBuffer::slice(uint64_t offset, uint64_t count) const {
    if (offset > bit_count_ || count > bit_count_ - offset) {
        throw Error(ErrorKind::InvalidLength, "slice out of range");
    }
    BitBuffer out(count);
    for (uint64_t k = 0; k < out.words_.size(); ++k) {
        out.words_[k] = read_word(offset + 64 * k);
    }
    out.clear_tail();
    return out;
}

uint64_t BitBuffer::popcount() const {
    uint64_t total = 0;
    for (uint64_t w : words_) {
        total += std::popcount(w);
    }
    return total;
}

BitBuffer BitBuffer::operator^(const BitBuffer &other) const {
    if (other.bit_count_ != bit_count_) {
        throw Error(ErrorKind::InvalidLength, "xor of buffers with different lengths");
    }
    BitBuffer out(*this);
    for (size_t k = 0; k < words_.size(); ++k) {
        out.words_[k] ^= other.words_[k];
    }
    return out;
}

std::vector<uint8_t> BitBuffer::to_bytes() const {
    std::vector<uint8_t> out((bit_count_ + 7) / 8);
    for (size_t k = 0; k < out.size(); ++k) {
        out[k] = static_cast<uint8_t>(words_[k / 8] >> (8 * (k % 8)));
    }
    return out;
}

void write_bits_file(const std::filesystem::path &path, const BitBuffer &bits) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
    }
    std::array<uint8_t, 8> count{};
    for (int k = 0; k < 8; ++k) {
        count[k] = static_cast<uint8_t>(bits.size() >> (8 * k));
    }
    auto payload = bits.to_bytes();
    out.write(kMagic.data(), kMagic.size());
    out.write(reinterpret_cast<const char *>(count.data()), count.size());
    out.write(reinterpret_cast<const char *>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (!out) {
        throw Error(ErrorKind::Io, "write failed for '" + path.string() + "'");
    }
}

BitBuffer read_bits_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
    }
    std::array<char, 8> magic{};
    std::array<uint8_t, 8> count{};
    in.read(magic.data(), magic.size());
    in.read(reinterpret_cast<char *>(count.data()), count.size());
    if (!in || magic != kMagic) {
        throw Error(ErrorKind::Io, "'" + path.string() + "' is not a QRNGBITS file");
    }
    uint64_t bit_count = 0;
    for (int k = 0; k < 8; ++k) {
        bit_count |= uint64_t{count[k]} << (8 * k);
    }
    std::vector<uint8_t> payload((bit_count + 7) / 8);
    in.read(reinterpret_cast<char *>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (!in || in.peek() != std::char_traits<char>::eof()) {
        throw Error(ErrorKind::Io, "'" + path.string() + "' has a payload that does not match its bit count");
    }
    return BitBuffer::from_bytes(payload, bit_count);
}

}  // namespace sdiqrng
