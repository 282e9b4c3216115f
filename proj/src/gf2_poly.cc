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

#include "sdiqrng/gf2_poly.h"

#include <algorithm>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define SDIQRNG_HAVE_X86 1
#endif

namespace sdiqrng {

namespace {

using BaseMul = void (*)(const uint64_t *a, const uint64_t *b, size_t n, uint64_t *out);

/// 64x64 -> 128 carry-less product, portable.
inline void clmul_soft(uint64_t a, uint64_t b, uint64_t &lo, uint64_t &hi) {
    uint64_t l = 0;
    uint64_t h = 0;
    for (int k = 0; k < 64; ++k) {
        if ((b >> k) & 1) {
            l ^= a << k;
            if (k != 0) {
                h ^= a >> (64 - k);
            }
        }
    }
    lo = l;
    hi = h;
}

void schoolbook_soft(const uint64_t *a, const uint64_t *b, size_t n, uint64_t *out) {
    std::fill(out, out + 2 * n, 0);
    for (size_t i = 0; i < n; ++i) {
        if (a[i] == 0) {
            continue;
        }
        for (size_t j = 0; j < n; ++j) {
            uint64_t lo;
            uint64_t hi;
            clmul_soft(a[i], b[j], lo, hi);
            out[i + j] ^= lo;
            out[i + j + 1] ^= hi;
        }
    }
}

#ifdef SDIQRNG_HAVE_X86
__attribute__((target("pclmul,sse2"))) void schoolbook_pclmul(
    const uint64_t *a, const uint64_t *b, size_t n, uint64_t *out) {
    std::fill(out, out + 2 * n, 0);
    for (size_t i = 0; i < n; ++i) {
        __m128i av = _mm_set_epi64x(0, static_cast<long long>(a[i]));
        for (size_t j = 0; j < n; ++j) {
            __m128i bv = _mm_set_epi64x(0, static_cast<long long>(b[j]));
            __m128i p = _mm_clmulepi64_si128(av, bv, 0x00);
            out[i + j] ^= static_cast<uint64_t>(_mm_cvtsi128_si64(p));
            out[i + j + 1] ^= static_cast<uint64_t>(_mm_cvtsi128_si64(_mm_unpackhi_epi64(p, p)));
        }
    }
}
#endif

BaseMul pick_base() {
#ifdef SDIQRNG_HAVE_X86
    if (__builtin_cpu_supports("pclmul")) {
        return schoolbook_pclmul;
    }
#endif
    return schoolbook_soft;
}

const BaseMul kBase = pick_base();
constexpr size_t kKaratsubaCutoff = 24;

/// out[0, 2n) = a[0, n) * b[0, n); scratch must hold 4n words.
void karatsuba(BaseMul base, const uint64_t *a, const uint64_t *b, size_t n, uint64_t *out, uint64_t *scratch) {
    if (n <= kKaratsubaCutoff) {
        base(a, b, n, out);
        return;
    }
    size_t lo = n / 2;
    size_t hi = n - lo;
    // Low and high products land directly in their output slots.
    karatsuba(base, a, b, lo, out, scratch);
    karatsuba(base, a + lo, b + lo, hi, out + 2 * lo, scratch);

    uint64_t *sa = scratch;
    uint64_t *sb = scratch + hi;
    uint64_t *mid = scratch + 2 * hi;
    uint64_t *next = scratch + 4 * hi;
    for (size_t k = 0; k < hi; ++k) {
        sa[k] = a[lo + k] ^ (k < lo ? a[k] : 0);
        sb[k] = b[lo + k] ^ (k < lo ? b[k] : 0);
    }
    karatsuba(base, sa, sb, hi, mid, next);
    for (size_t k = 0; k < 2 * lo; ++k) {
        mid[k] ^= out[k];
    }
    for (size_t k = 0; k < 2 * hi; ++k) {
        mid[k] ^= out[2 * lo + k];
    }
    for (size_t k = 0; k < 2 * hi; ++k) {
        out[lo + k] ^= mid[k];
    }
}

/// Scratch words needed by karatsuba() for size n.
size_t scratch_words(size_t n) {
    size_t total = 0;
    while (n > kKaratsubaCutoff) {
        size_t hi = n - n / 2;
        total += 4 * hi;
        n = hi;
    }
    return total + 1;
}

}  // namespace

bool gf2_poly_hardware_clmul() {
    return kBase != schoolbook_soft;
}

std::vector<uint64_t> gf2_poly_mul(std::span<const uint64_t> a, std::span<const uint64_t> b, ClmulBackend backend) {
    BaseMul base = backend == ClmulBackend::Portable ? schoolbook_soft : kBase;
    std::vector<uint64_t> result(a.size() + b.size(), 0);
    if (a.empty() || b.empty()) {
        return result;
    }
    // Split the longer operand into chunks the size of the shorter one so
    // unbalanced products stay near-linear in the long side.
    std::span<const uint64_t> longer = a.size() >= b.size() ? a : b;
    std::span<const uint64_t> shorter = a.size() >= b.size() ? b : a;
    const size_t n = shorter.size();
    std::vector<uint64_t> chunk(n);
    std::vector<uint64_t> prod(2 * n);
    std::vector<uint64_t> scratch(scratch_words(n));
    for (size_t off = 0; off < longer.size(); off += n) {
        size_t len = std::min(n, longer.size() - off);
        std::fill(chunk.begin(), chunk.end(), 0);
        std::copy_n(longer.begin() + static_cast<std::ptrdiff_t>(off), len, chunk.begin());
        karatsuba(base, chunk.data(), shorter.data(), n, prod.data(), scratch.data());
        size_t limit = std::min(2 * n, result.size() - off);
        for (size_t k = 0; k < limit; ++k) {
            result[off + k] ^= prod[k];
        }
    }
    return result;
}

}  // namespace sdiqrng
