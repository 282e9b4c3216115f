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

#ifndef SDIQRNG_GF2_POLY_H
#define SDIQRNG_GF2_POLY_H

#include <cstdint>
#include <span>
#include <vector>

namespace sdiqrng {

enum class ClmulBackend {
    /// Carry-less multiply instruction when the CPU has one.
    Auto,
    Portable,
};

/// Product of two GF(2)[z] polynomials stored as little-endian word arrays
/// (bit k of word w is the coefficient of z^(64w + k)). The result has
/// a.size() + b.size() words.
std::vector<uint64_t> gf2_poly_mul(
    std::span<const uint64_t> a, std::span<const uint64_t> b, ClmulBackend backend = ClmulBackend::Auto);

/// True when the carry-less multiply instruction is used.
bool gf2_poly_hardware_clmul();

}  // namespace sdiqrng

#endif
