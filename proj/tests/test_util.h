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

#ifndef SDIQRNG_TESTS_TEST_UTIL_H
#define SDIQRNG_TESTS_TEST_UTIL_H

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include "sdiqrng/bits.h"
#include "sdiqrng/bloch.h"
#include "sdiqrng/error.h"
#include "gtest/gtest.h"

namespace sdiqrng::testing {

/// Test-side randomness, deliberately a different generator from the one under test.
inline std::mt19937_64 &test_rng() {
    static std::mt19937_64 rng(0x5d1e5eedULL);
    return rng;
}

inline double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(test_rng());
}

inline BlochVector random_direction() {
    double z = uniform(-1, 1);
    double phi = uniform(0, 2 * M_PI);
    double r = std::sqrt(std::max(0.0, 1 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

inline BlochVector random_in_ball() {
    return random_direction() * std::cbrt(uniform(0, 1));
}

inline BitBuffer random_bits(uint64_t n) {
    BitBuffer out(n);
    for (uint64_t i = 0; i < n; ++i) {
        out.set(i, test_rng()() & 1);
    }
    return out;
}

inline BitBuffer bits_from_string(const std::string &text) {
    BitBuffer out(text.size());
    for (size_t i = 0; i < text.size(); ++i) {
        out.set(i, text[i] == '1');
    }
    return out;
}

/// Kind of the Error thrown by f. Records a test failure if nothing is thrown.
inline ErrorKind kind_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const Error &e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an Error";
    return ErrorKind::Io;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string &name) {
    auto dir = std::filesystem::temp_directory_path() / ("sdiqrng_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace sdiqrng::testing

#endif
