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

#ifndef SDIQRNG_RANDTESTS_H
#define SDIQRNG_RANDTESTS_H

#include <string>
#include <vector>

#include "sdiqrng/bits.h"

namespace sdiqrng {

inline constexpr double kDefaultAlpha = 0.01;

struct TestReport {
    std::string test_name;
    double p_value = 0;
    double alpha = kDefaultAlpha;
    /// Always p_value >= alpha.
    bool passed = false;
};

TestReport make_report(std::string name, double p_value, double alpha = kDefaultAlpha);

/// Needs at least 100 bits.
TestReport frequency_monobit(const BitBuffer &bits, double alpha = kDefaultAlpha);
/// Needs block_len >= 20 and one full block. Trailing partial blocks are ignored.
TestReport block_frequency(const BitBuffer &bits, uint64_t block_len, double alpha = kDefaultAlpha);
/// Needs at least 100 bits and a ones fraction within 2/sqrt(n) of one half.
TestReport runs_test(const BitBuffer &bits, double alpha = kDefaultAlpha);
/// Forward direction. Needs at least 100 bits.
TestReport cumulative_sums(const BitBuffer &bits, double alpha = kDefaultAlpha);

inline constexpr uint64_t kDefaultBlockLen = 128;

/// The four tests in a fixed order: monobit, block frequency, runs, cusum.
std::vector<TestReport> run_all_tests(
    const BitBuffer &bits, uint64_t block_len = kDefaultBlockLen, double alpha = kDefaultAlpha);

}  // namespace sdiqrng

#endif
