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

#include "sdiqrng/randtests.h"

#include <algorithm>
#include <bit>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdlib>

#include "sdiqrng/error.h"

namespace sdiqrng {

namespace {

constexpr uint64_t kMinBits = 100;

void require_min_bits(const BitBuffer &bits, std::string_view test) {
    if (bits.size() < kMinBits) {
        throw Error(
            ErrorKind::InsufficientData,
            std::string(test) + " needs at least 100 bits, got " + std::to_string(bits.size()));
    }
}

double clamp_p(double p) {
    return std::clamp(p, 0.0, 1.0);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

}  // namespace

TestReport make_report(std::string name, double p_value, double alpha) {
    TestReport r;
    r.test_name = std::move(name);
    r.p_value = clamp_p(p_value);
    r.alpha = alpha;
    r.passed = r.p_value >= alpha;
    return r;
}

TestReport frequency_monobit(const BitBuffer &bits, double alpha) {
    require_min_bits(bits, "frequency_monobit");
    double n = static_cast<double>(bits.size());
    double s = 2.0 * static_cast<double>(bits.popcount()) - n;
    return make_report("frequency_monobit", std::erfc(std::abs(s) / std::sqrt(2.0 * n)), alpha);
}

TestReport block_frequency(const BitBuffer &bits, uint64_t block_len, double alpha) {
    if (block_len < 20) {
        throw Error(ErrorKind::InsufficientData, "block_frequency needs block_len >= 20");
    }
    uint64_t blocks = bits.size() / block_len;
    if (blocks == 0) {
        throw Error(ErrorKind::InsufficientData, "block_frequency needs at least one full block");
    }
    double chi2 = 0;
    for (uint64_t b = 0; b < blocks; ++b) {
        uint64_t ones = 0;
        uint64_t start = b * block_len;
        for (uint64_t k = 0; k < block_len; k += 64) {
            uint64_t take = std::min<uint64_t>(64, block_len - k);
            uint64_t w = bits.read_word(start + k);
            if (take < 64) {
                w &= (uint64_t{1} << take) - 1;
            }
            ones += std::popcount(w);
        }
        double dev = static_cast<double>(ones) / static_cast<double>(block_len) - 0.5;
        chi2 += dev * dev;
    }
    chi2 *= 4.0 * static_cast<double>(block_len);
    double p = boost::math::gamma_q(static_cast<double>(blocks) / 2.0, chi2 / 2.0);
    return make_report("block_frequency", p, alpha);
}

TestReport runs_test(const BitBuffer &bits, double alpha) {
    require_min_bits(bits, "runs_test");
    uint64_t n = bits.size();
    double nd = static_cast<double>(n);
    double pi = static_cast<double>(bits.popcount()) / nd;
    if (std::abs(pi - 0.5) >= 2.0 / std::sqrt(nd)) {
        throw Error(ErrorKind::PrerequisiteFailed, "runs_test: ones fraction too far from 1/2");
    }
    // V = 1 + number of k < n-1 with b[k] != b[k+1].
    uint64_t changes = 0;
    for (uint64_t k = 0; k + 1 < n; k += 63) {
        uint64_t take = std::min<uint64_t>(63, n - 1 - k);
        uint64_t w = bits.read_word(k);
        uint64_t diff = (w ^ (w >> 1)) & ((uint64_t{1} << take) - 1);
        changes += std::popcount(diff);
    }
    double v = 1.0 + static_cast<double>(changes);
    double spread = pi * (1.0 - pi);
    double p = std::erfc(std::abs(v - 2.0 * nd * spread) / (2.0 * std::sqrt(2.0 * nd) * spread));
    return make_report("runs", p, alpha);
}

TestReport cumulative_sums(const BitBuffer &bits, double alpha) {
    require_min_bits(bits, "cumulative_sums");
    uint64_t n = bits.size();
    int64_t s = 0;
    int64_t z = 0;
    for (uint64_t k = 0; k < n; ++k) {
        s += bits.get(k) ? 1 : -1;
        z = std::max<int64_t>(z, std::abs(s));
    }
    double nd = static_cast<double>(n);
    double zd = static_cast<double>(z);
    double sqn = std::sqrt(nd);
    double ratio = nd / zd;
    double t1 = 0;
    for (auto k = static_cast<int64_t>(std::floor((-ratio + 1) / 4)); k <= static_cast<int64_t>(std::floor((ratio - 1) / 4));
         ++k) {
        double kd = static_cast<double>(k);
        t1 += normal_cdf((4 * kd + 1) * zd / sqn) - normal_cdf((4 * kd - 1) * zd / sqn);
    }
    double t2 = 0;
    for (auto k = static_cast<int64_t>(std::floor((-ratio - 3) / 4)); k <= static_cast<int64_t>(std::floor((ratio - 1) / 4));
         ++k) {
        double kd = static_cast<double>(k);
        t2 += normal_cdf((4 * kd + 3) * zd / sqn) - normal_cdf((4 * kd + 1) * zd / sqn);
    }
    return make_report("cumulative_sums", 1.0 - t1 + t2, alpha);
}

std::vector<TestReport> run_all_tests(const BitBuffer &bits, uint64_t block_len, double alpha) {
    std::vector<TestReport> out;
    out.push_back(frequency_monobit(bits, alpha));
    out.push_back(block_frequency(bits, block_len, alpha));
    try {
        out.push_back(runs_test(bits, alpha));
    } catch (const Error &e) {
        if (e.kind() != ErrorKind::PrerequisiteFailed) {
            throw;
        }
        out.push_back(make_report("runs", 0.0, alpha));
    }
    out.push_back(cumulative_sums(bits, alpha));
    return out;
}

}  // namespace sdiqrng
