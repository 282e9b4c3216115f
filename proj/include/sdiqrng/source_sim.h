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

#ifndef SDIQRNG_SOURCE_SIM_H
#define SDIQRNG_SOURCE_SIM_H

#include <array>
#include <cstdint>

#include "sdiqrng/bits.h"
#include "sdiqrng/bloch.h"

namespace sdiqrng {

/// Prepare side of the experiment. Setting 0 is the generation state on the
/// equator, settings 1 and 2 the test states near +z and -z.
struct SourceModel {
    double mu = 0.58;
    /// Probability of a generation round; each test setting has p_test.
    double p_gen = 0.25;
    double p_test = 0.25;
    /// Polar tilt of test state 1 away from +z and of test state 2 away from -z.
    double misalign1 = 0;
    double misalign2 = 0;
    /// Half-ranges of the uniform modulation noise for each setting.
    double noise_range0 = 0;
    double noise_range1 = 0;
    double noise_range2 = 0;
    /// Azimuth of the generation state.
    double gen_azimuth = 0;

    /// Splits a total misalignment evenly between the two test states.
    void set_total_misalignment(double total) {
        misalign1 = total / 2;
        misalign2 = total / 2;
    }
    double total_misalignment() const {
        return misalign1 + misalign2;
    }
    void validate() const;
};

/// Threshold detectors behind a polarizing beam splitter. `mu` counts photons
/// after the total loss referenced to `reference_eff`, so arm k sees a mean
/// photon number mu * q_k * eff_k / reference_eff.
struct DetectorModel {
    double eff_h = 0.106;
    double eff_v = 0.137;
    double dark_h = 1.3e-6;
    double dark_v = 1.6e-6;
    double reference_eff = 0.137;

    double transmission_h() const {
        return eff_h / reference_eff;
    }
    double transmission_v() const {
        return eff_v / reference_eff;
    }
    void validate() const;
};

struct RoundRecord {
    uint8_t setting = 0;
    uint8_t outcome = 0;
    bool is_test = false;
};

struct ExpectationStats {
    std::array<uint64_t, 3> count_b0{};
    std::array<uint64_t, 3> count_b1{};
    uint64_t n_gen_rounds = 0;

    uint64_t n_test(int setting) const {
        return count_b0[setting] + count_b1[setting];
    }
    uint64_t n_test_total() const {
        return n_test(0) + n_test(1) + n_test(2);
    }
    /// (n_b0 - n_b1) / (n_b0 + n_b1) over test rounds; 0 with no test rounds.
    double ge(int setting) const;
    void record(const RoundRecord &round);
    void merge(const ExpectationStats &other);
    bool operator==(const ExpectationStats &) const = default;
};

struct ClickProbabilities {
    double p_h = 0;
    double p_v = 0;
};

/// Mean (noise-averaged) state prepared for a setting.
QubitState lab_state(int setting, const SourceModel &model);

/// One per-round noise realization: the mean direction tilted by 2*theta with
/// theta ~ U[0, noise_range] and a uniform azimuth about it. u_theta and
/// u_phi are uniform in [0, 1).
QubitState sample_lab_state(int setting, const SourceModel &model, double u_theta, double u_phi);

ClickProbabilities click_probabilities(const QubitState &state, double mu, const DetectorModel &det);

/// H-only click is 0, V-only click is 1; no-click and double-click are 0.
inline uint8_t assign_outcome(bool h_clicked, bool v_clicked) {
    return (v_clicked && !h_clicked) ? 1 : 0;
}

/// Exact expectation P(b=0) - P(b=1) of a setting under the mean-state model.
double analytic_expectation(int setting, const SourceModel &source, const DetectorModel &det);

struct SimulationOptions {
    bool per_round_noise = false;
    /// Worker threads; 0 picks the hardware concurrency.
    unsigned workers = 0;
    /// Rounds per shard. Shard s uses the Philox key (master_seed, s), so
    /// results do not depend on the worker count.
    uint64_t shard_rounds = uint64_t{1} << 20;
};

struct SimulationResult {
    BitBuffer raw_bits;
    ExpectationStats stats;
};

SimulationResult run_protocol(
    const SourceModel &source,
    const DetectorModel &det,
    uint64_t n_rounds,
    uint64_t master_seed,
    const SimulationOptions &options = {});

}  // namespace sdiqrng

#endif
