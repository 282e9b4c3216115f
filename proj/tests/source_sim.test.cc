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

#include "sdiqrng/source_sim.h"

#include <cmath>

#include "gtest/gtest.h"
#include "test_util.h"

using namespace sdiqrng;
using namespace sdiqrng::testing;

namespace {

DetectorModel ideal_detector() {
    DetectorModel d;
    d.eff_h = 1;
    d.eff_v = 1;
    d.dark_h = 0;
    d.dark_v = 0;
    d.reference_eff = 1;
    return d;
}

}  // namespace

TEST(source_sim, lab_state_examples) {
    SourceModel m;
    auto s1 = lab_state(1, m).bloch();
    ASSERT_NEAR(s1.x, 0, 1e-15);
    ASSERT_NEAR(s1.z, 1, 1e-15);
    auto s0 = lab_state(0, m).bloch();
    ASSERT_NEAR(s0.x, 1, 1e-15);
    ASSERT_NEAR(s0.y, 0, 1e-15);
    ASSERT_NEAR(s0.z, 0, 1e-15);
    m.misalign2 = M_PI / 28;
    ASSERT_NEAR(lab_state(2, m).bloch().z, -0.993712209893243, 1e-12);
}

TEST(source_sim, lab_state_noise_shrinks_radius) {
    SourceModel m;
    m.noise_range0 = 0.1;
    m.noise_range1 = 0.2;
    m.noise_range2 = M_PI / 4;
    m.gen_azimuth = 0.7;
    ASSERT_NEAR(lab_state(0, m).bloch().norm(), bloch_length_from_noise(0.1), 1e-15);
    ASSERT_NEAR(lab_state(0, m).bloch().y, std::sin(0.7) * bloch_length_from_noise(0.1), 1e-15);
    ASSERT_NEAR(lab_state(1, m).bloch().norm(), bloch_length_from_noise(0.2), 1e-15);
    ASSERT_NEAR(lab_state(2, m).bloch().norm(), 0.636619772367581, 1e-12);
}

TEST(source_sim, sample_lab_state_mean_is_lab_state) {
    SourceModel m;
    m.noise_range0 = 0.3;
    m.noise_range1 = 0.4;
    m.noise_range2 = 0.5;
    m.set_total_misalignment(0.3);
    for (int s = 0; s < 3; ++s) {
        ASSERT_EQ(sample_lab_state(s, SourceModel{}, 0.3, 0.8).bloch(), lab_state(s, SourceModel{}).bloch());
        const int grid = 400;
        BlochVector mean{0, 0, 0};
        for (int i = 0; i < grid; ++i) {
            for (int j = 0; j < grid; ++j) {
                auto v = sample_lab_state(s, m, (i + 0.5) / grid, (j + 0.5) / grid).bloch();
                ASSERT_NEAR(v.norm(), 1, 1e-12);
                mean = mean + v * (1.0 / (grid * grid));
            }
        }
        auto expected = lab_state(s, m).bloch();
        ASSERT_NEAR(mean.x, expected.x, 1e-4);
        ASSERT_NEAR(mean.y, expected.y, 1e-4);
        ASSERT_NEAR(mean.z, expected.z, 1e-4);
    }
}

TEST(source_sim, click_probability_examples) {
    DetectorModel quiet = ideal_detector();
    auto vac = click_probabilities(QubitState({0, 0, 1}), 0, quiet);
    ASSERT_EQ(vac.p_h, 0);
    ASSERT_EQ(vac.p_v, 0);

    auto bright = click_probabilities(QubitState({0, 0, 1}), 800, quiet);
    ASSERT_EQ(bright.p_h, 1);
    ASSERT_EQ(bright.p_v, 0);

    DetectorModel d;
    d.eff_h = 0.106;
    d.dark_h = 1.3e-6;
    d.reference_eff = 1;
    ASSERT_NEAR(click_probabilities(QubitState({0, 0, 0}), 0.58, d).p_h, 0.0302735911498302, 1e-12);
    ASSERT_EQ(kind_of([&] { click_probabilities(QubitState({0, 0, 0}), -1, d); }), ErrorKind::InvalidModel);
}

TEST(source_sim, default_detector_is_referenced_to_the_better_arm) {
    DetectorModel d;
    ASSERT_DOUBLE_EQ(d.transmission_v(), 1);
    ASSERT_DOUBLE_EQ(d.transmission_h(), 0.106 / 0.137);
}

TEST(source_sim, assign_outcome_table) {
    ASSERT_EQ(assign_outcome(false, true), 1);
    ASSERT_EQ(assign_outcome(false, false), 0);
    ASSERT_EQ(assign_outcome(true, true), 0);
    ASSERT_EQ(assign_outcome(true, false), 0);
}

TEST(source_sim, model_validation) {
    SourceModel m;
    m.p_test = 0.3;
    ASSERT_EQ(kind_of([&] { m.validate(); }), ErrorKind::InvalidModel);
    m = SourceModel{};
    m.noise_range0 = 0.2;
    m.noise_range1 = 0.1;
    m.noise_range2 = 0.3;
    ASSERT_EQ(kind_of([&] { m.validate(); }), ErrorKind::InvalidModel);
    m = SourceModel{};
    m.misalign1 = -0.1;
    ASSERT_EQ(kind_of([&] { m.validate(); }), ErrorKind::InvalidModel);
    DetectorModel d;
    d.eff_h = 1.2;
    ASSERT_EQ(kind_of([&] { d.validate(); }), ErrorKind::InvalidModel);
    m = SourceModel{};
    m.set_total_misalignment(0.4);
    ASSERT_DOUBLE_EQ(m.misalign1, 0.2);
    ASSERT_DOUBLE_EQ(m.total_misalignment(), 0.4);
}

TEST(source_sim, run_protocol_round_counts) {
    SourceModel m;
    DetectorModel d;
    ASSERT_EQ(kind_of([&] { run_protocol(m, d, 0, 1); }), ErrorKind::InvalidModel);
    m.p_gen = 1;
    m.p_test = 0;
    auto one = run_protocol(m, d, 1, 1);
    ASSERT_EQ(one.raw_bits.size(), 1u);
    ASSERT_EQ(one.stats.n_test_total(), 0u);
    ASSERT_EQ(one.stats.ge(0), 0);
}

TEST(source_sim, run_protocol_is_deterministic_and_shard_independent) {
    SourceModel m;
    m.set_total_misalignment(M_PI / 12);
    DetectorModel d;
    SimulationOptions a;
    a.workers = 1;
    a.shard_rounds = 10007;
    SimulationOptions b = a;
    b.workers = 4;
    auto r1 = run_protocol(m, d, 200000, 77, a);
    auto r2 = run_protocol(m, d, 200000, 77, a);
    auto r3 = run_protocol(m, d, 200000, 77, b);
    ASSERT_EQ(r1.raw_bits, r2.raw_bits);
    ASSERT_EQ(r1.stats, r2.stats);
    ASSERT_EQ(r1.raw_bits, r3.raw_bits);
    ASSERT_EQ(r1.stats, r3.stats);
    auto other = run_protocol(m, d, 200000, 78, a);
    ASSERT_NE(r1.raw_bits, other.raw_bits);
}

TEST(source_sim, tally_conservation) {
    SourceModel m;
    DetectorModel d;
    const uint64_t n = 123457;
    auto r = run_protocol(m, d, n, 3);
    ASSERT_EQ(r.stats.n_test_total() + r.stats.n_gen_rounds, n);
    ASSERT_EQ(r.raw_bits.size(), r.stats.n_gen_rounds);
}

TEST(source_sim, vacuum_without_dark_counts_gives_zeros) {
    SourceModel m;
    m.mu = 0;
    DetectorModel d;
    d.dark_h = 0;
    d.dark_v = 0;
    auto r = run_protocol(m, d, 100000, 4);
    ASSERT_EQ(r.raw_bits.popcount(), 0u);
    for (int s = 0; s < 3; ++s) {
        ASSERT_EQ(r.stats.count_b1[s], 0u);
        ASSERT_EQ(r.stats.ge(s), 1);
    }
}

TEST(source_sim, converges_to_analytic_expectation) {
    SourceModel m;
    m.set_total_misalignment(M_PI / 9);
    m.noise_range0 = 0.05;
    m.noise_range1 = 0.1;
    m.noise_range2 = 0.15;
    DetectorModel d;
    auto r = run_protocol(m, d, 2'000'000, 5);
    for (int s = 0; s < 3; ++s) {
        double n_t = static_cast<double>(r.stats.n_test(s));
        ASSERT_GE(n_t, 1e5);
        ASSERT_NEAR(r.stats.ge(s), analytic_expectation(s, m, d), 5 * std::sqrt(1 / n_t)) << s;
    }
}

TEST(source_sim, ideal_devices_at_high_intensity) {
    // Saturated threshold detectors: the test states are perfectly resolved, while
    // the equatorial state double-clicks (outcome 0), so g0 tends to 1 rather than 0.
    SourceModel m;
    m.mu = 40;
    DetectorModel d = ideal_detector();
    auto r = run_protocol(m, d, 1'000'000, 6);
    ASSERT_EQ(r.stats.ge(1), 1);
    ASSERT_EQ(r.stats.ge(2), -1);
    double n0 = static_cast<double>(r.stats.n_test(0));
    ASSERT_NEAR(r.stats.ge(0), analytic_expectation(0, m, d), 5 * std::sqrt(1 / n0));
    ASSERT_NEAR(analytic_expectation(0, m, d), 1, 1e-6);
}

TEST(source_sim, per_round_noise_matches_mean_state) {
    SourceModel m;
    m.set_total_misalignment(M_PI / 14);
    m.noise_range0 = 0.1;
    m.noise_range1 = 0.2;
    m.noise_range2 = 0.2;
    DetectorModel d;
    SimulationOptions per_round;
    per_round.per_round_noise = true;
    auto mean = run_protocol(m, d, 2'000'000, 8);
    auto sampled = run_protocol(m, d, 2'000'000, 9, per_round);
    for (int s = 0; s < 3; ++s) {
        double n_t = static_cast<double>(std::min(mean.stats.n_test(s), sampled.stats.n_test(s)));
        ASSERT_NEAR(mean.stats.ge(s), sampled.stats.ge(s), 5 * std::sqrt(2 / n_t)) << s;
    }
}

TEST(source_sim, desk_scale_reference_cell) {
    SourceModel m;
    m.set_total_misalignment(M_PI / 14);
    DetectorModel d;
    auto r = run_protocol(m, d, 10'000'000, 11);
    ASSERT_NEAR(r.stats.ge(1), analytic_expectation(1, m, d), 0.005);
    ASSERT_GT(r.stats.ge(1), r.stats.ge(0));
    ASSERT_GT(r.stats.ge(0), r.stats.ge(2));
    // About p_gen of all rounds feed the raw sequence.
    ASSERT_NEAR(static_cast<double>(r.raw_bits.size()) / 1e7, m.p_gen, 0.001);
}

TEST(source_sim, stats_merge_and_record) {
    ExpectationStats a;
    a.record({1, 0, true});
    a.record({1, 1, true});
    a.record({0, 1, false});
    ExpectationStats b;
    b.record({2, 1, true});
    a.merge(b);
    ASSERT_EQ(a.count_b0[1], 1u);
    ASSERT_EQ(a.count_b1[1], 1u);
    ASSERT_EQ(a.count_b1[2], 1u);
    ASSERT_EQ(a.n_gen_rounds, 1u);
    ASSERT_EQ(a.ge(1), 0);
    ASSERT_EQ(a.ge(2), -1);
}
