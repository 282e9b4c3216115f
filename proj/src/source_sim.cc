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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "sdiqrng/error.h"
#include "sdiqrng/philox.h"

namespace sdiqrng {

namespace {

bool is_probability(double p) {
    return p >= 0 && p <= 1;
}

bool is_angle(double a, double hi) {
    return std::isfinite(a) && a >= 0 && a <= hi;
}

/// Unit direction of the noiseless state for a setting.
BlochVector ideal_direction(int setting, const SourceModel &m) {
    switch (setting) {
        case 0:
            return {std::cos(m.gen_azimuth), std::sin(m.gen_azimuth), 0};
        case 1:
            return {std::sin(m.misalign1), 0, std::cos(m.misalign1)};
        case 2:
            return {std::sin(m.misalign2), 0, -std::cos(m.misalign2)};
        default:
            throw Error(ErrorKind::InvalidModel, "setting must be 0, 1 or 2");
    }
}

double noise_range(int setting, const SourceModel &m) {
    return setting == 0 ? m.noise_range0 : setting == 1 ? m.noise_range1 : m.noise_range2;
}

/// Maps a probability to a threshold on the top 53 bits of a Philox word.
uint64_t threshold53(double p) {
    return static_cast<uint64_t>(std::ldexp(std::clamp(p, 0.0, 1.0), 53));
}

struct ShardOutput {
    BitBuffer raw;
    ExpectationStats stats;
};

}  // namespace

void SourceModel::validate() const {
    if (!std::isfinite(mu) || mu < 0) {
        throw Error(ErrorKind::InvalidModel, "mu must be finite and >= 0");
    }
    if (!is_probability(p_gen) || !is_probability(p_test) || std::abs(p_gen + 3 * p_test - 1) > 1e-12) {
        throw Error(ErrorKind::InvalidModel, "round probabilities must satisfy p_gen + 3*p_test = 1");
    }
    if (!is_angle(misalign1, std::numbers::pi) || !is_angle(misalign2, std::numbers::pi) ||
        !std::isfinite(gen_azimuth)) {
        throw Error(ErrorKind::InvalidModel, "misalignment angles must lie in [0, pi]");
    }
    double half_pi = std::numbers::pi / 2;
    if (!is_angle(noise_range0, half_pi) || !is_angle(noise_range1, half_pi) || !is_angle(noise_range2, half_pi)) {
        throw Error(ErrorKind::InvalidModel, "noise ranges must lie in [0, pi/2]");
    }
    if (noise_range0 > std::min(noise_range1, noise_range2)) {
        throw Error(ErrorKind::InvalidModel, "generation noise range must not exceed either test noise range");
    }
}

void DetectorModel::validate() const {
    if (!is_probability(eff_h) || !is_probability(eff_v) || !is_probability(dark_h) || !is_probability(dark_v)) {
        throw Error(ErrorKind::InvalidModel, "detector efficiencies and dark-click probabilities must lie in [0, 1]");
    }
    if (!(reference_eff > 0 && reference_eff <= 1)) {
        throw Error(ErrorKind::InvalidModel, "reference efficiency must lie in (0, 1]");
    }
}

double ExpectationStats::ge(int setting) const {
    uint64_t n = n_test(setting);
    if (n == 0) {
        return 0;
    }
    return (static_cast<double>(count_b0[setting]) - static_cast<double>(count_b1[setting])) / static_cast<double>(n);
}

void ExpectationStats::record(const RoundRecord &round) {
    if (!round.is_test) {
        ++n_gen_rounds;
    } else if (round.outcome == 0) {
        ++count_b0[round.setting];
    } else {
        ++count_b1[round.setting];
    }
}

void ExpectationStats::merge(const ExpectationStats &other) {
    for (int s = 0; s < 3; ++s) {
        count_b0[s] += other.count_b0[s];
        count_b1[s] += other.count_b1[s];
    }
    n_gen_rounds += other.n_gen_rounds;
}

QubitState lab_state(int setting, const SourceModel &model) {
    BlochVector d = ideal_direction(setting, model);
    return QubitState(d * bloch_length_from_noise(noise_range(setting, model)));
}

QubitState sample_lab_state(int setting, const SourceModel &model, double u_theta, double u_phi) {
    BlochVector d = ideal_direction(setting, model);
    // Orthonormal frame around d.
    BlochVector helper = std::abs(d.z) < 0.9 ? BlochVector{0, 0, 1} : BlochVector{1, 0, 0};
    BlochVector e1 = d.cross(helper);
    e1 = e1 * (1 / e1.norm());
    BlochVector e2 = d.cross(e1);
    double tilt = 2 * noise_range(setting, model) * u_theta;
    double phi = 2 * std::numbers::pi * u_phi;
    BlochVector v = d * std::cos(tilt) + (e1 * std::cos(phi) + e2 * std::sin(phi)) * std::sin(tilt);
    double n = v.norm();
    return QubitState(n > 1 ? v * (1 / n) : v);
}

ClickProbabilities click_probabilities(const QubitState &state, double mu, const DetectorModel &det) {
    if (!(mu >= 0)) {
        throw Error(ErrorKind::InvalidModel, "mu must be >= 0");
    }
    det.validate();
    double q_h = (1 + state.bloch().z) / 2;
    double q_v = (1 - state.bloch().z) / 2;
    ClickProbabilities p;
    p.p_h = 1 - (1 - det.dark_h) * std::exp(-mu * q_h * det.transmission_h());
    p.p_v = 1 - (1 - det.dark_v) * std::exp(-mu * q_v * det.transmission_v());
    return p;
}

double analytic_expectation(int setting, const SourceModel &source, const DetectorModel &det) {
    auto p = click_probabilities(lab_state(setting, source), source.mu, det);
    return 1 - 2 * p.p_v * (1 - p.p_h);
}

SimulationResult run_protocol(
    const SourceModel &source,
    const DetectorModel &det,
    uint64_t n_rounds,
    uint64_t master_seed,
    const SimulationOptions &options) {
    source.validate();
    det.validate();
    if (n_rounds == 0) {
        throw Error(ErrorKind::InvalidModel, "n_rounds must be >= 1");
    }
    if (options.shard_rounds == 0) {
        throw Error(ErrorKind::InvalidModel, "shard size must be >= 1");
    }

    // Cumulative thresholds for: generation, test 0, test 1, (else) test 2.
    const uint64_t cut_gen = threshold53(source.p_gen);
    const uint64_t cut_t0 = threshold53(source.p_gen + source.p_test);
    const uint64_t cut_t1 = threshold53(source.p_gen + 2 * source.p_test);

    std::array<uint64_t, 3> cut_h{};
    std::array<uint64_t, 3> cut_v{};
    for (int s = 0; s < 3; ++s) {
        auto p = click_probabilities(lab_state(s, source), source.mu, det);
        cut_h[s] = threshold53(p.p_h);
        cut_v[s] = threshold53(p.p_v);
    }

    const uint64_t n_shards = (n_rounds + options.shard_rounds - 1) / options.shard_rounds;
    std::vector<ShardOutput> shards(n_shards);

    auto run_shard = [&](uint64_t shard) {
        uint64_t begin = shard * options.shard_rounds;
        uint64_t count = std::min(options.shard_rounds, n_rounds - begin);
        ShardOutput &out = shards[shard];
        const Philox4x64::Key key{master_seed, shard};
        for (uint64_t r = 0; r < count; ++r) {
            auto u = Philox4x64::generate({r, 0, 0, 0}, key);
            uint64_t sel = u[0] >> 11;
            RoundRecord rec;
            if (sel < cut_gen) {
                rec.setting = 0;
            } else if (sel < cut_t0) {
                rec.setting = 0;
                rec.is_test = true;
            } else if (sel < cut_t1) {
                rec.setting = 1;
                rec.is_test = true;
            } else {
                rec.setting = 2;
                rec.is_test = true;
            }
            bool h;
            bool v;
            if (options.per_round_noise) {
                auto state = sample_lab_state(
                    rec.setting,
                    source,
                    static_cast<double>(u[3] >> 32) * 0x1.0p-32,
                    static_cast<double>(u[3] & 0xFFFFFFFFu) * 0x1.0p-32);
                auto p = click_probabilities(state, source.mu, det);
                h = (u[1] >> 11) < threshold53(p.p_h);
                v = (u[2] >> 11) < threshold53(p.p_v);
            } else {
                h = (u[1] >> 11) < cut_h[rec.setting];
                v = (u[2] >> 11) < cut_v[rec.setting];
            }
            rec.outcome = assign_outcome(h, v);
            if (!rec.is_test) {
                out.raw.push_back(rec.outcome != 0);
            }
            out.stats.record(rec);
        }
    };

    unsigned workers = options.workers != 0 ? options.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<uint64_t>(workers, n_shards));
    if (workers <= 1) {
        for (uint64_t s = 0; s < n_shards; ++s) {
            run_shard(s);
        }
    } else {
        std::atomic<uint64_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (uint64_t s = next++; s < n_shards; s = next++) {
                    run_shard(s);
                }
            });
        }
    }

    SimulationResult result;
    for (auto &shard : shards) {
        result.raw_bits.append(shard.raw);
        result.stats.merge(shard.stats);
    }
    return result;
}

}  // namespace sdiqrng
