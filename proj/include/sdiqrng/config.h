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

#ifndef SDIQRNG_CONFIG_H
#define SDIQRNG_CONFIG_H

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "sdiqrng/entropy.h"
#include "sdiqrng/source_sim.h"

namespace sdiqrng {

/// Every knob of a run. Defaults are the published experiment values.
struct RunConfig {
    SourceModel source;
    DetectorModel detector;

    double epsilon_total = 7e-10;
    uint64_t n_total = 10'000'000'000ULL;
    /// Fraction of n_total used for testing, summed over the three test states.
    double test_fraction = 1e-5;
    double sys_freq_hz = 1e7;

    /// Rounds actually simulated. The budget above drives the analytic terms.
    uint64_t n_rounds = 10'000'000;
    uint64_t master_seed = 0;

    bool conservative_eta = false;
    PrefactorVariant prefactor = PrefactorVariant::FluctuationAware;
    bool per_round_noise = false;

    std::string out_dir = ".";

    SecurityBudget budget() const;
    LengthOptions length_options() const;
    SimulationOptions simulation_options() const;
    void validate() const;
};

/// Unknown keys and ill-typed values raise ErrorKind::Config.
/// Module invariants are re-checked and raise their own kinds.
RunConfig config_from_json(const nlohmann::json &doc);
RunConfig load_config(const std::filesystem::path &path);
nlohmann::json config_to_json(const RunConfig &config);

/// FNV-1a over the canonical (sorted-key) JSON dump. Excludes out_dir.
uint64_t config_hash(const RunConfig &config);
std::string hex64(uint64_t value);

inline constexpr const char *kSeedEnvVar = "QRNG_SEED";

/// Applies QRNG_SEED when set. A malformed value raises ErrorKind::Config.
void apply_env_overrides(RunConfig &config);

}  // namespace sdiqrng

#endif
