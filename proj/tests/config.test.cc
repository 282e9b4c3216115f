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

#include "sdiqrng/config.h"

#include <cstdlib>
#include <fstream>

#include "gtest/gtest.h"
#include "test_util.h"

using namespace sdiqrng;
using namespace sdiqrng::testing;
using nlohmann::json;

namespace {

struct ScopedEnv {
    explicit ScopedEnv(const char *value) {
        setenv(kSeedEnvVar, value, 1);
    }
    ~ScopedEnv() {
        unsetenv(kSeedEnvVar);
    }
};

}  // namespace

TEST(config, defaults_are_the_experiment_values) {
    RunConfig c;
    c.validate();
    ASSERT_EQ(c.source.mu, 0.58);
    ASSERT_EQ(c.detector.eff_h, 0.106);
    ASSERT_EQ(c.detector.eff_v, 0.137);
    ASSERT_EQ(c.detector.dark_h, 1.3e-6);
    ASSERT_EQ(c.detector.dark_v, 1.6e-6);
    ASSERT_EQ(c.epsilon_total, 7e-10);
    ASSERT_EQ(c.n_total, 10'000'000'000ULL);
    ASSERT_EQ(c.sys_freq_hz, 1e7);
    ASSERT_EQ(c.n_rounds, 10'000'000u);
    SecurityBudget b = c.budget();
    ASSERT_EQ(b.n_test_per_state, 33333u);
}

TEST(config, json_round_trip) {
    RunConfig c;
    c.source.mu = 0.33;
    c.source.set_total_misalignment(0.3);
    c.master_seed = 99;
    c.prefactor = PrefactorVariant::EtaOnly;
    c.conservative_eta = true;
    RunConfig back = config_from_json(config_to_json(c));
    ASSERT_EQ(config_to_json(back), config_to_json(c));
    ASSERT_EQ(config_hash(back), config_hash(c));
}

TEST(config, rejects_unknown_and_ill_typed_keys) {
    ASSERT_EQ(kind_of([] { config_from_json(json{{"mu", 0.5}, {"colour", "blue"}}); }), ErrorKind::Config);
    ASSERT_EQ(kind_of([] { config_from_json(json{{"mu", "bright"}}); }), ErrorKind::Config);
    ASSERT_EQ(kind_of([] { config_from_json(json{{"n_rounds", 1.5}}); }), ErrorKind::Config);
    ASSERT_EQ(kind_of([] { config_from_json(json{{"n_rounds", -3}}); }), ErrorKind::Config);
    ASSERT_EQ(kind_of([] { config_from_json(json{{"prefactor", "loose"}}); }), ErrorKind::Config);
    ASSERT_EQ(kind_of([] { config_from_json(json::array()); }), ErrorKind::Config);
}

TEST(config, revalidates_module_invariants) {
    ASSERT_EQ(kind_of([] { config_from_json(json{{"p_test", 0.3}}); }), ErrorKind::InvalidModel);
    ASSERT_EQ(kind_of([] { config_from_json(json{{"eff_v", 1.3}}); }), ErrorKind::InvalidModel);
    ASSERT_EQ(kind_of([] { config_from_json(json{{"epsilon_total", 7}}); }), ErrorKind::InvalidModel);
    ASSERT_EQ(kind_of([] { config_from_json(json{{"test_fraction", 1}}); }), ErrorKind::InvalidModel);
}

TEST(config, scientific_integers_and_misalignment_total) {
    RunConfig c = config_from_json(json::parse(R"({"n_total": 1e10, "misalign_total": 0.4})"));
    ASSERT_EQ(c.n_total, 10'000'000'000ULL);
    ASSERT_DOUBLE_EQ(c.source.misalign1, 0.2);
    ASSERT_DOUBLE_EQ(c.source.misalign2, 0.2);
    ASSERT_EQ(
        kind_of([] { config_from_json(json{{"misalign_total", 0.4}, {"misalign1", 0.1}}); }), ErrorKind::Config);
}

TEST(config, hash_tracks_content_but_not_output_location) {
    RunConfig a;
    RunConfig b = a;
    b.out_dir = "/elsewhere";
    ASSERT_EQ(config_hash(a), config_hash(b));
    b.source.mu = 0.59;
    ASSERT_NE(config_hash(a), config_hash(b));
    ASSERT_EQ(hex64(0xabcULL), "0000000000000abc");
    ASSERT_EQ(hex64(config_hash(a)).size(), 16u);
}

TEST(config, load_from_file) {
    auto dir = scratch_dir("config_load");
    {
        std::ofstream out(dir / "c.json");
        out << R"({"mu": 0.21, "master_seed": 5})";
    }
    RunConfig c = load_config(dir / "c.json");
    ASSERT_EQ(c.source.mu, 0.21);
    ASSERT_EQ(c.master_seed, 5u);
    {
        std::ofstream out(dir / "bad.json");
        out << "{mu: }";
    }
    ASSERT_EQ(kind_of([&] { load_config(dir / "bad.json"); }), ErrorKind::Config);
    ASSERT_EQ(kind_of([&] { load_config(dir / "missing.json"); }), ErrorKind::Io);
}

TEST(config, seed_environment_override) {
    RunConfig c;
    c.master_seed = 1;
    {
        ScopedEnv env("424242");
        apply_env_overrides(c);
        ASSERT_EQ(c.master_seed, 424242u);
    }
    {
        ScopedEnv env("12abc");
        ASSERT_EQ(kind_of([&] { apply_env_overrides(c); }), ErrorKind::Config);
    }
    unsetenv(kSeedEnvVar);
    c.master_seed = 3;
    apply_env_overrides(c);
    ASSERT_EQ(c.master_seed, 3u);
}
