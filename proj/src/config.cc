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

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

#include "sdiqrng/error.h"

namespace sdiqrng {

using nlohmann::json;

SecurityBudget RunConfig::budget() const {
    return SecurityBudget::from_test_fraction(epsilon_total, n_total, test_fraction, source.mu, sys_freq_hz);
}

LengthOptions RunConfig::length_options() const {
    LengthOptions out;
    out.conservative_eta = conservative_eta;
    return out;
}

SimulationOptions RunConfig::simulation_options() const {
    SimulationOptions out;
    out.per_round_noise = per_round_noise;
    return out;
}

void RunConfig::validate() const {
    source.validate();
    detector.validate();
    if (!(test_fraction >= 0 && test_fraction < 1)) {
        throw Error(ErrorKind::InvalidModel, "test_fraction must lie in [0, 1)");
    }
    budget().validate();
}

namespace {

template <typename T>
void read_field(const json &doc, const char *key, T &out) {
    auto it = doc.find(key);
    if (it == doc.end()) {
        return;
    }
    try {
        if constexpr (std::is_same_v<T, uint64_t>) {
            // Accept 1e10-style literals as long as they are exact integers.
            if (it->is_number_float()) {
                double v = it->get<double>();
                if (v < 0 || v != static_cast<double>(static_cast<uint64_t>(v))) {
                    throw Error(ErrorKind::Config, std::string("key '") + key + "' must be a non-negative integer");
                }
                out = static_cast<uint64_t>(v);
                return;
            }
            if (it->is_number_integer() && it->get<int64_t>() < 0) {
                throw Error(ErrorKind::Config, std::string("key '") + key + "' must be non-negative");
            }
        }
        out = it->get<T>();
    } catch (const json::exception &e) {
        throw Error(ErrorKind::Config, std::string("key '") + key + "': " + e.what());
    }
}

const std::set<std::string> &known_keys() {
    static const std::set<std::string> keys{
        "mu",           "p_gen",         "p_test",       "misalign1",      "misalign2",        "misalign_total",
        "noise_range0", "noise_range1",  "noise_range2", "gen_azimuth",    "eff_h",            "eff_v",
        "dark_h",       "dark_v",        "reference_eff", "epsilon_total", "n_total",          "test_fraction",
        "sys_freq_hz",  "n_rounds",      "master_seed",  "conservative_eta", "prefactor",      "per_round_noise",
        "out_dir",
    };
    return keys;
}

}  // namespace

RunConfig config_from_json(const json &doc) {
    if (!doc.is_object()) {
        throw Error(ErrorKind::Config, "config must be a JSON object");
    }
    for (const auto &[key, _] : doc.items()) {
        if (!known_keys().contains(key)) {
            throw Error(ErrorKind::Config, "unknown config key '" + key + "'");
        }
    }
    RunConfig c;
    read_field(doc, "mu", c.source.mu);
    read_field(doc, "p_gen", c.source.p_gen);
    read_field(doc, "p_test", c.source.p_test);
    if (doc.contains("misalign_total")) {
        if (doc.contains("misalign1") || doc.contains("misalign2")) {
            throw Error(ErrorKind::Config, "misalign_total cannot be combined with misalign1/misalign2");
        }
        double total = 0;
        read_field(doc, "misalign_total", total);
        c.source.set_total_misalignment(total);
    }
    read_field(doc, "misalign1", c.source.misalign1);
    read_field(doc, "misalign2", c.source.misalign2);
    read_field(doc, "noise_range0", c.source.noise_range0);
    read_field(doc, "noise_range1", c.source.noise_range1);
    read_field(doc, "noise_range2", c.source.noise_range2);
    read_field(doc, "gen_azimuth", c.source.gen_azimuth);
    read_field(doc, "eff_h", c.detector.eff_h);
    read_field(doc, "eff_v", c.detector.eff_v);
    read_field(doc, "dark_h", c.detector.dark_h);
    read_field(doc, "dark_v", c.detector.dark_v);
    read_field(doc, "reference_eff", c.detector.reference_eff);
    read_field(doc, "epsilon_total", c.epsilon_total);
    read_field(doc, "n_total", c.n_total);
    read_field(doc, "test_fraction", c.test_fraction);
    read_field(doc, "sys_freq_hz", c.sys_freq_hz);
    read_field(doc, "n_rounds", c.n_rounds);
    read_field(doc, "master_seed", c.master_seed);
    read_field(doc, "conservative_eta", c.conservative_eta);
    read_field(doc, "per_round_noise", c.per_round_noise);
    read_field(doc, "out_dir", c.out_dir);
    if (doc.contains("prefactor")) {
        std::string text;
        read_field(doc, "prefactor", text);
        c.prefactor = parse_prefactor_variant(text);
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open config file " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw Error(ErrorKind::Config, "config " + path.string() + " is not valid JSON: " + e.what());
    }
    return config_from_json(doc);
}

json config_to_json(const RunConfig &c) {
    return json{
        {"mu", c.source.mu},
        {"p_gen", c.source.p_gen},
        {"p_test", c.source.p_test},
        {"misalign1", c.source.misalign1},
        {"misalign2", c.source.misalign2},
        {"noise_range0", c.source.noise_range0},
        {"noise_range1", c.source.noise_range1},
        {"noise_range2", c.source.noise_range2},
        {"gen_azimuth", c.source.gen_azimuth},
        {"eff_h", c.detector.eff_h},
        {"eff_v", c.detector.eff_v},
        {"dark_h", c.detector.dark_h},
        {"dark_v", c.detector.dark_v},
        {"reference_eff", c.detector.reference_eff},
        {"epsilon_total", c.epsilon_total},
        {"n_total", c.n_total},
        {"test_fraction", c.test_fraction},
        {"sys_freq_hz", c.sys_freq_hz},
        {"n_rounds", c.n_rounds},
        {"master_seed", c.master_seed},
        {"conservative_eta", c.conservative_eta},
        {"prefactor", std::string(to_string(c.prefactor))},
        {"per_round_noise", c.per_round_noise},
        {"out_dir", c.out_dir},
    };
}

uint64_t config_hash(const RunConfig &config) {
    json doc = config_to_json(config);
    doc.erase("out_dir");
    std::string text = doc.dump();
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

void apply_env_overrides(RunConfig &config) {
    const char *raw = std::getenv(kSeedEnvVar);
    if (raw == nullptr || *raw == '\0') {
        return;
    }
    std::string_view text(raw);
    uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw Error(ErrorKind::Config, std::string(kSeedEnvVar) + " must be an unsigned 64-bit integer");
    }
    config.master_seed = value;
}

}  // namespace sdiqrng
