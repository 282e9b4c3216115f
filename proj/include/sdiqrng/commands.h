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

#ifndef SDIQRNG_COMMANDS_H
#define SDIQRNG_COMMANDS_H

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "sdiqrng/config.h"
#include "sdiqrng/error.h"
#include "sdiqrng/randtests.h"
#include "sdiqrng/toeplitz.h"

namespace sdiqrng {

enum ExitCode : int {
    kExitOk = 0,
    kExitValidation = 2,
    kExitAbort = 3,
    kExitViolation = 4,
    kExitIo = 5,
};

int exit_code_for(ErrorKind kind);

/// stats.json document for a finished simulation.
nlohmann::json stats_to_json(const RunConfig &config, const ExpectationStats &stats, uint64_t raw_bit_count);
ExpectationStats stats_from_json(const nlohmann::json &doc);

/// Runs the source simulation and writes stats.json and raw.bits. Returns the stats document.
nlohmann::json cmd_simulate(
    const RunConfig &config,
    unsigned workers,
    const std::filesystem::path &stats_path,
    const std::filesystem::path &raw_path);

/// Parameter estimation on measured tallies. An abort is reported in the
/// document ("aborted": true) rather than thrown.
nlohmann::json cmd_bound(const nlohmann::json &stats_doc, const RunConfig &config);

inline constexpr uint64_t kDefaultBlockBits = uint64_t{1} << 20;

/// Number of final bits for a raw file of n_raw bits: l scaled by n_raw / n_gen, capped at l.
uint64_t extraction_target(uint64_t l_bits, uint64_t n_gen, uint64_t n_raw);

/// Seed of `bit_count` bits drawn from a dedicated Philox stream.
BitBuffer generate_seed(uint64_t master_seed, uint64_t bit_count);

struct ExtractOutcome {
    BitBuffer final_bits;
    BlockPlan plan;
    SeedLedger ledger;
    nlohmann::json ledger_doc;
};

/// Throws AbortedRun when the report certifies no output.
BlockPlan plan_extraction(const nlohmann::json &report, uint64_t n_raw, uint64_t block_bits = kDefaultBlockBits);
ExtractOutcome cmd_extract(
    const BitBuffer &raw, const nlohmann::json &report, const BitBuffer &seed, uint64_t block_bits = kDefaultBlockBits);

nlohmann::json report_to_json(const TestReport &report, uint64_t bit_count);

/// Full command-line entry point. Returns the process exit code.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace sdiqrng

#endif
