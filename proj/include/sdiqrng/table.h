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

#ifndef SDIQRNG_TABLE_H
#define SDIQRNG_TABLE_H

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sdiqrng/config.h"

namespace sdiqrng {

inline constexpr std::array<double, 6> kTableMus{0.21, 0.33, 0.49, 0.58, 0.78, 0.89};

struct MisalignmentRow {
    std::string label;
    double radians;
    std::array<double, 6> reference_c;
    std::array<double, 6> reference_rate_bps;
};

/// Measured values of the reference experiment, one row per total misalignment.
const std::array<MisalignmentRow, 3> &reference_rows();

inline constexpr double kTableCTolerance = 0.02;
inline constexpr double kTableRateRelTolerance = 0.10;

struct TableCell {
    double mu = 0;
    std::string misalign_label;
    double misalign_rad = 0;
    std::array<double, 3> sim_g{};
    double sim_c = 0;
    double sim_rate_bps = 0;
    std::optional<AbortReason> sim_abort;
    std::array<double, 3> analytic_g{};
    double analytic_c = 0;
    double analytic_rate_bps = 0;
    double reference_c = 0;
    double reference_rate_bps = 0;

    bool c_within_tolerance() const;
    /// Relative tolerance, or exactly zero when the reference rate is zero.
    bool rate_within_tolerance() const;
};

/// Simulates every (misalignment, mu) cell with `base` otherwise unchanged.
/// Cell k uses a seed derived from base.master_seed and k.
std::vector<TableCell> run_table(const RunConfig &base, unsigned workers = 0);

void write_table_csv(std::ostream &out, const std::vector<TableCell> &cells);

}  // namespace sdiqrng

#endif
