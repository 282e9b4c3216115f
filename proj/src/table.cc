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

#include "sdiqrng/table.h"

#include <charconv>
#include <cmath>
#include <string_view>
#include <numbers>
#include <ostream>

#include "sdiqrng/philox.h"

namespace sdiqrng {

const std::array<MisalignmentRow, 3> &reference_rows() {
    static const std::array<MisalignmentRow, 3> rows{{
        {"pi/14",
         std::numbers::pi / 14,
         {0.13572, 0.18477, 0.224949, 0.22938, 0.203536, 0.155877},
         {8874.4, 22204.7, 38934.8, 40415.4, 26480.1, 11425.8}},
        {"pi/12",
         std::numbers::pi / 12,
         {0.123149, 0.169014, 0.211249, 0.213496, 0.16917, 0.118635},
         {6607.6, 16952.3, 32176.2, 32505.6, 15119.8, 4986.6}},
        {"pi/9",
         std::numbers::pi / 9,
         {0.0989554, 0.135744, 0.161014, 0.158786, 0.0660784, 0},
         {3392.1, 8726.3, 14133.8, 13255.4, 834.4, 0}},
    }};
    return rows;
}

bool TableCell::c_within_tolerance() const {
    return std::abs(sim_c - reference_c) <= kTableCTolerance;
}

bool TableCell::rate_within_tolerance() const {
    if (reference_rate_bps == 0) {
        return sim_rate_bps == 0;
    }
    return std::abs(sim_rate_bps - reference_rate_bps) <= kTableRateRelTolerance * reference_rate_bps;
}

namespace {

constexpr uint64_t kTableStream = 0x7461626c65ULL;

struct BoundOutcome {
    double c = 0;
    double rate = 0;
    std::optional<AbortReason> abort;
};

BoundOutcome bound_from(const ExpectationTriple &ge, const RunConfig &config) {
    SecurityBudget budget = config.budget();
    CBound c = c_bound_practical(ge, budget, config.prefactor);
    if (!c.ok()) {
        return {0, 0, c.abort};
    }
    EntropyReport r = final_length(c.value, budget, config.length_options());
    return {c.value, r.rate_bps, r.abort};
}

}  // namespace

std::vector<TableCell> run_table(const RunConfig &base, unsigned workers) {
    std::vector<TableCell> cells;
    uint64_t index = 0;
    for (const auto &row : reference_rows()) {
        for (size_t i = 0; i < kTableMus.size(); ++i, ++index) {
            RunConfig config = base;
            config.source.mu = kTableMus[i];
            config.source.set_total_misalignment(row.radians);
            config.validate();

            TableCell cell;
            cell.mu = kTableMus[i];
            cell.misalign_label = row.label;
            cell.misalign_rad = row.radians;
            cell.reference_c = row.reference_c[i];
            cell.reference_rate_bps = row.reference_rate_bps[i];

            uint64_t seed = Philox4x64::generate({index, 0, 0, 0}, {base.master_seed, kTableStream})[0];
            SimulationOptions options = config.simulation_options();
            options.workers = workers;
            SimulationResult sim = run_protocol(config.source, config.detector, config.n_rounds, seed, options);
            for (int s = 0; s < 3; ++s) {
                cell.sim_g[s] = sim.stats.ge(s);
                cell.analytic_g[s] = analytic_expectation(s, config.source, config.detector);
            }
            BoundOutcome simulated = bound_from({cell.sim_g[0], cell.sim_g[1], cell.sim_g[2]}, config);
            cell.sim_c = simulated.c;
            cell.sim_rate_bps = simulated.rate;
            cell.sim_abort = simulated.abort;
            BoundOutcome analytic =
                bound_from({cell.analytic_g[0], cell.analytic_g[1], cell.analytic_g[2]}, config);
            cell.analytic_c = analytic.c;
            cell.analytic_rate_bps = analytic.rate;
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

void write_table_csv(std::ostream &out, const std::vector<TableCell> &cells) {
    out << "mu,misalign,misalign_rad,sim_g0,sim_g1,sim_g2,sim_c,sim_rate_bps,analytic_g0,analytic_g1,analytic_g2,"
           "analytic_c,analytic_rate_bps,reference_c,reference_rate_bps,c_within_tol,rate_within_tol,abort\n";
    char buf[64];
    auto num = [&](double v) {
        auto res = std::to_chars(buf, buf + sizeof(buf), v);
        out << std::string_view(buf, res.ptr - buf);
    };
    for (const auto &c : cells) {
        num(c.mu);
        out << ',' << c.misalign_label << ',';
        num(c.misalign_rad);
        for (double g : c.sim_g) {
            out << ',';
            num(g);
        }
        out << ',';
        num(c.sim_c);
        out << ',';
        num(c.sim_rate_bps);
        for (double g : c.analytic_g) {
            out << ',';
            num(g);
        }
        out << ',';
        num(c.analytic_c);
        out << ',';
        num(c.analytic_rate_bps);
        out << ',';
        num(c.reference_c);
        out << ',';
        num(c.reference_rate_bps);
        out << ',' << (c.c_within_tolerance() ? 1 : 0) << ',' << (c.rate_within_tolerance() ? 1 : 0) << ',';
        if (c.sim_abort) {
            out << to_string(*c.sim_abort);
        }
        out << '\n';
    }
}

}  // namespace sdiqrng
