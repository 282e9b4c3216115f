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

#ifndef SDIQRNG_ADVERSARY_H
#define SDIQRNG_ADVERSARY_H

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "sdiqrng/bloch.h"

namespace sdiqrng {

struct PureComponent {
    double weight = 0;
    BlochVector direction;
};

/// A measurement, a (possibly mixed) state and one pure-state decomposition
/// of that state which an adversary might hold.
class AdversaryInstance {
   public:
    AdversaryInstance(BinaryPovm povm, QubitState state, std::vector<PureComponent> decomposition);

    const BinaryPovm &povm() const {
        return povm_;
    }
    const QubitState &state() const {
        return state_;
    }
    const std::vector<PureComponent> &decomposition() const {
        return decomposition_;
    }
    /// Average over components of pguess_pure; outcome labels are chosen so
    /// that the effective bias is min(a0, 1 - a0).
    double guessing_probability() const;

   private:
    BinaryPovm povm_;
    QubitState state_;
    std::vector<PureComponent> decomposition_;
};

/// Guessing probability 1 - a0 (1 - sqrt(1 - n_xy^2)) for a pure state whose
/// dual projective measurement has transverse component n_xy.
double pguess_pure(double a0, double n_xy);

/// min(1, |t x s| / (2 a0)) for a pure direction s.
double nxy_of(const BinaryPovm &povm, const BlochVector &pure_direction);

/// Fibonacci lattice of `count` near-uniform unit vectors.
std::vector<BlochVector> fibonacci_sphere(uint64_t count);

/// Maximum over two-component pure decompositions of the state of the
/// average pure-state guessing probability. The first direction ranges over
/// Fibonacci lattices of g^2 points for g = grid_n, grid_n/2, ... >= 8, so
/// doubling grid_n never lowers the result.
double max_pguess_numeric(const BinaryPovm &povm, const QubitState &state, uint64_t grid_n);

enum class VerdictKind {
    /// c_bound_ideal from exact expectations against the exact C.
    CLowerBound,
    /// Numeric guessing probability against the closed-form upper bound.
    GuessingProbability,
};

std::string_view to_string(VerdictKind kind);

struct OracleVerdict {
    uint64_t sample_index = 0;
    VerdictKind kind = VerdictKind::CLowerBound;
    double c_exact = 0;
    /// For CLowerBound: the exact C. For GuessingProbability: the closed-form bound.
    double analytic_bound = 0;
    /// For CLowerBound: the bound derived from expectations. For
    /// GuessingProbability: the grid-search guessing probability.
    double numeric = 0;
    /// Signed slack in the direction that must be non-negative.
    double margin = 0;
    /// The expectations failed the ordering check, so nothing was certified.
    bool aborted = false;
    bool violated = false;
};

struct SweepOptions {
    bool check_c_bound = true;
    bool check_guessing = true;
    uint64_t grid_n = 64;
    unsigned workers = 1;
};

/// A random valid measurement and state triple. Deterministic in (seed, index).
struct SweepSample {
    BinaryPovm povm;
    StateTriple states;
};
SweepSample sample_instance(uint64_t seed, uint64_t index);

std::vector<OracleVerdict> soundness_sweep(
    uint64_t n_samples, uint64_t seed, double tolerance, const SweepOptions &options = {});

/// Columns: sample_index,kind,c_exact,analytic_bound,numeric,margin,aborted,violated
void write_verdicts_csv(std::ostream &out, const std::vector<OracleVerdict> &verdicts);

}  // namespace sdiqrng

#endif
