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

#ifndef SDIQRNG_ENTROPY_H
#define SDIQRNG_ENTROPY_H

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sdiqrng {

/// Why a parameter-estimation or length computation refused to certify output.
enum class AbortReason {
    /// (g1 - g0)(g0 - g2) < 0 for the idealized bound.
    OrderingViolated,
    /// The fluctuation and multiphoton allowances exceed the expectation gap.
    NonPositiveWitness,
    /// At least one setting has no test rounds to estimate from.
    NoTestData,
    /// The leftover-hash penalty exceeds the certified min-entropy.
    NonPositiveLength,
};

std::string_view to_string(AbortReason reason);

/// Which prefactor the practical C bound uses: 1/(eta + theta_t) or the
/// looser 1/eta.
enum class PrefactorVariant { FluctuationAware, EtaOnly };

std::string_view to_string(PrefactorVariant v);
PrefactorVariant parse_prefactor_variant(std::string_view text);

/// Finite-size parameters of one block of protocol rounds.
struct SecurityBudget {
    double epsilon = 1e-10;  // per-term failure probability
    uint64_t n_total = 0;
    uint64_t n_gen = 0;
    uint64_t n_test_per_state = 0;
    double mu = 0;
    double sys_freq_hz = 1e7;

    /// Splits n_total so that 3*n_test_per_state = floor(n_total*test_fraction)
    /// (rounded down to a multiple of 3) and the rest are generation rounds.
    static SecurityBudget from_test_fraction(
        double epsilon_total, uint64_t n_total, double test_fraction, double mu, double sys_freq_hz);

    void validate() const;
    /// Composed failure probability, 7 * epsilon.
    double epsilon_total() const {
        return 7 * epsilon;
    }
    double eta() const;
    double theta_t() const;
    double theta_g() const;
};

struct CBound {
    double value = 0;
    std::optional<AbortReason> abort;

    bool ok() const {
        return !abort.has_value();
    }
};

struct ExpectationTriple {
    double g0 = 0;
    double g1 = 0;
    double g2 = 0;
};

struct EntropyReport {
    double c_bound = 0;
    double p_guess = 1;
    double min_entropy_bits = 0;
    uint64_t length_bits = 0;
    double rate_bps = 0;
    std::optional<AbortReason> abort;

    bool aborted() const {
        return abort.has_value();
    }
};

CBound c_bound_ideal(double g0, double g1, double g2);

/// 1 - (c/2)(1 - sqrt(1 - c^2)); upper bound on the per-round guessing probability.
double guessing_prob_upper(double c);

/// Poisson probability (1 + mu) e^-mu of at most one photon.
double eta_single_or_vacuum(double mu);

/// Chernoff-Hoeffding deviation sqrt(ln(1/epsilon) / (2n)).
double hoeffding_delta(double epsilon, uint64_t n);

/// Worst-case C from measured expectations of a phase-randomized coherent
/// source, with multiphoton and finite-size allowances taken from the budget.
CBound c_bound_practical(
    const ExpectationTriple &ge,
    const SecurityBudget &budget,
    PrefactorVariant variant = PrefactorVariant::FluctuationAware,
    std::optional<double> theta_t_override = std::nullopt);

struct LengthOptions {
    /// Credit generation rounds with (eta - theta_g) instead of (eta + theta_g).
    bool conservative_eta = false;
    /// Test seam: replaces theta_g when set.
    std::optional<double> theta_g_override;
};

EntropyReport final_length(double c, const SecurityBudget &budget, const LengthOptions &options = {});

enum class WorstCaseSign { Plus, Minus };

/// Single-photon-subspace expectation implied by a measured g' when the
/// multiphoton fraction (1 - pr_le1) is adversarial: (g' -/+ (1 - pr_le1)) / pr_le1,
/// clamped to [-1, 1].
double multiphoton_adjust(double g_prime, double pr_le1, WorstCaseSign sign);

}  // namespace sdiqrng

#endif
