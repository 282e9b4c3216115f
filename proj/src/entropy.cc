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

#include "sdiqrng/entropy.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdiqrng/bloch.h"
#include "sdiqrng/error.h"

namespace sdiqrng {

std::string_view to_string(AbortReason reason) {
    switch (reason) {
        case AbortReason::OrderingViolated:
            return "OrderingViolated";
        case AbortReason::NonPositiveWitness:
            return "NonPositiveWitness";
        case AbortReason::NoTestData:
            return "NoTestData";
        case AbortReason::NonPositiveLength:
            return "NonPositiveLength";
    }
    return "Unknown";
}

std::string_view to_string(PrefactorVariant v) {
    return v == PrefactorVariant::FluctuationAware ? "fluctuation_aware" : "eta_only";
}

PrefactorVariant parse_prefactor_variant(std::string_view text) {
    if (text == "fluctuation_aware") {
        return PrefactorVariant::FluctuationAware;
    }
    if (text == "eta_only") {
        return PrefactorVariant::EtaOnly;
    }
    throw Error(ErrorKind::Config, "unknown prefactor variant '" + std::string(text) + "'");
}

namespace {

void require_expectation(double g) {
    if (!(g >= -1 - kResultTol && g <= 1 + kResultTol)) {
        throw Error(ErrorKind::InvalidModel, "expectation values must lie in [-1, 1]");
    }
}

}  // namespace

SecurityBudget SecurityBudget::from_test_fraction(
    double epsilon_total, uint64_t n_total, double test_fraction, double mu, double sys_freq_hz) {
    if (!(test_fraction >= 0 && test_fraction < 1)) {
        throw Error(ErrorKind::InvalidModel, "test fraction must lie in [0, 1)");
    }
    SecurityBudget b;
    b.epsilon = epsilon_total / 7;
    b.n_total = n_total;
    b.n_test_per_state = static_cast<uint64_t>(std::floor(static_cast<double>(n_total) * test_fraction / 3));
    b.n_gen = n_total - 3 * b.n_test_per_state;
    b.mu = mu;
    b.sys_freq_hz = sys_freq_hz;
    b.validate();
    return b;
}

void SecurityBudget::validate() const {
    if (!(epsilon > 0 && epsilon < 1)) {
        throw Error(ErrorKind::InvalidModel, "epsilon must lie in (0, 1)");
    }
    if (n_total == 0 || n_gen + 3 * n_test_per_state > n_total) {
        throw Error(ErrorKind::InvalidModel, "round counts must satisfy n_gen + 3*n_test <= n_total");
    }
    if (!(mu >= 0) || !std::isfinite(mu)) {
        throw Error(ErrorKind::InvalidModel, "mean photon number must be finite and >= 0");
    }
    if (!(sys_freq_hz > 0)) {
        throw Error(ErrorKind::InvalidModel, "system frequency must be positive");
    }
}

double SecurityBudget::eta() const {
    return eta_single_or_vacuum(mu);
}

double SecurityBudget::theta_t() const {
    return hoeffding_delta(epsilon, n_test_per_state);
}

double SecurityBudget::theta_g() const {
    return hoeffding_delta(epsilon, n_gen);
}

CBound c_bound_ideal(double g0, double g1, double g2) {
    require_expectation(g0);
    require_expectation(g1);
    require_expectation(g2);
    double witness = (g1 - g0) * (g0 - g2);
    if (witness < 0) {
        return {0, AbortReason::OrderingViolated};
    }
    return {std::min(1.0, std::sqrt(witness)), std::nullopt};
}

double guessing_prob_upper(double c) {
    if (!(c >= 0 && c <= 1)) {
        throw Error(ErrorKind::InvalidModel, "C must lie in [0, 1]");
    }
    return 1 - (c / 2) * (1 - std::sqrt(1 - c * c));
}

double eta_single_or_vacuum(double mu) {
    if (!(mu >= 0)) {
        throw Error(ErrorKind::InvalidModel, "mean photon number must be >= 0");
    }
    return (1 + mu) * std::exp(-mu);
}

double hoeffding_delta(double epsilon, uint64_t n) {
    if (!(epsilon > 0 && epsilon <= 1)) {
        throw Error(ErrorKind::InvalidModel, "epsilon must lie in (0, 1]");
    }
    if (n == 0) {
        throw Error(ErrorKind::InvalidModel, "Hoeffding deviation needs at least one sample");
    }
    return std::sqrt(std::log(1 / epsilon) / (2 * static_cast<double>(n)));
}

CBound c_bound_practical(
    const ExpectationTriple &ge,
    const SecurityBudget &budget,
    PrefactorVariant variant,
    std::optional<double> theta_t_override) {
    require_expectation(ge.g0);
    require_expectation(ge.g1);
    require_expectation(ge.g2);
    budget.validate();
    if (budget.n_test_per_state == 0) {
        return {0, AbortReason::NoTestData};
    }
    double eta = budget.eta();
    double theta = theta_t_override ? *theta_t_override : budget.theta_t();
    double allowance = 2 * (1 - eta) + 4 * theta;

    // The bound is symmetric and concave in g0 about the midpoint of g1 and g2;
    // the allowance goes on whichever side is worst for the observed g0.
    double witness;
    if (ge.g0 >= (ge.g1 + ge.g2) / 2) {
        witness = (ge.g1 - ge.g0 - allowance) * (ge.g0 - ge.g2);
    } else {
        witness = (ge.g1 - ge.g0) * (ge.g0 - ge.g2 - allowance);
    }
    if (!(witness >= 0)) {
        return {0, AbortReason::NonPositiveWitness};
    }
    double prefactor = variant == PrefactorVariant::FluctuationAware ? 1 / (eta + theta) : 1 / eta;
    return {std::clamp(prefactor * std::sqrt(witness), 0.0, 1.0), std::nullopt};
}

EntropyReport final_length(double c, const SecurityBudget &budget, const LengthOptions &options) {
    budget.validate();
    EntropyReport report;
    report.c_bound = c;
    report.p_guess = guessing_prob_upper(c);

    double theta_g = options.theta_g_override ? *options.theta_g_override : budget.theta_g();
    double credit = options.conservative_eta ? budget.eta() - theta_g : budget.eta() + theta_g;
    credit = std::max(0.0, credit);
    double per_round = -std::log(report.p_guess) / std::log(2.0);
    report.min_entropy_bits = static_cast<double>(budget.n_gen) * credit * per_round;

    // Leftover hash penalty 2*log2(1/(2 epsilon)).
    double penalty = 2 * std::log(1 / (2 * budget.epsilon)) / std::log(2.0);
    double length = std::floor(report.min_entropy_bits - penalty);
    if (!(length > 0)) {
        report.length_bits = 0;
        report.abort = AbortReason::NonPositiveLength;
    } else {
        report.length_bits = static_cast<uint64_t>(length);
    }
    report.rate_bps = static_cast<double>(report.length_bits) * budget.sys_freq_hz / static_cast<double>(budget.n_total);
    return report;
}

double multiphoton_adjust(double g_prime, double pr_le1, WorstCaseSign sign) {
    require_expectation(g_prime);
    if (!(pr_le1 > 0 && pr_le1 <= 1)) {
        throw Error(ErrorKind::InvalidModel, "single-or-vacuum probability must lie in (0, 1]");
    }
    double multi = 1 - pr_le1;
    double g = sign == WorstCaseSign::Minus ? (g_prime - multi) / pr_le1 : (g_prime + multi) / pr_le1;
    return std::clamp(g, -1.0, 1.0);
}

}  // namespace sdiqrng
