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

#include "sdiqrng/adversary.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <thread>

#include "sdiqrng/entropy.h"
#include "sdiqrng/error.h"
#include "sdiqrng/philox.h"

namespace sdiqrng {

namespace {

/// Guessing probability of one pure component. Outcomes are relabeled so the
/// bias term is min(a0, 1 - a0); the closed form only holds on that side.
double component_pguess(const BinaryPovm &povm, const BlochVector &direction) {
    double a = std::min(povm.a0(), 1 - povm.a0());
    if (a <= 0) {
        return 1;
    }
    double n = std::min(1.0, povm.t().cross(direction).norm() / (2 * a));
    return pguess_pure(a, n);
}

BlochVector random_unit(PhiloxStream &rng) {
    double z = rng.uniform(-1, 1);
    double phi = rng.uniform(0, 2 * std::numbers::pi);
    double r = std::sqrt(std::max(0.0, 1 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

BlochVector normalized(const BlochVector &v) {
    double n = v.norm();
    return n > 0 ? v * (1 / n) : BlochVector{0, 0, 1};
}

/// Shrinks v to length <= cap, absorbing rounding in the purity ordering.
BlochVector capped(BlochVector v, double cap) {
    double n = v.norm();
    return n > cap ? v * (cap / n) : v;
}

}  // namespace

AdversaryInstance::AdversaryInstance(BinaryPovm povm, QubitState state, std::vector<PureComponent> decomposition)
    : povm_(povm), state_(state), decomposition_(std::move(decomposition)) {
    double total = 0;
    BlochVector mean;
    for (const auto &c : decomposition_) {
        if (!(c.weight >= 0) || std::abs(c.direction.norm() - 1) > kResultTol) {
            throw Error(ErrorKind::InvalidModel, "decomposition needs non-negative weights and unit directions");
        }
        total += c.weight;
        mean = mean + c.direction * c.weight;
    }
    if (std::abs(total - 1) > kResultTol || (mean - state_.bloch()).norm() > kResultTol) {
        throw Error(ErrorKind::InvalidModel, "decomposition does not reproduce the state");
    }
}

double AdversaryInstance::guessing_probability() const {
    double p = 0;
    for (const auto &c : decomposition_) {
        p += c.weight * component_pguess(povm_, c.direction);
    }
    return p;
}

double pguess_pure(double a0, double n_xy) {
    if (!(a0 >= 0 && a0 <= 1) || !(n_xy >= 0 && n_xy <= 1)) {
        throw Error(ErrorKind::InvalidModel, "pguess_pure needs a0 and n_xy in [0, 1]");
    }
    return 1 - a0 * (1 - std::sqrt(1 - n_xy * n_xy));
}

double nxy_of(const BinaryPovm &povm, const BlochVector &pure_direction) {
    if (povm.a0() <= 0) {
        throw Error(ErrorKind::InvalidModel, "n_xy is undefined for a0 = 0");
    }
    if (!pure_direction.is_finite() || std::abs(pure_direction.norm() - 1) > kResultTol) {
        throw Error(ErrorKind::InvalidModel, "pure direction must be a unit vector");
    }
    return std::min(1.0, povm.t().cross(pure_direction).norm() / (2 * povm.a0()));
}

std::vector<BlochVector> fibonacci_sphere(uint64_t count) {
    std::vector<BlochVector> points;
    points.reserve(count);
    const double golden_angle = std::numbers::pi * (3 - std::sqrt(5.0));
    for (uint64_t k = 0; k < count; ++k) {
        double z = 1 - (2 * static_cast<double>(k) + 1) / static_cast<double>(count);
        double r = std::sqrt(std::max(0.0, 1 - z * z));
        double phi = golden_angle * static_cast<double>(k);
        points.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
    return points;
}

double max_pguess_numeric(const BinaryPovm &povm, const QubitState &state, uint64_t grid_n) {
    if (grid_n < 8) {
        throw Error(ErrorKind::InvalidModel, "grid_n must be >= 8");
    }
    const BlochVector s = state.bloch();
    if (s.norm() >= 1 - kConstructionTol) {
        return component_pguess(povm, s);
    }
    // Lattices at grid_n, grid_n/2, ... down to 8 are all searched, so the
    // point set for grid_n contains the one for any grid_n / 2^k and the
    // maximum never decreases under refinement by doubling.
    double best = 0;
    for (uint64_t g = grid_n; g >= 8; g /= 2) {
        for (const auto &w1 : fibonacci_sphere(g * g)) {
            BlochVector d = s - w1;
            double len = d.norm();
            if (len < 1e-15) {
                continue;
            }
            d = d * (1 / len);
            // Second intersection of the chord through w1 and s with the sphere.
            BlochVector w2 = w1 - d * (2 * w1.dot(d));
            double chord = (w2 - w1).norm();
            double q1 = (w2 - s).norm() / chord;
            double value = q1 * component_pguess(povm, w1) + (1 - q1) * component_pguess(povm, normalized(w2));
            best = std::max(best, value);
        }
    }
    return best;
}

std::string_view to_string(VerdictKind kind) {
    return kind == VerdictKind::CLowerBound ? "c_lower_bound" : "guessing_probability";
}

SweepSample sample_instance(uint64_t seed, uint64_t index) {
    PhiloxStream rng(seed, index);
    double a0 = rng.next_unit();
    double t_len = 2 * std::min(a0, 1 - a0) * rng.next_unit();
    BlochVector t_dir = random_unit(rng);
    BlochVector t = t_dir * t_len;

    BlochVector s0;
    BlochVector s1;
    BlochVector s2;
    switch (index % 4) {
        case 1: {
            // Near-parallel measurement and generation state.
            double r0 = rng.next_unit();
            BlochVector tilt = random_unit(rng) * (1e-3 * rng.next_unit());
            s0 = normalized(t_dir + tilt) * r0;
            s1 = random_unit(rng) * (r0 * rng.next_unit());
            s2 = random_unit(rng) * (r0 * rng.next_unit());
            break;
        }
        case 2: {
            // Close to the ideal configuration: test states near +/- t, the
            // generation state near the plane orthogonal to t.
            double r0 = 1 - 0.2 * rng.next_unit();
            BlochVector ortho = normalized(t_dir.cross(random_unit(rng)));
            s0 = normalized(ortho + random_unit(rng) * (0.3 * rng.next_unit())) * r0;
            s1 = normalized(t_dir + random_unit(rng) * (0.3 * rng.next_unit())) * (r0 * (1 - 0.1 * rng.next_unit()));
            s2 = normalized(t_dir * -1 + random_unit(rng) * (0.3 * rng.next_unit())) *
                 (r0 * (1 - 0.1 * rng.next_unit()));
            break;
        }
        default: {
            double r0 = std::cbrt(rng.next_unit());
            s0 = random_unit(rng) * r0;
            s1 = random_unit(rng) * (r0 * rng.next_unit());
            s2 = random_unit(rng) * (r0 * rng.next_unit());
            break;
        }
    }
    double cap = s0.norm();
    return SweepSample{
        BinaryPovm(a0, capped(t, 2 * std::min(a0, 1 - a0))),
        StateTriple(QubitState(s0), QubitState(capped(s1, cap)), QubitState(capped(s2, cap)))};
}

std::vector<OracleVerdict> soundness_sweep(
    uint64_t n_samples, uint64_t seed, double tolerance, const SweepOptions &options) {
    if (n_samples == 0) {
        throw Error(ErrorKind::InvalidModel, "soundness sweep needs at least one sample");
    }
    const int per_sample = (options.check_c_bound ? 1 : 0) + (options.check_guessing ? 1 : 0);
    std::vector<OracleVerdict> verdicts(n_samples * per_sample);

    auto evaluate = [&](uint64_t i) {
        SweepSample sample = sample_instance(seed, i);
        const BinaryPovm &povm = sample.povm;
        double c_exact = randomness_parameter(povm.t(), sample.states.rho0().bloch());
        OracleVerdict *slot = &verdicts[i * per_sample];
        if (options.check_c_bound) {
            OracleVerdict v;
            v.sample_index = i;
            v.kind = VerdictKind::CLowerBound;
            v.c_exact = c_exact;
            v.analytic_bound = c_exact;
            CBound bound = c_bound_ideal(
                expectation(povm, sample.states.rho0()),
                expectation(povm, sample.states.rho1()),
                expectation(povm, sample.states.rho2()));
            v.aborted = !bound.ok();
            v.numeric = bound.value;
            v.margin = c_exact - bound.value;
            v.violated = !v.aborted && v.margin < -tolerance;
            *slot++ = v;
        }
        if (options.check_guessing) {
            OracleVerdict v;
            v.sample_index = i;
            v.kind = VerdictKind::GuessingProbability;
            v.c_exact = c_exact;
            v.analytic_bound = guessing_prob_upper(c_exact);
            v.numeric = max_pguess_numeric(povm, sample.states.rho0(), options.grid_n);
            v.margin = v.analytic_bound - v.numeric;
            v.violated = v.margin < -tolerance;
            *slot = v;
        }
    };

    unsigned workers = std::max(1u, options.workers);
    if (workers == 1) {
        for (uint64_t i = 0; i < n_samples; ++i) {
            evaluate(i);
        }
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (uint64_t i = w; i < n_samples; i += workers) {
                    evaluate(i);
                }
            });
        }
    }
    return verdicts;
}

void write_verdicts_csv(std::ostream &out, const std::vector<OracleVerdict> &verdicts) {
    out << "sample_index,kind,c_exact,analytic_bound,numeric,margin,aborted,violated\n";
    char line[256];
    for (const auto &v : verdicts) {
        std::snprintf(
            line,
            sizeof(line),
            "%llu,%s,%.17g,%.17g,%.17g,%.17g,%d,%d\n",
            static_cast<unsigned long long>(v.sample_index),
            std::string(to_string(v.kind)).c_str(),
            v.c_exact,
            v.analytic_bound,
            v.numeric,
            v.margin,
            v.aborted ? 1 : 0,
            v.violated ? 1 : 0);
        out << line;
    }
}

}  // namespace sdiqrng
