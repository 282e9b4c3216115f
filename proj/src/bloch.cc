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

#include "sdiqrng/bloch.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sdiqrng/error.h"

namespace sdiqrng {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidModel:
            return "InvalidModel";
        case ErrorKind::InvalidLength:
            return "InvalidLength";
        case ErrorKind::InsufficientData:
            return "InsufficientData";
        case ErrorKind::PrerequisiteFailed:
            return "PrerequisiteFailed";
        case ErrorKind::AbortedRun:
            return "AbortedRun";
        case ErrorKind::Config:
            return "Config";
        case ErrorKind::Io:
            return "Io";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string &message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {
}

double BlochVector::norm() const {
    return std::sqrt(x * x + y * y + z * z);
}

double BlochVector::dot(const BlochVector &o) const {
    return x * o.x + y * o.y + z * o.z;
}

BlochVector BlochVector::cross(const BlochVector &o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
}

bool BlochVector::is_finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
}

namespace {

void require_state_vector(const BlochVector &v, const char *what) {
    if (!v.is_finite() || v.norm() > 1 + kConstructionTol) {
        throw Error(ErrorKind::InvalidModel, std::string(what) + " must be a finite vector of length <= 1");
    }
}

}  // namespace

QubitState::QubitState(BlochVector bloch) : bloch_(bloch) {
    require_state_vector(bloch_, "state Bloch vector");
}

BinaryPovm::BinaryPovm(double a0, BlochVector t) : a0_(a0), t_(t) {
    if (!(a0 >= 0 && a0 <= 1)) {
        throw Error(ErrorKind::InvalidModel, "POVM bias a0 must lie in [0, 1]");
    }
    if (!t.is_finite() || t.norm() > 2 * std::min(a0, 1 - a0) + kConstructionTol) {
        throw Error(ErrorKind::InvalidModel, "POVM vector violates |t| <= 2*min(a0, 1 - a0)");
    }
}

StateTriple::StateTriple(QubitState rho0, QubitState rho1, QubitState rho2)
    : rho0_(rho0), rho1_(rho1), rho2_(rho2) {
    double n0 = rho0_.bloch().norm();
    if (n0 < rho1_.bloch().norm() - kConstructionTol || n0 < rho2_.bloch().norm() - kConstructionTol) {
        throw Error(ErrorKind::InvalidModel, "generation state must be at least as pure as both test states");
    }
}

double expectation(const BinaryPovm &povm, const QubitState &state) {
    double g = (2 * povm.a0() - 1) + povm.t().dot(state.bloch());
    if (!(std::abs(g) <= 1 + kResultTol)) {
        throw Error(ErrorKind::InvalidModel, "expectation outside [-1, 1]");
    }
    return std::clamp(g, -1.0, 1.0);
}

double randomness_parameter(const BlochVector &t, const BlochVector &s0) {
    require_state_vector(t, "measurement vector");
    require_state_vector(s0, "generation state vector");
    return std::min(1.0, t.cross(s0).norm());
}

double bloch_length_from_noise(double theta_range) {
    if (!(theta_range >= 0 && theta_range <= std::numbers::pi / 2 + kConstructionTol)) {
        throw Error(ErrorKind::InvalidModel, "noise range must lie in [0, pi/2]");
    }
    double x = 2 * theta_range;
    if (theta_range < 1e-6) {
        // sin(x)/x = 1 - x^2/6 + x^4/120
        double x2 = x * x;
        return 1 - x2 / 6 + x2 * x2 / 120;
    }
    return std::max(0.0, std::sin(x) / x);
}

QubitState state_from_polar(double theta, double phi, double radius) {
    if (!(radius >= 0 && radius <= 1)) {
        throw Error(ErrorKind::InvalidModel, "radius must lie in [0, 1]");
    }
    double st = std::sin(theta);
    return QubitState({radius * st * std::cos(phi), radius * st * std::sin(phi), radius * std::cos(theta)});
}

}  // namespace sdiqrng
