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

#ifndef SDIQRNG_BLOCH_H
#define SDIQRNG_BLOCH_H

namespace sdiqrng {

/// Slack allowed when validating constructed states and measurements.
inline constexpr double kConstructionTol = 1e-12;
/// Slack allowed on computed quantities such as expectations.
inline constexpr double kResultTol = 1e-9;

struct BlochVector {
    double x = 0;
    double y = 0;
    double z = 0;

    double norm() const;
    double dot(const BlochVector &other) const;
    BlochVector cross(const BlochVector &other) const;
    bool is_finite() const;

    BlochVector operator+(const BlochVector &o) const {
        return {x + o.x, y + o.y, z + o.z};
    }
    BlochVector operator-(const BlochVector &o) const {
        return {x - o.x, y - o.y, z - o.z};
    }
    BlochVector operator*(double s) const {
        return {x * s, y * s, z * s};
    }
    bool operator==(const BlochVector &) const = default;
};

/// A qubit state in Bloch form. Pure states sit on the unit sphere, mixed
/// states strictly inside it.
class QubitState {
   public:
    explicit QubitState(BlochVector bloch);
    const BlochVector &bloch() const {
        return bloch_;
    }

   private:
    BlochVector bloch_;
};

/// Two-outcome qubit measurement F0 = a0*I + (t/2).sigma, F1 = I - F0.
/// Both elements are positive semidefinite iff |t| <= 2*min(a0, 1 - a0).
class BinaryPovm {
   public:
    BinaryPovm(double a0, BlochVector t);
    double a0() const {
        return a0_;
    }
    const BlochVector &t() const {
        return t_;
    }

   private:
    double a0_;
    BlochVector t_;
};

/// Generation state rho0 plus the two test states. The generation state must
/// be at least as pure as either test state.
class StateTriple {
   public:
    StateTriple(QubitState rho0, QubitState rho1, QubitState rho2);
    const QubitState &rho0() const {
        return rho0_;
    }
    const QubitState &rho1() const {
        return rho1_;
    }
    const QubitState &rho2() const {
        return rho2_;
    }

   private:
    QubitState rho0_;
    QubitState rho1_;
    QubitState rho2_;
};

/// Tr[(F0 - F1) rho] = (2*a0 - 1) + t.s
double expectation(const BinaryPovm &povm, const QubitState &state);

/// C = |t x s0|, the randomness parameter of a measurement/state pair.
double randomness_parameter(const BlochVector &t, const BlochVector &s0);

/// Bloch length sin(2r)/(2r) of a state smeared uniformly over a cap of
/// half-range r (radians, in [0, pi/2]).
double bloch_length_from_noise(double theta_range);

QubitState state_from_polar(double theta, double phi, double radius);

}  // namespace sdiqrng

#endif
