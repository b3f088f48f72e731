#pragma once

#include "phonon/fock.hpp"

namespace phonon {

// Non-number-resolving click detector: efficiency per photon plus an
// independent per-pulse dark/background click probability.
struct DetectorModel {
    double efficiency = 1.0;
    double noise_prob = 0.0;

    void validate() const;
};

// Click probability given exactly n photons: 1 - (1-pi)(1-eta)^n.
double click_weight(const DetectorModel& det, int n);

// How the click weight enters the conditional state.
//   linear  — standard POVM conditioning of a diagonal state, P_n ∝ P(n,n) w_n.
//   squared — sandwich conditioning, P_n ∝ P(n,n) w_n^2 (the n = 0 term is the
//             dark-noise-squared vacuum weight). Default, used for figure
//             reproduction; see herald() notes.
enum class WeightMode { linear, squared };

// Phonon number distribution conditioned on a click of the pair state's
// photon mode. Throws std::runtime_error when the total click probability
// vanishes (conditioning on an impossible event).
NumberDistribution herald(const JointPairState& joint, const DetectorModel& det,
                          WeightMode mode = WeightMode::squared);

// Three-level approximation of the heralded state: unnormalized weights
// { pi/(2 eta p), 1, p } on n = 0, 1, 2, then normalized. Valid deep in the
// regime eta p >> pi with p << 1; `noise_warning` is set when eta p < 10 pi.
struct HeraldedApprox {
    NumberDistribution state;
    bool noise_warning = false;
};

HeraldedApprox heralded_state_approx(double p, double eta, double noise_prob);

// Per-pulse probability that the photon detector clicks at all:
// sum over n of P(n,n) w_n. Reduces to eta p + pi for small p and pi.
double herald_click_probability(const JointPairState& joint, const DetectorModel& det);

}  // namespace phonon
