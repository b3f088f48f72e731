#pragma once

#include "phonon/fock.hpp"

namespace phonon {

// Effective phonon-to-detected-photon conversion for the readout pulse, plus
// the phenomenological noise admixture parameters. eta_read bundles the
// interaction strength with collection and detector efficiency into one
// survival probability.
struct ReadoutModel {
    double eta_read = 0.019;
    double noise_fraction = 0.0;  // epsilon of the noise beam splitter
    double noise_nbar = 0.0;      // occupancy of the admixed noise mode

    void validate() const;
};

// Binomial loss channel: every quantum survives independently with the given
// probability. P'_m = sum_{n>=m} C(n,m) s^m (1-s)^{n-m} P_n.
NumberDistribution thin(const NumberDistribution& dist, double survival);

// g2 evaluated after thinning. Normalized factorial moments are invariant
// under binomial loss, so this equals g2(dist); both routes are computed and
// cross-checked before returning the thinned-route value.
double g2_after_thinning(const NumberDistribution& dist, double survival);

enum class NoisyG2Form { exact, first_order };

// Intensity correlation of the signal mode after mixing a fraction eps of a
// noise mode (mean n_noise, correlation g2_noise) on a beam splitter:
//   exact:       [(1-e)^2 n^2 g2 + e^2 nT^2 g2T + 2 e (1-e) n nT] / [(1-e) n + e nT]^2
//   first_order: g2 + 2 e nT / ((1-e) n)
// *regime_warning is set when the noise-to-signal ratio exceeds 0.2 in
// first_order mode.
double noisy_g2(double g2_signal, double n_signal, double eps, double n_noise,
                double g2_noise = 2.0, NoisyG2Form form = NoisyG2Form::exact,
                bool* regime_warning = nullptr);

// Background offset implied by a measured photon-pair correlation:
// alpha0 = 2 / g2_sas. Throws when g2_sas <= 1 (no signal above accidentals).
double alpha_offset(double g2_sas);

}  // namespace phonon
