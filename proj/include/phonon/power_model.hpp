#pragma once

namespace phonon {

// Closed-form click statistics of the photon-pair state seen through
// non-number-resolving detectors: a Stokes herald detector (eta_S, pi_0) and
// an effective anti-Stokes detector (eta_AS, pi_AS) behind a 50/50 splitter.
// pi_AS is a per-detector click probability and bundles every noise source on
// that channel.
struct PowerModelParams {
    double p = 0.0158;       // pair probability per pulse
    double eta_S = 0.1;      // Stokes detection efficiency
    double pi_0 = 7.5e-7;    // Stokes dark/noise click probability
    double eta_AS = 0.019;   // effective phonon readout efficiency (total)
    double pi_AS = 3.1e-5;   // anti-Stokes noise click probability
    double energy_to_p = 4.66e-4;  // pair probability per pJ of pump energy

    void validate() const;
};

// Pair probability produced by a pump pulse of the given energy (linear
// calibration p = energy * energy_to_p).
double p_from_energy(const PowerModelParams& params, double energy_pj);

// Herald click probability per pulse:
// K = 1 - (1-pi_0)(1-p) / (1 - p (1-eta_S)).
double herald_probability(const PowerModelParams& params);

// Probability generating function E[x^n | herald click] of the phonon number
// conditioned on a Stokes click:
// zeta(x) = (1/K) [ (1-p)/(1-p x) - (1-pi_0)(1-p)/(1-p (1-eta_S) x) ].
// Throws on pole crossing (p x >= 1).
double heralded_pgf(double x, const PowerModelParams& params);

// Zero-delay triple-coincidence estimator implied by the closed forms:
//   alpha(0) = [1 - 2 (1-pi_AS) zeta(1-eta_AS/2) + (1-pi_AS)^2 zeta(1-eta_AS)]
//              / (1 - (1-pi_AS) zeta(1-eta_AS/2))^2,
// evaluated through algebraically identical cancellation-free forms so that
// the small-p limit is computed accurately.
double alpha_zero_delay(const PowerModelParams& params);

// Per-pulse singles and coincidence probabilities of the Stokes and
// (single effective) anti-Stokes channels.
struct SasClickProbabilities {
    double n_s = 0.0;
    double n_as = 0.0;
    double n_s_as = 0.0;
};

SasClickProbabilities sas_click_probabilities(const PowerModelParams& params);

// Unconditional photon-pair correlation g2_SAS = N_S,AS / (N_S N_AS).
// Throws when eta_AS = 0 (no anti-Stokes detection).
double g2_sas_power(const PowerModelParams& params);

// Leading-order event probabilities per pulse when lossy detectors
// (eta_d1, eta_d2) follow the 50/50 splitter, valid for P(1,1) >> P(2,2):
//   N_S         = eta_S P(1,1)
//   N_d1,S      = 1/2 eta_S eta_d1 P(1,1)
//   N_d2,S      = 1/2 eta_S eta_d2 P(1,1)
//   N_d1,d2,S   = 1/2 (2 eta_S - eta_S^2) eta_d1 eta_d2 P(2,2)
// The estimator built from these is independent of eta_d1 and eta_d2.
struct TripleCoincidenceProbabilities {
    double n_s = 0.0;
    double n_d1_s = 0.0;
    double n_d2_s = 0.0;
    double n_d1_d2_s = 0.0;
};

TripleCoincidenceProbabilities detection_probabilities(double p, double eta_S,
                                                       double eta_d1, double eta_d2);

// alpha = (4 - 2 eta_S) p, the loss-algebra value of the triple-coincidence
// estimator: 2p for perfect Stokes detection, 4p in the low-efficiency limit.
double alpha_loss(double p, double eta_S);

}  // namespace phonon
