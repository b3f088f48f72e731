#pragma once

#include <vector>

#include "phonon/fock.hpp"

namespace phonon {

// Energy decay toward a thermal bath. Time unit is picoseconds throughout.
struct DecayParams {
    double gamma = 1.0 / 3.9;  // 1/ps
    double nbar_bath = 0.0;

    static DecayParams from_lifetime(double tau_ps, double nbar_bath = 0.0);
    double tau_ps() const { return 1.0 / gamma; }
    void validate() const;
};

// Right-hand side dP_k/dt of the birth-death rate equations
//   dP_k = gamma (nbar+1) [(k+1) P_{k+1} - k P_k] + gamma nbar [k P_{k-1} - (k+1) P_k]
// with a reflecting boundary at the truncation (no flow above max_n), so the
// components always sum to zero exactly.
std::vector<double> rate_rhs(const NumberDistribution& dist, const DecayParams& d);

// Fixed-step classic 4th-order Runge-Kutta integration of rate_rhs.
// dt_ps <= 0 selects the default step min(0.01/(gamma (1+nbar)), t/100).
// The normalization drift of the result (sum minus one) is written to
// *norm_drift when provided; it is reported, never repaired. Throws when a
// step produces a probability below -1e-9 (step too large).
NumberDistribution evolve_numeric(const NumberDistribution& initial, const DecayParams& d,
                                  double t_ps, double dt_ps = 0.0,
                                  double* norm_drift = nullptr);

// Exact solution of the same rate equations through the generating function
//   Q(z,t) = Q0(1 - (1-z) E / (1 + c (1-z))) / (1 + c (1-z)),
//   E = e^{-gamma t},  c = nbar (1 - E),
// with P_n(t) extracted as Taylor coefficients by truncated power-series
// arithmetic. n_trunc < 0 sizes the output so the dropped tail mass is
// negligible; an explicit n_trunc that loses more than 1e-8 of probability
// raises a series-truncation error.
NumberDistribution evolve_analytic(const NumberDistribution& initial, const DecayParams& d,
                                   double t_ps, int n_trunc = -1);

struct ThreeLevelOccupation {
    double p0 = 0.0, p1 = 0.0, p2 = 0.0;
};

// Closed forms for an initial state supported on n <= 2 decaying into an
// empty bath (nbar_bath is ignored and treated as zero):
//   P_0(t) = P_0 + (1-E) P_1 + (1-E)^2 P_2
//   P_1(t) = E P_1 + 2 E (1-E) P_2
//   P_2(t) = E^2 P_2
ThreeLevelOccupation pn_closed_form(const NumberDistribution& initial, const DecayParams& d,
                                    double t_ps);

// Conditional intensity correlation of a heralded near-|1> state after a
// delay t in a thermal bath: (2/p1_0) [1 - 1/(1 + nbar (e^{gamma t}-1))^2].
// Exact for an initial Fock |1>; rises monotonically from 0 to 2/p1_0.
double g2_conditional(double t_ps, double p1_0, const DecayParams& d);

// g2_conditional plus a constant anti-Stokes background offset alpha0.
double alpha_model(double t_ps, double p1_0, const DecayParams& d, double alpha0);

// Photon-pair correlation decay 1 + (g2_0 - 1) e^{-t/tau} for t >= 0 with
// accidental floor 1 for t < 0, optionally convolved with a Gaussian
// instrument response of the given FWHM (fs).
double g2_sas_decay_model(double t_ps, double g2_0, const DecayParams& d,
                          double irf_fwhm_fs = 0.0);

// ---------------------------------------------------------------------------
// Weighted least-squares fitting of the two decay models above.

struct DecaySample {
    double t_ps = 0.0;
    double value = 0.0;
    double std_error = 1.0;
};

enum class DecayModelKind {
    alpha,   // alpha_model(t; tau, alpha0) with fixed p1_0 and nbar
    g2_sas,  // g2_sas_decay_model(t; tau, g2_0)
};

struct FitOptions {
    double p1_0 = 0.985;       // alpha model only
    double nbar = 1.5e-3;      // alpha model only
    double irf_fwhm_fs = 0.0;  // g2_sas model only
    int max_iterations = 200;
};

struct FitResult {
    double tau_ps = 0.0;
    double tau_ci95 = 0.0;  // 95% confidence half-width
    // Second fitted parameter: g2_0 for g2_sas, alpha0 for alpha.
    double amplitude = 0.0;
    double amplitude_ci95 = 0.0;
    double chi2 = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Levenberg-Marquardt weighted least squares (weights 1/std_error^2) of
// (tau, amplitude). Deterministic: the starting point is derived from the
// samples by a fixed policy (see implementation). Throws on fewer than 4
// samples, fewer than 3 distinct times, or non-positive errors; throws on
// non-convergence within options.max_iterations.
FitResult fit_decay(const std::vector<DecaySample>& samples, DecayModelKind model,
                    const FitOptions& options = {});

}  // namespace phonon
