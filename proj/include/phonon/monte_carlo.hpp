#pragma once

#include <cstdint>
#include <span>

#include "phonon/dynamics.hpp"
#include "phonon/herald.hpp"
#include "phonon/readout.hpp"
#include "phonon/timetag.hpp"

namespace phonon {

// Per-pulse stochastic model of the write/delay/read protocol.
//
// Each repetition: (i) thermal phonons are drawn from the ambient occupancy;
// (ii) a pair number is drawn from the geometric pair-state law, its photons
// feeding the Stokes detector; (iii) the Stokes click fires with probability
// 1-(1-pi_0)(1-eta_S)^n; (iv) phonons relax for delay_ps, by independent
// survival e^{-gamma t} for an empty bath or through the exact birth-death
// propagator otherwise; (v) each phonon is detected with probability
// eta_read and routed to one of two detectors with probability 1/2;
// (vi) each anti-Stokes detector clicks on >= 1 photon or on noise (pi_AS).
struct ExperimentConfig {
    double p = 0.0;
    double nbar_ambient = 0.0;
    DecayParams decay{};
    double delay_ps = 0.0;
    DetectorModel stokes_det{0.1, 7.5e-7};
    ReadoutModel readout{};
    double pi_AS = 0.0;  // per anti-Stokes detector
    std::uint64_t repetitions = 0;
    std::uint64_t rng_seed = 0;
    double repetition_period_ns = 12.5;

    void validate() const;
};

struct CoincidenceCounts {
    std::uint64_t n_s = 0;
    std::uint64_t n_d1 = 0;
    std::uint64_t n_d2 = 0;
    std::uint64_t n_d1_s = 0;
    std::uint64_t n_d2_s = 0;
    std::uint64_t n_d1_d2 = 0;
    std::uint64_t n_d1_d2_s = 0;
    std::uint64_t repetitions = 0;

    CoincidenceCounts& operator+=(const CoincidenceCounts& o);
    friend bool operator==(const CoincidenceCounts&, const CoincidenceCounts&) = default;
};

// Runs the full experiment. Identical (config, seed) gives identical counts
// bit-for-bit. When `tags` is given, one record per detector click is
// appended, pulse-indexed from zero.
CoincidenceCounts simulate(const ExperimentConfig& config, TimeTagStream* tags = nullptr);

// Same experiment split over `batches` independently seeded RNG streams
// (stream b is seeded with derive_stream(rng_seed, b)), optionally run on
// several threads. Counts merge by addition, so the result depends only on
// (config, batches), never on scheduling. simulate() is the single-batch
// special case.
CoincidenceCounts simulate_batched(const ExperimentConfig& config, int batches,
                                   int threads = 0, TimeTagStream* tags = nullptr);

struct EstimateWithError {
    double value = 0.0;
    double std_error = 0.0;
};

// Triple-coincidence estimator alpha = N_{d1,d2,S} N_S / (N_{d1,S} N_{d2,S})
// with independent-Poisson error propagation. Zero triples yield value 0 with
// std_error set to the alpha of a single coincidence (a one-sided bound).
// Throws when either twofold coincidence count is zero.
EstimateWithError alpha_estimate(const CoincidenceCounts& counts);

// Unconditional photon-pair correlation from counts, treating the two
// anti-Stokes detectors as one channel by inclusion-exclusion:
// g2 = N_{S,AS} R / (N_S N_AS).
EstimateWithError g2_sas_estimate(const CoincidenceCounts& counts);

// Zero-delay bin over the mean of the side bins, skipping excluded offsets.
// Requires at least two side bins and a nonzero side total.
EstimateWithError g2_from_histogram(const StartStopHistogram& hist);

// Rebuilds per-pulse coincidence tallies from a time-tag stream. A record is
// a click; clicks of several channels in one pulse are coincidences.
// repetitions = 0 infers the count as (largest pulse index) + 1.
CoincidenceCounts counts_from_stream(std::span<const TimeTagRecord> records,
                                     std::uint64_t repetitions = 0);

}  // namespace phonon
