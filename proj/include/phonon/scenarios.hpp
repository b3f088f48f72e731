#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "phonon/monte_carlo.hpp"

namespace phonon {

using Json = nlohmann::json;

// Scenario configurations parse from JSON with a strict schema: unknown keys
// are rejected, every field has a default matching the reference parameter
// set (tau = 3.9 ps, nbar = 1.5e-3, eta_S = 0.1, pi_0 = 7.5e-7,
// eta_AS = 0.019, pi_AS = 3.1e-5, alpha0 = 0.08). to_json() emits the fully
// resolved configuration; feeding it back reproduces the run bit-for-bit.

struct DecayScanConfig {
    std::vector<double> t_grid_ps;  // resolved; JSON also accepts start/stop/step
    double tau_ps = 3.9;
    double nbar = 1.5e-3;
    double p1_0 = 0.985;
    double alpha0 = 0.08;
    double g2_sas_0 = 30.0;
    double irf_fwhm_fs = 0.0;
    double p = 0.0158;
    double eta_s = 0.1;
    double pi_0 = 7.5e-7;

    static DecayScanConfig from_json(const Json& j);
    Json to_json() const;
};

struct PowerScanConfig {
    std::vector<double> energy_grid_pj;  // resolved; JSON also accepts start/stop/points
    double energy_to_p = 4.66e-4;
    double eta_s = 0.1;
    double pi_0 = 7.5e-7;
    double eta_as = 0.019;
    double pi_as = 3.1e-5;

    static PowerScanConfig from_json(const Json& j);
    Json to_json() const;
};

struct HeraldConfig {
    double p = 0.0158;
    double eta_s = 0.1;
    double pi_0 = 7.5e-7;
    int n_trunc = -1;

    static HeraldConfig from_json(const Json& j);
    Json to_json() const;
};

struct MonteCarloRunConfig {
    ExperimentConfig experiment;
    int batches = 1;
    int threads = 0;
    std::string tags_path;  // empty: no time-tag stream is written

    static MonteCarloRunConfig from_json(const Json& j);
    Json to_json() const;
};

struct AnalyzeConfig {
    std::string input;
    std::int64_t max_offset = 10;
    std::vector<std::int64_t> exclusion_offsets;
    std::uint64_t repetitions = 0;  // 0: inferred from the stream
    std::vector<std::pair<Channel, Channel>> histograms = {
        {Channel::S, Channel::D1}, {Channel::S, Channel::D2}, {Channel::D1, Channel::D2}};

    static AnalyzeConfig from_json(const Json& j);
    Json to_json() const;
};

// A scan result: column-oriented rows plus the resolved config it came from.
struct Table {
    std::string scenario;
    Json config;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    // "# phonon-herald <scenario> v1", "# config <json>", header, then one
    // CSV line per row with round-trip-exact doubles.
    std::string to_csv() const;
};

// Model curves over the delay grid: t_ps, alpha, g2_sas, p0, p1, p2.
Table run_decay_scan(const DecayScanConfig& config);

// Closed-form pump-power scan: energy_pj, p, n_s, alpha0, g2_sas.
Table run_power_scan(const PowerScanConfig& config);

// Conditional-state report: exact linear/squared conditioning, the
// three-level approximation, and the two vacuum weights side by side.
Json run_herald(const HeraldConfig& config);

// Runs the simulation, writes the optional time-tag stream, and reports
// counts plus the alpha and g2_SAS estimators.
Json run_montecarlo(const MonteCarloRunConfig& config);

// Reads a time-tag stream and reports per-channel totals, coincidence
// counts, alpha, and histogram g2(0) for the configured channel pairs.
Json run_analyze(const AnalyzeConfig& config);

}  // namespace phonon
