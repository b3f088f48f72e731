#include "phonon/scenarios.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "phonon/power_model.hpp"

namespace phonon {

namespace {

// Accessor that tracks which keys were consumed; finish() rejects the rest.
class StrictObject {
  public:
    StrictObject(const Json& j, std::string context) : obj_(j), context_(std::move(context)) {
        if (!obj_.is_object())
            throw std::runtime_error(context_ + ": configuration must be a JSON object");
    }

    template <typename T>
    T get(const char* key, T fallback) {
        known_.insert(key);
        if (!obj_.contains(key)) return fallback;
        try {
            return obj_.at(key).get<T>();
        } catch (const Json::exception&) {
            throw std::runtime_error(context_ + ": bad value for key '" + key + "'");
        }
    }

    bool has(const char* key) {
        known_.insert(key);
        return obj_.contains(key);
    }

    const Json& raw(const char* key) {
        known_.insert(key);
        return obj_.at(key);
    }

    void expect_scenario(const char* name) {
        const auto scenario = get<std::string>("scenario", name);
        if (scenario != name)
            throw std::runtime_error(context_ + ": scenario '" + scenario +
                                     "' does not match '" + name + "'");
    }

    void finish() {
        for (const auto& [key, value] : obj_.items()) {
            if (!known_.contains(key))
                throw std::runtime_error(context_ + ": unknown key '" + key + "'");
        }
    }

  private:
    const Json& obj_;
    std::string context_;
    std::set<std::string> known_;
};

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Json channel_pairs_json(const std::vector<std::pair<Channel, Channel>>& pairs) {
    Json arr = Json::array();
    for (const auto& [a, b] : pairs)
        arr.push_back(Json::array({channel_name(a), channel_name(b)}));
    return arr;
}

Json distribution_json(const NumberDistribution& dist) {
    Json arr = Json::array();
    for (double v : dist.probs()) arr.push_back(v);
    return arr;
}

}  // namespace

DecayScanConfig DecayScanConfig::from_json(const Json& j) {
    StrictObject o(j, "decay-scan");
    o.expect_scenario("decay-scan");
    DecayScanConfig c;
    if (o.has("t_grid_ps")) {
        c.t_grid_ps = o.get<std::vector<double>>("t_grid_ps", {});
        if (o.has("t_start_ps") || o.has("t_stop_ps") || o.has("t_step_ps"))
            throw std::runtime_error("decay-scan: give either t_grid_ps or start/stop/step");
    } else {
        const double start = o.get<double>("t_start_ps", 0.0);
        const double stop = o.get<double>("t_stop_ps", 20.0);
        const double step = o.get<double>("t_step_ps", 0.5);
        if (!(step > 0.0) || stop < start)
            throw std::runtime_error("decay-scan: bad t grid specification");
        for (double t = start; t <= stop + 1e-12; t += step) c.t_grid_ps.push_back(t);
    }
    c.tau_ps = o.get<double>("tau_ps", c.tau_ps);
    c.nbar = o.get<double>("nbar", c.nbar);
    c.p1_0 = o.get<double>("p1_0", c.p1_0);
    c.alpha0 = o.get<double>("alpha0", c.alpha0);
    c.g2_sas_0 = o.get<double>("g2_sas_0", c.g2_sas_0);
    c.irf_fwhm_fs = o.get<double>("irf_fwhm_fs", c.irf_fwhm_fs);
    c.p = o.get<double>("p", c.p);
    c.eta_s = o.get<double>("eta_s", c.eta_s);
    c.pi_0 = o.get<double>("pi_0", c.pi_0);
    o.finish();
    if (c.t_grid_ps.empty()) throw std::runtime_error("decay-scan: empty delay grid");
    return c;
}

Json DecayScanConfig::to_json() const {
    return Json{{"scenario", "decay-scan"}, {"t_grid_ps", t_grid_ps},
                {"tau_ps", tau_ps},         {"nbar", nbar},
                {"p1_0", p1_0},             {"alpha0", alpha0},
                {"g2_sas_0", g2_sas_0},     {"irf_fwhm_fs", irf_fwhm_fs},
                {"p", p},                   {"eta_s", eta_s},
                {"pi_0", pi_0}};
}

PowerScanConfig PowerScanConfig::from_json(const Json& j) {
    StrictObject o(j, "power-scan");
    o.expect_scenario("power-scan");
    PowerScanConfig c;
    if (o.has("energy_grid_pj")) {
        c.energy_grid_pj = o.get<std::vector<double>>("energy_grid_pj", {});
        if (o.has("energy_start_pj") || o.has("energy_stop_pj") || o.has("points"))
            throw std::runtime_error(
                "power-scan: give either energy_grid_pj or start/stop/points");
    } else {
        const double start = o.get<double>("energy_start_pj", 10.0);
        const double stop = o.get<double>("energy_stop_pj", 100.0);
        const int points = o.get<int>("points", 13);
        if (!(start > 0.0) || stop < start || points < 1)
            throw std::runtime_error("power-scan: bad energy grid specification");
        if (points == 1) {
            c.energy_grid_pj.push_back(start);
        } else {
            const double ratio = std::log(stop / start) / (points - 1);
            for (int i = 0; i < points; ++i)
                c.energy_grid_pj.push_back(start * std::exp(ratio * i));
        }
    }
    c.energy_to_p = o.get<double>("energy_to_p", c.energy_to_p);
    c.eta_s = o.get<double>("eta_s", c.eta_s);
    c.pi_0 = o.get<double>("pi_0", c.pi_0);
    c.eta_as = o.get<double>("eta_as", c.eta_as);
    c.pi_as = o.get<double>("pi_as", c.pi_as);
    o.finish();
    if (c.energy_grid_pj.empty()) throw std::runtime_error("power-scan: empty energy grid");
    return c;
}

Json PowerScanConfig::to_json() const {
    return Json{{"scenario", "power-scan"}, {"energy_grid_pj", energy_grid_pj},
                {"energy_to_p", energy_to_p}, {"eta_s", eta_s},
                {"pi_0", pi_0},             {"eta_as", eta_as},
                {"pi_as", pi_as}};
}

HeraldConfig HeraldConfig::from_json(const Json& j) {
    StrictObject o(j, "herald");
    o.expect_scenario("herald");
    HeraldConfig c;
    c.p = o.get<double>("p", c.p);
    c.eta_s = o.get<double>("eta_s", c.eta_s);
    c.pi_0 = o.get<double>("pi_0", c.pi_0);
    c.n_trunc = o.get<int>("n_trunc", c.n_trunc);
    o.finish();
    return c;
}

Json HeraldConfig::to_json() const {
    return Json{{"scenario", "herald"},
                {"p", p},
                {"eta_s", eta_s},
                {"pi_0", pi_0},
                {"n_trunc", n_trunc}};
}

MonteCarloRunConfig MonteCarloRunConfig::from_json(const Json& j) {
    StrictObject o(j, "montecarlo");
    o.expect_scenario("montecarlo");
    MonteCarloRunConfig c;
    auto& e = c.experiment;
    e.p = o.get<double>("p", e.p);
    e.nbar_ambient = o.get<double>("nbar_ambient", e.nbar_ambient);
    e.decay = DecayParams::from_lifetime(o.get<double>("tau_ps", e.decay.tau_ps()),
                                         o.get<double>("nbar_bath", e.decay.nbar_bath));
    e.delay_ps = o.get<double>("delay_ps", e.delay_ps);
    e.stokes_det.efficiency = o.get<double>("eta_s", e.stokes_det.efficiency);
    e.stokes_det.noise_prob = o.get<double>("pi_0", e.stokes_det.noise_prob);
    e.readout.eta_read = o.get<double>("eta_read", e.readout.eta_read);
    e.pi_AS = o.get<double>("pi_as", e.pi_AS);
    e.repetitions = o.get<std::uint64_t>("repetitions", e.repetitions);
    e.rng_seed = o.get<std::uint64_t>("seed", e.rng_seed);
    e.repetition_period_ns = o.get<double>("repetition_period_ns", e.repetition_period_ns);
    c.batches = o.get<int>("batches", c.batches);
    c.threads = o.get<int>("threads", c.threads);
    c.tags_path = o.get<std::string>("tags_path", c.tags_path);
    o.finish();
    return c;
}

Json MonteCarloRunConfig::to_json() const {
    const auto& e = experiment;
    return Json{{"scenario", "montecarlo"},
                {"p", e.p},
                {"nbar_ambient", e.nbar_ambient},
                {"tau_ps", e.decay.tau_ps()},
                {"nbar_bath", e.decay.nbar_bath},
                {"delay_ps", e.delay_ps},
                {"eta_s", e.stokes_det.efficiency},
                {"pi_0", e.stokes_det.noise_prob},
                {"eta_read", e.readout.eta_read},
                {"pi_as", e.pi_AS},
                {"repetitions", e.repetitions},
                {"seed", e.rng_seed},
                {"repetition_period_ns", e.repetition_period_ns},
                {"batches", batches},
                {"threads", threads},
                {"tags_path", tags_path}};
}

AnalyzeConfig AnalyzeConfig::from_json(const Json& j) {
    StrictObject o(j, "analyze");
    o.expect_scenario("analyze");
    AnalyzeConfig c;
    c.input = o.get<std::string>("input", c.input);
    c.max_offset = o.get<std::int64_t>("max_offset", c.max_offset);
    c.exclusion_offsets = o.get<std::vector<std::int64_t>>("exclusion_offsets", {});
    c.repetitions = o.get<std::uint64_t>("repetitions", c.repetitions);
    if (o.has("histograms")) {
        c.histograms.clear();
        for (const auto& pair : o.raw("histograms")) {
            if (!pair.is_array() || pair.size() != 2)
                throw std::runtime_error("analyze: each histogram needs [start, stop]");
            c.histograms.emplace_back(channel_from_name(pair[0].get<std::string>()),
                                      channel_from_name(pair[1].get<std::string>()));
        }
    }
    o.finish();
    if (c.input.empty()) throw std::runtime_error("analyze: missing 'input' path");
    return c;
}

Json AnalyzeConfig::to_json() const {
    return Json{{"scenario", "analyze"},
                {"input", input},
                {"max_offset", max_offset},
                {"exclusion_offsets", exclusion_offsets},
                {"repetitions", repetitions},
                {"histograms", channel_pairs_json(histograms)}};
}

std::string Table::to_csv() const {
    std::string out = "# phonon-herald " + scenario + " v1\n";
    out += "# config " + config.dump() + "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out += ',';
        out += columns[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

Table run_decay_scan(const DecayScanConfig& config) {
    const auto decay = DecayParams::from_lifetime(config.tau_ps, config.nbar);
    const auto initial = heralded_state_approx(config.p, config.eta_s, config.pi_0).state;

    Table table;
    table.scenario = "decay-scan";
    table.config = config.to_json();
    table.columns = {"t_ps", "alpha", "g2_sas", "p0", "p1", "p2"};
    for (double t : config.t_grid_ps) {
        const double alpha = alpha_model(t, config.p1_0, decay, config.alpha0);
        const double g2_sas = g2_sas_decay_model(t, config.g2_sas_0, decay, config.irf_fwhm_fs);
        const auto pn = pn_closed_form(initial, decay, t);
        table.rows.push_back({t, alpha, g2_sas, pn.p0, pn.p1, pn.p2});
    }
    return table;
}

Table run_power_scan(const PowerScanConfig& config) {
    Table table;
    table.scenario = "power-scan";
    table.config = config.to_json();
    table.columns = {"energy_pj", "p", "n_s", "alpha0", "g2_sas"};
    PowerModelParams params;
    params.eta_S = config.eta_s;
    params.pi_0 = config.pi_0;
    params.eta_AS = config.eta_as;
    params.pi_AS = config.pi_as;
    params.energy_to_p = config.energy_to_p;
    for (double energy : config.energy_grid_pj) {
        params.p = p_from_energy(params, energy);
        table.rows.push_back({energy, params.p, params.p / (1.0 - params.p),
                              alpha_zero_delay(params), g2_sas_power(params)});
    }
    return table;
}

Json run_herald(const HeraldConfig& config) {
    const auto joint = two_mode_squeezed(config.p, config.n_trunc);
    const DetectorModel det{config.eta_s, config.pi_0};
    const auto linear = herald(joint, det, WeightMode::linear);
    const auto squared = herald(joint, det, WeightMode::squared);
    const auto approx = heralded_state_approx(config.p, config.eta_s, config.pi_0);

    Json report;
    report["config"] = config.to_json();
    report["click_probability"] = herald_click_probability(joint, det);
    report["exact_linear"] = distribution_json(linear);
    report["exact_squared"] = distribution_json(squared);
    report["approx"] = {{"p0", approx.state[0]},
                        {"p1", approx.state[1]},
                        {"p2", approx.state[2]},
                        {"noise_warning", approx.noise_warning}};
    // The two vacuum weights disagree by construction; both are reported.
    report["vacuum_weight"] = {{"approx_p0", approx.state[0]},
                               {"exact_squared_p0", squared[0]},
                               {"exact_linear_p0", linear[0]}};
    report["g2"] = {{"exact_linear", g2(linear)},
                    {"exact_squared", g2(squared)},
                    {"approx", g2(approx.state)}};
    return report;
}

Json run_montecarlo(const MonteCarloRunConfig& config) {
    TimeTagStream tags;
    TimeTagStream* tags_ptr = config.tags_path.empty() ? nullptr : &tags;
    const auto counts =
        simulate_batched(config.experiment, config.batches, config.threads, tags_ptr);
    if (tags_ptr) write_stream(tags, config.tags_path);

    Json report;
    report["config"] = config.to_json();
    report["counts"] = {{"n_s", counts.n_s},           {"n_d1", counts.n_d1},
                        {"n_d2", counts.n_d2},         {"n_d1_s", counts.n_d1_s},
                        {"n_d2_s", counts.n_d2_s},     {"n_d1_d2", counts.n_d1_d2},
                        {"n_d1_d2_s", counts.n_d1_d2_s},
                        {"repetitions", counts.repetitions}};
    try {
        const auto alpha = alpha_estimate(counts);
        report["alpha"] = {{"value", alpha.value}, {"std_error", alpha.std_error}};
    } catch (const std::runtime_error& e) {
        report["alpha"] = {{"error", e.what()}};
    }
    try {
        const auto g2_sas = g2_sas_estimate(counts);
        report["g2_sas"] = {{"value", g2_sas.value}, {"std_error", g2_sas.std_error}};
    } catch (const std::runtime_error& e) {
        report["g2_sas"] = {{"error", e.what()}};
    }
    if (tags_ptr) report["tags_written"] = tags.size();
    return report;
}

Json run_analyze(const AnalyzeConfig& config) {
    std::vector<std::string> warnings;
    const auto records = read_stream(config.input, &warnings);
    if (records.empty())
        throw std::runtime_error("analyze: no data in stream '" + config.input + "'");

    Json report;
    report["config"] = config.to_json();
    report["n_records"] = records.size();
    report["warnings"] = warnings;

    std::uint64_t per_channel[3] = {0, 0, 0};
    for (const auto& r : records) ++per_channel[static_cast<int>(r.channel)];
    report["events"] = {{"S", per_channel[0]}, {"D1", per_channel[1]}, {"D2", per_channel[2]}};

    const auto counts = counts_from_stream(records, config.repetitions);
    report["counts"] = {{"n_s", counts.n_s},           {"n_d1", counts.n_d1},
                        {"n_d2", counts.n_d2},         {"n_d1_s", counts.n_d1_s},
                        {"n_d2_s", counts.n_d2_s},     {"n_d1_d2", counts.n_d1_d2},
                        {"n_d1_d2_s", counts.n_d1_d2_s},
                        {"repetitions", counts.repetitions}};
    try {
        const auto alpha = alpha_estimate(counts);
        report["alpha"] = {{"value", alpha.value}, {"std_error", alpha.std_error}};
    } catch (const std::runtime_error& e) {
        report["alpha"] = {{"error", e.what()}};
    }
    try {
        const auto g2_sas = g2_sas_estimate(counts);
        report["g2_sas"] = {{"value", g2_sas.value}, {"std_error", g2_sas.std_error}};
    } catch (const std::runtime_error& e) {
        report["g2_sas"] = {{"error", e.what()}};
    }

    Json histograms = Json::object();
    for (const auto& [start, stop] : config.histograms) {
        auto hist = build_histogram(records, start, stop, config.max_offset);
        hist.exclusion_window.insert(config.exclusion_offsets.begin(),
                                     config.exclusion_offsets.end());
        const std::string key =
            std::string(channel_name(start)) + "-" + channel_name(stop);
        Json entry;
        entry["total_pairs"] = hist.total();
        try {
            const auto g2_val = g2_from_histogram(hist);
            entry["g2_zero"] = {{"value", g2_val.value}, {"std_error", g2_val.std_error}};
        } catch (const std::runtime_error& e) {
            entry["g2_zero"] = {{"error", e.what()}};
        }
        histograms[key] = entry;
    }
    report["histograms"] = histograms;
    return report;
}

}  // namespace phonon
