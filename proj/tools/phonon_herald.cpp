#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "phonon/scenarios.hpp"

namespace {

using phonon::Json;

Json load_config(const std::string& path) {
    if (path.empty()) return Json::object();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw std::runtime_error("config file '" + path + "': " + e.what());
    }
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

struct CommonArgs {
    std::string config_path;
    std::string out_path;
};

void add_common(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config_path, "JSON configuration file");
    sub->add_option("--out", args.out_path, "output path ('-' for stdout)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Heralded single-phonon protocol: closed-form models, Monte Carlo "
                 "photon counting, and time-tag analysis"};
    app.require_subcommand(1);

    CommonArgs herald_args, decay_args, power_args, mc_args, analyze_args;

    auto* herald_cmd = app.add_subcommand("herald", "conditional phonon state report");
    add_common(herald_cmd, herald_args);
    double herald_p = 0.0, herald_eta = 0.0, herald_pi = 0.0;
    auto* opt_hp = herald_cmd->add_option("--p", herald_p, "pair probability per pulse");
    auto* opt_he = herald_cmd->add_option("--eta", herald_eta, "Stokes detection efficiency");
    auto* opt_hn = herald_cmd->add_option("--pi", herald_pi, "Stokes noise probability");

    auto* decay_cmd = app.add_subcommand("decay-scan", "model curves vs write-read delay");
    add_common(decay_cmd, decay_args);

    auto* power_cmd = app.add_subcommand("power-scan", "closed forms vs pump pulse energy");
    add_common(power_cmd, power_args);

    auto* mc_cmd = app.add_subcommand("montecarlo", "per-pulse stochastic simulation");
    add_common(mc_cmd, mc_args);
    std::uint64_t mc_reps = 0, mc_seed = 0;
    double mc_p = 0.0, mc_delay = 0.0;
    int mc_batches = 0;
    std::string mc_tags;
    auto* opt_mr = mc_cmd->add_option("--repetitions", mc_reps, "number of pulses");
    auto* opt_ms = mc_cmd->add_option("--seed", mc_seed, "RNG seed");
    auto* opt_mp = mc_cmd->add_option("--p", mc_p, "pair probability per pulse");
    auto* opt_md = mc_cmd->add_option("--delay-ps", mc_delay, "write-read delay");
    auto* opt_mb = mc_cmd->add_option("--batches", mc_batches, "independent RNG batches");
    auto* opt_mt = mc_cmd->add_option("--tags", mc_tags, "write a time-tag stream here");

    auto* analyze_cmd = app.add_subcommand("analyze", "time-tag stream analysis");
    add_common(analyze_cmd, analyze_args);
    std::string an_input;
    std::uint64_t an_reps = 0;
    std::int64_t an_max_offset = 0;
    auto* opt_ai = analyze_cmd->add_option("--input", an_input, "time-tag stream to read");
    auto* opt_ar = analyze_cmd->add_option("--repetitions", an_reps, "pulses in the stream");
    auto* opt_ao = analyze_cmd->add_option("--max-offset", an_max_offset, "histogram window");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << Json{{"error", e.what()}}.dump() << "\n";
        return e.get_exit_code() == 0 ? 1 : e.get_exit_code();
    }

    try {
        if (herald_cmd->parsed()) {
            Json j = load_config(herald_args.config_path);
            if (opt_hp->count()) j["p"] = herald_p;
            if (opt_he->count()) j["eta_s"] = herald_eta;
            if (opt_hn->count()) j["pi_0"] = herald_pi;
            const auto report = phonon::run_herald(phonon::HeraldConfig::from_json(j));
            write_output(herald_args.out_path, report.dump(2) + "\n");
        } else if (decay_cmd->parsed()) {
            Json j = load_config(decay_args.config_path);
            const auto table = phonon::run_decay_scan(phonon::DecayScanConfig::from_json(j));
            write_output(decay_args.out_path, table.to_csv());
        } else if (power_cmd->parsed()) {
            Json j = load_config(power_args.config_path);
            const auto table = phonon::run_power_scan(phonon::PowerScanConfig::from_json(j));
            write_output(power_args.out_path, table.to_csv());
        } else if (mc_cmd->parsed()) {
            Json j = load_config(mc_args.config_path);
            if (opt_mr->count()) j["repetitions"] = mc_reps;
            if (opt_ms->count()) j["seed"] = mc_seed;
            if (opt_mp->count()) j["p"] = mc_p;
            if (opt_md->count()) j["delay_ps"] = mc_delay;
            if (opt_mb->count()) j["batches"] = mc_batches;
            if (opt_mt->count()) j["tags_path"] = mc_tags;
            const auto report =
                phonon::run_montecarlo(phonon::MonteCarloRunConfig::from_json(j));
            write_output(mc_args.out_path, report.dump(2) + "\n");
        } else if (analyze_cmd->parsed()) {
            Json j = load_config(analyze_args.config_path);
            if (opt_ai->count()) j["input"] = an_input;
            if (opt_ar->count()) j["repetitions"] = an_reps;
            if (opt_ao->count()) j["max_offset"] = an_max_offset;
            const auto report = phonon::run_analyze(phonon::AnalyzeConfig::from_json(j));
            write_output(analyze_args.out_path, report.dump(2) + "\n");
        }
    } catch (const std::exception& e) {
        std::cerr << Json{{"error", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}
