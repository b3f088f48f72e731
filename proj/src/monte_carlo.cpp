#include "phonon/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <vector>

#include "phonon/rng.hpp"

namespace phonon {

void ExperimentConfig::validate() const {
    if (p < 0.0 || p >= 1.0)
        throw std::domain_error("ExperimentConfig: p must lie in [0, 1)");
    if (nbar_ambient < 0.0)
        throw std::domain_error("ExperimentConfig: nbar_ambient must be >= 0");
    decay.validate();
    if (delay_ps < 0.0)
        throw std::domain_error("ExperimentConfig: delay_ps must be >= 0");
    stokes_det.validate();
    readout.validate();
    if (pi_AS < 0.0 || pi_AS > 1.0)
        throw std::domain_error("ExperimentConfig: pi_AS must lie in [0, 1]");
    if (repetitions < 1)
        throw std::domain_error("ExperimentConfig: repetitions must be >= 1");
    if (!(repetition_period_ns > 0.0))
        throw std::domain_error("ExperimentConfig: repetition_period_ns must be positive");
}

CoincidenceCounts& CoincidenceCounts::operator+=(const CoincidenceCounts& o) {
    n_s += o.n_s;
    n_d1 += o.n_d1;
    n_d2 += o.n_d2;
    n_d1_s += o.n_d1_s;
    n_d2_s += o.n_d2_s;
    n_d1_d2 += o.n_d1_d2;
    n_d1_d2_s += o.n_d1_d2_s;
    repetitions += o.repetitions;
    return *this;
}

namespace {

// Inversion sampler for the exact birth-death transition kernel. Rows
// (conditional distributions given the pre-delay phonon number) are built on
// demand from the generating-function propagator.
class DecayKernel {
  public:
    DecayKernel(const DecayParams& d, double t_ps) : d_(d), t_ps_(t_ps) {}

    std::uint32_t sample(std::uint32_t n0, StreamRng& rng) {
        if (n0 >= rows_.size()) rows_.resize(n0 + 1);
        auto& row = rows_[n0];
        if (row.empty()) {
            row = evolve_analytic(fock_distribution(static_cast<int>(n0)), d_, t_ps_).probs();
        }
        double u = rng.uniform();
        for (std::size_t n = 0; n < row.size(); ++n) {
            u -= row[n];
            if (u <= 0.0) return static_cast<std::uint32_t>(n);
        }
        return static_cast<std::uint32_t>(row.size() - 1);
    }

  private:
    DecayParams d_;
    double t_ps_;
    std::vector<std::vector<double>> rows_;
};

// Stokes click probability by photon number, extended on demand.
class StokesClickTable {
  public:
    explicit StokesClickTable(const DetectorModel& det) : det_(det) {}

    double operator()(std::uint32_t n) {
        while (table_.size() <= n) {
            const auto k = static_cast<int>(table_.size());
            table_.push_back(click_weight(det_, k));
        }
        return table_[n];
    }

  private:
    DetectorModel det_;
    std::vector<double> table_;
};

CoincidenceCounts run_batch(const ExperimentConfig& cfg, std::uint64_t seed,
                            std::uint64_t pulse_offset, std::uint64_t count,
                            TimeTagStream* tags) {
    StreamRng rng(seed);
    const double q_thermal = cfg.nbar_ambient / (1.0 + cfg.nbar_ambient);
    const double survival = std::exp(-cfg.decay.gamma * cfg.delay_ps);
    const bool decays = cfg.delay_ps > 0.0;
    const bool rethermalizes = decays && cfg.decay.nbar_bath > 0.0;
    DecayKernel kernel(cfg.decay, cfg.delay_ps);
    StokesClickTable stokes_click(cfg.stokes_det);

    CoincidenceCounts out;
    out.repetitions = count;
    for (std::uint64_t i = 0; i < count; ++i) {
        std::uint32_t n_vib = cfg.nbar_ambient > 0.0 ? rng.geometric(q_thermal) : 0;
        const std::uint32_t n_pair = cfg.p > 0.0 ? rng.geometric(cfg.p) : 0;

        const bool s_click = rng.bernoulli(stokes_click(n_pair));

        n_vib += n_pair;
        if (decays) {
            if (rethermalizes)
                n_vib = kernel.sample(n_vib, rng);
            else
                n_vib = rng.binomial(n_vib, survival);
        }

        const std::uint32_t detected = rng.binomial(n_vib, cfg.readout.eta_read);
        std::uint32_t at_d1 = 0, at_d2 = 0;
        for (std::uint32_t k = 0; k < detected; ++k) {
            if (rng.bernoulli(0.5))
                ++at_d1;
            else
                ++at_d2;
        }
        const bool d1_click = at_d1 > 0 || rng.bernoulli(cfg.pi_AS);
        const bool d2_click = at_d2 > 0 || rng.bernoulli(cfg.pi_AS);

        out.n_s += s_click;
        out.n_d1 += d1_click;
        out.n_d2 += d2_click;
        out.n_d1_s += d1_click && s_click;
        out.n_d2_s += d2_click && s_click;
        out.n_d1_d2 += d1_click && d2_click;
        out.n_d1_d2_s += d1_click && d2_click && s_click;

        if (tags) {
            const std::uint64_t pulse = pulse_offset + i;
            if (s_click) tags->push_back({pulse, Channel::S});
            if (d1_click) tags->push_back({pulse, Channel::D1});
            if (d2_click) tags->push_back({pulse, Channel::D2});
        }
    }
    return out;
}

}  // namespace

CoincidenceCounts simulate(const ExperimentConfig& config, TimeTagStream* tags) {
    return simulate_batched(config, 1, 1, tags);
}

CoincidenceCounts simulate_batched(const ExperimentConfig& config, int batches, int threads,
                                   TimeTagStream* tags) {
    config.validate();
    if (batches < 1) throw std::domain_error("simulate_batched: batches must be >= 1");
    const auto n_batches = static_cast<std::uint64_t>(batches);
    if (threads <= 0) {
        threads = static_cast<int>(
            std::min<std::uint64_t>(n_batches, std::thread::hardware_concurrency()));
        threads = std::max(threads, 1);
    }

    // batch b covers [offset_b, offset_b + count_b); earlier batches take the
    // remainder so the pulse index ranges tile [0, repetitions)
    std::vector<std::uint64_t> counts(n_batches, config.repetitions / n_batches);
    for (std::uint64_t b = 0; b < config.repetitions % n_batches; ++b) ++counts[b];

    CoincidenceCounts total;
    if (threads == 1 || batches == 1) {
        std::uint64_t offset = 0;
        for (std::uint64_t b = 0; b < n_batches; ++b) {
            total += run_batch(config, derive_stream(config.rng_seed, b), offset, counts[b],
                               tags);
            offset += counts[b];
        }
        return total;
    }

    struct BatchResult {
        CoincidenceCounts counts;
        TimeTagStream tags;
    };
    std::vector<std::future<BatchResult>> futures;
    futures.reserve(n_batches);
    std::uint64_t offset = 0;
    for (std::uint64_t b = 0; b < n_batches; ++b) {
        const std::uint64_t seed = derive_stream(config.rng_seed, b);
        const std::uint64_t batch_offset = offset;
        const std::uint64_t batch_count = counts[b];
        offset += batch_count;
        futures.push_back(std::async(std::launch::async, [&, seed, batch_offset,
                                                          batch_count] {
            BatchResult r;
            r.counts = run_batch(config, seed, batch_offset, batch_count,
                                 tags ? &r.tags : nullptr);
            return r;
        }));
    }
    for (auto& f : futures) {
        BatchResult r = f.get();
        total += r.counts;
        if (tags) tags->insert(tags->end(), r.tags.begin(), r.tags.end());
    }
    return total;
}

EstimateWithError alpha_estimate(const CoincidenceCounts& counts) {
    const double s = static_cast<double>(counts.n_s);
    const double a = static_cast<double>(counts.n_d1_s);
    const double b = static_cast<double>(counts.n_d2_s);
    const double t = static_cast<double>(counts.n_d1_d2_s);
    if (!(a > 0.0) || !(b > 0.0))
        throw std::runtime_error("alpha_estimate: insufficient statistics (no coincidences)");
    EstimateWithError out;
    if (t == 0.0) {
        out.value = 0.0;
        out.std_error = s / (a * b);  // alpha of one triple: one-sided upper bound
        return out;
    }
    out.value = t * s / (a * b);
    out.std_error = out.value * std::sqrt(1.0 / t + 1.0 / s + 1.0 / a + 1.0 / b);
    return out;
}

EstimateWithError g2_sas_estimate(const CoincidenceCounts& counts) {
    const double r = static_cast<double>(counts.repetitions);
    const double n_s = static_cast<double>(counts.n_s);
    const double n_as = static_cast<double>(counts.n_d1 + counts.n_d2 - counts.n_d1_d2);
    const double n_s_as =
        static_cast<double>(counts.n_d1_s + counts.n_d2_s - counts.n_d1_d2_s);
    if (!(r > 0.0) || !(n_s > 0.0) || !(n_as > 0.0))
        throw std::runtime_error("g2_sas_estimate: insufficient statistics");
    EstimateWithError out;
    if (n_s_as == 0.0) {
        out.value = 0.0;
        out.std_error = r / (n_s * n_as);
        return out;
    }
    out.value = n_s_as * r / (n_s * n_as);
    out.std_error = out.value * std::sqrt(1.0 / n_s_as + 1.0 / n_s + 1.0 / n_as);
    return out;
}

EstimateWithError g2_from_histogram(const StartStopHistogram& hist) {
    const auto zero = hist.bins.find(0);
    if (zero == hist.bins.end())
        throw std::runtime_error("g2_from_histogram: zero-delay bin missing");
    double side_total = 0.0;
    double side_bins = 0.0;
    for (const auto& [offset, count] : hist.bins) {
        if (offset == 0 || hist.exclusion_window.contains(offset)) continue;
        side_total += static_cast<double>(count);
        side_bins += 1.0;
    }
    if (side_bins < 2.0)
        throw std::runtime_error("g2_from_histogram: need at least two side bins");
    if (!(side_total > 0.0))
        throw std::runtime_error("g2_from_histogram: empty side peaks");
    const double accidental = side_total / side_bins;
    const double c0 = static_cast<double>(zero->second);
    EstimateWithError out;
    if (c0 == 0.0) {
        out.value = 0.0;
        out.std_error = 1.0 / accidental;
        return out;
    }
    out.value = c0 / accidental;
    out.std_error = out.value * std::sqrt(1.0 / c0 + 1.0 / side_total);
    return out;
}

CoincidenceCounts counts_from_stream(std::span<const TimeTagRecord> records,
                                     std::uint64_t repetitions) {
    std::unordered_map<std::uint64_t, std::uint8_t> pulses;
    pulses.reserve(records.size());
    std::uint64_t max_pulse = 0;
    for (const auto& r : records) {
        pulses[r.pulse_index] |= static_cast<std::uint8_t>(1u << static_cast<int>(r.channel));
        max_pulse = std::max(max_pulse, r.pulse_index);
    }
    CoincidenceCounts out;
    out.repetitions = repetitions != 0 ? repetitions : (records.empty() ? 0 : max_pulse + 1);
    constexpr std::uint8_t s_bit = 1u << static_cast<int>(Channel::S);
    constexpr std::uint8_t d1_bit = 1u << static_cast<int>(Channel::D1);
    constexpr std::uint8_t d2_bit = 1u << static_cast<int>(Channel::D2);
    for (const auto& [pulse, bits] : pulses) {
        const bool s = bits & s_bit, d1 = bits & d1_bit, d2 = bits & d2_bit;
        out.n_s += s;
        out.n_d1 += d1;
        out.n_d2 += d2;
        out.n_d1_s += d1 && s;
        out.n_d2_s += d2 && s;
        out.n_d1_d2 += d1 && d2;
        out.n_d1_d2_s += d1 && d2 && s;
    }
    return out;
}

}  // namespace phonon
