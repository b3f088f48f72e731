#include "phonon/readout.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace phonon {

void ReadoutModel::validate() const {
    if (eta_read < 0.0 || eta_read > 1.0)
        throw std::domain_error("ReadoutModel: eta_read must lie in [0, 1]");
    if (noise_fraction < 0.0 || noise_fraction > 1.0)
        throw std::domain_error("ReadoutModel: noise_fraction must lie in [0, 1]");
    if (noise_nbar < 0.0)
        throw std::domain_error("ReadoutModel: noise_nbar must be >= 0");
}

NumberDistribution thin(const NumberDistribution& dist, double survival) {
    if (survival < 0.0 || survival > 1.0)
        throw std::domain_error("thin: survival must lie in [0, 1]");
    if (survival == 1.0) return dist;
    const auto& p = dist.probs();
    std::vector<double> out(p.size(), 0.0);
    if (survival == 0.0) {
        out[0] = dist.total();
        return NumberDistribution(std::move(out));
    }
    const double ratio = survival / (1.0 - survival);
    for (std::size_t n = 0; n < p.size(); ++n) {
        if (p[n] == 0.0) continue;
        // binomial(n, survival) terms by upward recurrence in m
        double term = p[n] * std::pow(1.0 - survival, static_cast<double>(n));
        out[0] += term;
        for (std::size_t m = 1; m <= n; ++m) {
            term *= ratio * static_cast<double>(n - m + 1) / static_cast<double>(m);
            out[m] += term;
        }
    }
    return NumberDistribution(std::move(out));
}

double g2_after_thinning(const NumberDistribution& dist, double survival) {
    if (!(survival > 0.0))
        throw std::domain_error("g2_after_thinning: survival must be positive");
    const double direct = g2(dist);
    const double thinned = g2(thin(dist, survival));
    if (std::abs(thinned - direct) > 1e-9 * std::max(1.0, std::abs(direct)))
        throw std::logic_error("g2_after_thinning: thinning invariance violated");
    return thinned;
}

double noisy_g2(double g2_signal, double n_signal, double eps, double n_noise,
                double g2_noise, NoisyG2Form form, bool* regime_warning) {
    if (!(n_signal > 0.0)) throw std::domain_error("noisy_g2: n_signal must be positive");
    if (eps < 0.0 || eps > 1.0) throw std::domain_error("noisy_g2: eps must lie in [0, 1]");
    if (n_noise < 0.0) throw std::domain_error("noisy_g2: n_noise must be >= 0");
    const double signal = (1.0 - eps) * n_signal;
    const double noise = eps * n_noise;
    if (form == NoisyG2Form::first_order) {
        if (!(signal > 0.0)) throw std::domain_error("noisy_g2: zero signal denominator");
        const double ratio = noise / signal;
        if (regime_warning) *regime_warning = ratio > 0.2;
        return g2_signal + 2.0 * ratio;
    }
    const double denom = signal + noise;
    if (!(denom > 0.0)) throw std::domain_error("noisy_g2: zero denominator");
    if (regime_warning) *regime_warning = false;
    return (signal * signal * g2_signal + noise * noise * g2_noise + 2.0 * signal * noise) /
           (denom * denom);
}

double alpha_offset(double g2_sas) {
    if (!(g2_sas > 1.0))
        throw std::runtime_error("alpha_offset: g2_sas <= 1 carries no signal");
    return 2.0 / g2_sas;
}

}  // namespace phonon
