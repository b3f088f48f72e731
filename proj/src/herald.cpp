#include "phonon/herald.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace phonon {

void DetectorModel::validate() const {
    if (efficiency < 0.0 || efficiency > 1.0)
        throw std::domain_error("DetectorModel: efficiency must lie in [0, 1]");
    if (noise_prob < 0.0 || noise_prob > 1.0)
        throw std::domain_error("DetectorModel: noise_prob must lie in [0, 1]");
}

double click_weight(const DetectorModel& det, int n) {
    if (n < 0) throw std::domain_error("click_weight: n must be >= 0");
    det.validate();
    return 1.0 - (1.0 - det.noise_prob) * std::pow(1.0 - det.efficiency, n);
}

NumberDistribution herald(const JointPairState& joint, const DetectorModel& det,
                          WeightMode mode) {
    det.validate();
    std::vector<double> w(joint.size());
    double total = 0.0;
    for (std::size_t n = 0; n < joint.size(); ++n) {
        double cw = click_weight(det, static_cast<int>(n));
        if (mode == WeightMode::squared) cw *= cw;
        w[n] = joint.pair_prob(n) * cw;
        total += w[n];
    }
    if (!(total > 0.0))
        throw std::runtime_error("herald: click probability is zero; cannot condition");
    return NumberDistribution(std::move(w));
}

HeraldedApprox heralded_state_approx(double p, double eta, double noise_prob) {
    if (p < 0.0 || p >= 1.0)
        throw std::domain_error("heralded_state_approx: p must lie in [0, 1)");
    DetectorModel det{eta, noise_prob};
    det.validate();
    const double signal = eta * p;
    if (!(signal > 0.0))
        throw std::runtime_error("heralded_state_approx: eta*p must be positive");
    HeraldedApprox out;
    out.noise_warning = signal < 10.0 * noise_prob;
    out.state = NumberDistribution({noise_prob / (2.0 * signal), 1.0, p});
    return out;
}

double herald_click_probability(const JointPairState& joint, const DetectorModel& det) {
    det.validate();
    double total = 0.0;
    for (std::size_t n = 0; n < joint.size(); ++n)
        total += joint.pair_prob(n) * click_weight(det, static_cast<int>(n));
    return total;
}

}  // namespace phonon
