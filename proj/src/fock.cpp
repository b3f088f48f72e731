#include "phonon/fock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace phonon {

double bose_occupancy(double frequency_thz, double temperature_k) {
    if (!(frequency_thz > 0.0))
        throw std::domain_error("bose_occupancy: frequency must be positive");
    if (!(temperature_k > 0.0))
        throw std::domain_error("bose_occupancy: temperature must be positive");
    const double x = kPlanck * frequency_thz * 1e12 / (kBoltzmann * temperature_k);
    return 1.0 / std::expm1(x);
}

namespace {

void check_weights(const std::vector<double>& w, const char* who) {
    if (w.empty())
        throw std::invalid_argument(std::string(who) + ": empty weight vector");
    for (double v : w) {
        if (!(v > -kNormTolerance) || !std::isfinite(v))
            throw std::invalid_argument(std::string(who) + ": negative or non-finite weight");
    }
}

double sum_of(const std::vector<double>& w) {
    double s = 0.0;
    for (double v : w) s += v;
    return s;
}

// Smallest truncation index N such that the dropped geometric tail mass
// q^{N+1} stays below the tail target and the last kept entry (1-q) q^N
// stays below the truncation guard.
int auto_geometric_trunc(double q) {
    if (q <= 0.0) return 1;
    const double lq = std::log(q);
    int n_tail = static_cast<int>(std::ceil(std::log(kAutoTailMass) / lq)) - 1;
    int n_guard = static_cast<int>(std::ceil(std::log(kTruncationGuard / (1.0 - q)) / lq));
    return std::max({1, n_tail, n_guard});
}

std::vector<double> geometric_weights(double q, int n_trunc, const char* who) {
    std::vector<double> w(static_cast<std::size_t>(n_trunc) + 1);
    double term = 1.0 - q;
    double total = 0.0;
    for (int n = 0; n <= n_trunc; ++n) {
        w[static_cast<std::size_t>(n)] = term;
        total += term;
        term *= q;
    }
    if (w.back() / total > kTruncationGuard)
        throw std::invalid_argument(std::string(who) +
                                    ": truncation guard violated; increase n_trunc");
    return w;
}

}  // namespace

NumberDistribution::NumberDistribution(std::vector<double> weights) {
    check_weights(weights, "NumberDistribution");
    double total = sum_of(weights);
    if (!(total > 0.0))
        throw std::invalid_argument("NumberDistribution: total weight must be positive");
    for (double& v : weights) {
        v = std::max(v, 0.0) / total;
    }
    probs_ = std::move(weights);
}

NumberDistribution::NumberDistribution(std::vector<double> values, RawTag)
    : probs_(std::move(values)) {}

NumberDistribution NumberDistribution::adopt_raw(std::vector<double> values) {
    if (values.empty())
        throw std::invalid_argument("NumberDistribution: empty value vector");
    return NumberDistribution(std::move(values), RawTag{});
}

double NumberDistribution::total() const { return sum_of(probs_); }

double NumberDistribution::mean() const {
    double m = 0.0;
    for (std::size_t n = 1; n < probs_.size(); ++n)
        m += static_cast<double>(n) * probs_[n];
    return m;
}

NumberDistribution NumberDistribution::normalized() const {
    return NumberDistribution(probs_);
}

JointPairState::JointPairState(std::vector<double> pair_weights, double squeeze_param)
    : squeeze_param_(squeeze_param) {
    check_weights(pair_weights, "JointPairState");
    double total = sum_of(pair_weights);
    if (!(total > 0.0))
        throw std::invalid_argument("JointPairState: total weight must be positive");
    for (double& v : pair_weights) v = std::max(v, 0.0) / total;
    pair_probs_ = std::move(pair_weights);
}

NumberDistribution thermal_distribution(double nbar, int n_trunc) {
    if (nbar < 0.0)
        throw std::domain_error("thermal_distribution: nbar must be >= 0");
    const double q = nbar / (1.0 + nbar);
    if (n_trunc < 0) n_trunc = auto_geometric_trunc(q);
    return NumberDistribution(geometric_weights(q, n_trunc, "thermal_distribution"));
}

NumberDistribution fock_distribution(int n, int n_trunc) {
    if (n < 0) throw std::domain_error("fock_distribution: n must be >= 0");
    if (n_trunc >= 0 && n > n_trunc)
        throw std::domain_error("fock_distribution: n exceeds n_trunc");
    const int size = (n_trunc >= 0 ? n_trunc : n) + 1;
    std::vector<double> w(static_cast<std::size_t>(size), 0.0);
    w[static_cast<std::size_t>(n)] = 1.0;
    return NumberDistribution(std::move(w));
}

JointPairState two_mode_squeezed(double p, int n_trunc) {
    if (p < 0.0 || p >= 1.0)
        throw std::domain_error("two_mode_squeezed: p must lie in [0, 1)");
    if (n_trunc < 0) n_trunc = auto_geometric_trunc(p);
    return JointPairState(geometric_weights(p, n_trunc, "two_mode_squeezed"), p);
}

NumberDistribution marginal(const JointPairState& joint) {
    // Tracing out either mode of the diagonal pair state leaves the pair
    // weights themselves: a geometric distribution with mean p/(1-p).
    return NumberDistribution(joint.pair_probs());
}

double factorial_moment(const NumberDistribution& dist, int k) {
    if (k < 1) throw std::domain_error("factorial_moment: k must be >= 1");
    double sum = 0.0;
    const auto& p = dist.probs();
    for (std::size_t n = static_cast<std::size_t>(k); n < p.size(); ++n) {
        double f = 1.0;
        for (int j = 0; j < k; ++j) f *= static_cast<double>(n) - j;
        sum += f * p[n];
    }
    return sum;
}

double g2(const NumberDistribution& dist) {
    const double mean = dist.mean();
    if (!(mean > 0.0))
        throw std::domain_error("g2: undefined for zero mean occupancy");
    return factorial_moment(dist, 2) / (mean * mean);
}

}  // namespace phonon
