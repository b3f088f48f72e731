#pragma once

#include <cstddef>
#include <vector>

namespace phonon {

// 2018 SI exact values.
inline constexpr double kPlanck = 6.62607015e-34;     // J/Hz
inline constexpr double kBoltzmann = 1.380649e-23;    // J/K

// Normalization drift allowed after any constructor or renormalization.
inline constexpr double kNormTolerance = 1e-12;
// Largest probability tolerated in the top truncation slot of a
// library-constructed physical state.
inline constexpr double kTruncationGuard = 1e-10;
// Tail mass target used when a constructor picks the truncation itself.
inline constexpr double kAutoTailMass = 1e-12;

// Mean occupancy of a bosonic mode of ordinary frequency `frequency_thz`
// in contact with a bath at `temperature_k`.
double bose_occupancy(double frequency_thz, double temperature_k);

// Probability distribution over Fock states n = 0 .. max_n().
// Diagonal states only; no coherences are ever represented.
class NumberDistribution {
  public:
    // Vacuum.
    NumberDistribution() : probs_{1.0} {}

    // Normalizes `weights` to unit total. Throws std::invalid_argument on
    // negative entries (below -1e-12) or non-positive total.
    explicit NumberDistribution(std::vector<double> weights);

    // Adopts the values as-is, without normalization. Used by evolvers whose
    // outputs are allowed to carry (reported) normalization drift.
    static NumberDistribution adopt_raw(std::vector<double> values);

    std::size_t size() const { return probs_.size(); }
    std::size_t max_n() const { return probs_.size() - 1; }

    // P_n; zero beyond the truncation.
    double operator[](std::size_t n) const {
        return n < probs_.size() ? probs_[n] : 0.0;
    }

    const std::vector<double>& probs() const { return probs_; }

    double total() const;
    double mean() const;

    NumberDistribution normalized() const;

  private:
    struct RawTag {};
    NumberDistribution(std::vector<double> values, RawTag);

    std::vector<double> probs_;
};

// Diagonal joint distribution P(n,n) of a photon-phonon pair state produced
// by a two-mode squeezer acting on vacuum. Off-diagonal joint weights are
// identically zero and not stored.
class JointPairState {
  public:
    JointPairState(std::vector<double> pair_weights, double squeeze_param);

    std::size_t size() const { return pair_probs_.size(); }
    std::size_t max_n() const { return pair_probs_.size() - 1; }
    double pair_prob(std::size_t n) const {
        return n < pair_probs_.size() ? pair_probs_[n] : 0.0;
    }
    const std::vector<double>& pair_probs() const { return pair_probs_; }
    double squeeze_param() const { return squeeze_param_; }

  private:
    std::vector<double> pair_probs_;
    double squeeze_param_;
};

// Geometric (thermal) distribution with mean `nbar`, renormalized over the
// truncation. n_trunc < 0 picks the smallest truncation satisfying both the
// tail-mass target and the truncation guard.
NumberDistribution thermal_distribution(double nbar, int n_trunc = -1);

// Point distribution P_n = 1.
NumberDistribution fock_distribution(int n, int n_trunc = -1);

// Pair state with P(n,n) = (1-p) p^n, 0 <= p < 1.
JointPairState two_mode_squeezed(double p, int n_trunc = -1);

// Marginal of either mode; geometric with mean p/(1-p).
NumberDistribution marginal(const JointPairState& joint);

// Sum over n of n (n-1) ... (n-k+1) P_n, k >= 1.
double factorial_moment(const NumberDistribution& dist, int k);

// Normalized second-order intensity correlation <n(n-1)> / <n>^2.
// Throws std::domain_error when the mean occupancy vanishes.
double g2(const NumberDistribution& dist);

}  // namespace phonon
