#include "phonon/power_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace phonon {

namespace {

void check_prob(double v, const char* name) {
    if (v < 0.0 || v > 1.0)
        throw std::domain_error(std::string("PowerModelParams: ") + name +
                                " must lie in [0, 1]");
}

// 1 - zeta(x) in a cancellation-free form. With a = p (1-eta_S),
//   1 - zeta(x) = p (1-x) [eta_S (1 - p a x) + pi_0 (1-p)(1-eta_S)(1-p x)]
//                 / [(1-p x)(1-a)(1-a x) K].
double one_minus_zeta(double x, const PowerModelParams& m, double k) {
    const double a = m.p * (1.0 - m.eta_S);
    const double bracket = m.eta_S * (1.0 - m.p * a * x) +
                           m.pi_0 * (1.0 - m.p) * (1.0 - m.eta_S) * (1.0 - m.p * x);
    return m.p * (1.0 - x) * bracket /
           ((1.0 - m.p * x) * (1.0 - a) * (1.0 - a * x) * k);
}

// zeta(x1) - zeta(x2), likewise rearranged exactly.
double zeta_difference(double x1, double x2, const PowerModelParams& m, double k) {
    const double a = m.p * (1.0 - m.eta_S);
    const double bracket =
        m.eta_S * (1.0 - m.p * a * x1 * x2) +
        m.pi_0 * (1.0 - m.eta_S) * (1.0 - m.p * x1) * (1.0 - m.p * x2);
    return (1.0 - m.p) * m.p * (x1 - x2) * bracket /
           ((1.0 - m.p * x1) * (1.0 - m.p * x2) * (1.0 - a * x1) * (1.0 - a * x2) * k);
}

}  // namespace

void PowerModelParams::validate() const {
    if (p < 0.0 || p >= 1.0)
        throw std::domain_error("PowerModelParams: p must lie in [0, 1)");
    check_prob(eta_S, "eta_S");
    check_prob(pi_0, "pi_0");
    check_prob(eta_AS, "eta_AS");
    check_prob(pi_AS, "pi_AS");
    if (!(energy_to_p > 0.0))
        throw std::domain_error("PowerModelParams: energy_to_p must be positive");
}

double p_from_energy(const PowerModelParams& params, double energy_pj) {
    if (!(energy_pj >= 0.0))
        throw std::domain_error("p_from_energy: energy must be >= 0");
    const double p = energy_pj * params.energy_to_p;
    if (p >= 1.0)
        throw std::domain_error("p_from_energy: energy maps to pair probability >= 1");
    return p;
}

double herald_probability(const PowerModelParams& params) {
    params.validate();
    // exact rearrangement of 1 - (1-pi_0)(1-p)/(1 - p(1-eta_S))
    return (params.p * params.eta_S + params.pi_0 * (1.0 - params.p)) /
           (1.0 - params.p * (1.0 - params.eta_S));
}

double heralded_pgf(double x, const PowerModelParams& params) {
    params.validate();
    if (params.p * x >= 1.0 || params.p * (1.0 - params.eta_S) * x >= 1.0)
        throw std::domain_error("heralded_pgf: pole crossing; require p*x < 1");
    const double k = herald_probability(params);
    const double a = (1.0 - params.p) / (1.0 - params.p * x);
    const double b = (1.0 - params.pi_0) * (1.0 - params.p) /
                     (1.0 - params.p * (1.0 - params.eta_S) * x);
    return (a - b) / k;
}

double alpha_zero_delay(const PowerModelParams& params) {
    params.validate();
    if (!(params.eta_AS > 0.0))
        throw std::domain_error("alpha_zero_delay: eta_AS must be positive");
    const double k = herald_probability(params);
    if (!(k > 0.0))
        throw std::domain_error("alpha_zero_delay: herald probability is zero");
    const double x1 = 1.0 - params.eta_AS / 2.0;  // one detector dark
    const double x2 = 1.0 - params.eta_AS;        // both detectors dark
    const double u1 = one_minus_zeta(x1, params, k);
    const double d12 = zeta_difference(x1, x2, params, k);
    const double q = 1.0 - params.pi_AS;
    // numerator 1 - 2 q zeta(x1) + q^2 zeta(x2), denominator (1 - q zeta(x1))^2
    const double num = params.pi_AS * params.pi_AS + q * (1.0 + params.pi_AS) * u1 -
                       q * q * d12;
    const double den = params.pi_AS + q * u1;
    return num / (den * den);
}

SasClickProbabilities sas_click_probabilities(const PowerModelParams& params) {
    params.validate();
    const double gs = 1.0 - params.eta_S;
    const double gas = 1.0 - params.eta_AS;
    SasClickProbabilities out;
    out.n_s = (params.p * params.eta_S + params.pi_0 * (1.0 - params.p)) / (1.0 - params.p * gs);
    out.n_as =
        (params.p * params.eta_AS + params.pi_AS * (1.0 - params.p)) / (1.0 - params.p * gas);
    // N_S,AS = N_S N_AS + covariance; the covariance reduces exactly to
    // (1-pi_0)(1-pi_AS)(1-p) p eta_S eta_AS / [(1-p gs gas)(1-p gs)(1-p gas)]
    const double cov = (1.0 - params.pi_0) * (1.0 - params.pi_AS) * (1.0 - params.p) *
                       params.p * params.eta_S * params.eta_AS /
                       ((1.0 - params.p * gs * gas) * (1.0 - params.p * gs) *
                        (1.0 - params.p * gas));
    out.n_s_as = out.n_s * out.n_as + cov;
    return out;
}

double g2_sas_power(const PowerModelParams& params) {
    params.validate();
    if (!(params.eta_AS > 0.0))
        throw std::domain_error("g2_sas_power: no anti-Stokes detection (eta_AS = 0)");
    const auto c = sas_click_probabilities(params);
    if (!(c.n_s > 0.0) || !(c.n_as > 0.0))
        throw std::domain_error("g2_sas_power: vanishing singles probability");
    return c.n_s_as / (c.n_s * c.n_as);
}

TripleCoincidenceProbabilities detection_probabilities(double p, double eta_S,
                                                       double eta_d1, double eta_d2) {
    if (p < 0.0 || p >= 1.0)
        throw std::domain_error("detection_probabilities: p must lie in [0, 1)");
    check_prob(eta_S, "eta_S");
    check_prob(eta_d1, "eta_d1");
    check_prob(eta_d2, "eta_d2");
    const double p11 = (1.0 - p) * p;
    const double p22 = (1.0 - p) * p * p;
    TripleCoincidenceProbabilities out;
    out.n_s = eta_S * p11;
    out.n_d1_s = 0.5 * eta_S * eta_d1 * p11;
    out.n_d2_s = 0.5 * eta_S * eta_d2 * p11;
    out.n_d1_d2_s = 0.5 * (2.0 * eta_S - eta_S * eta_S) * eta_d1 * eta_d2 * p22;
    return out;
}

double alpha_loss(double p, double eta_S) {
    if (p < 0.0 || p >= 1.0)
        throw std::domain_error("alpha_loss: p must lie in [0, 1)");
    check_prob(eta_S, "eta_S");
    return (4.0 - 2.0 * eta_S) * p;
}

}  // namespace phonon
