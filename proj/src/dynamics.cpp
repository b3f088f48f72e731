#include "phonon/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "phonon/power_series.hpp"

namespace phonon {

DecayParams DecayParams::from_lifetime(double tau_ps, double nbar_bath) {
    if (!(tau_ps > 0.0))
        throw std::domain_error("DecayParams: lifetime must be positive");
    DecayParams d;
    d.gamma = 1.0 / tau_ps;
    d.nbar_bath = nbar_bath;
    d.validate();
    return d;
}

void DecayParams::validate() const {
    if (!(gamma > 0.0)) throw std::domain_error("DecayParams: gamma must be positive");
    if (nbar_bath < 0.0) throw std::domain_error("DecayParams: nbar_bath must be >= 0");
}

namespace {

// rate_rhs on raw storage; `out` must have the same size as `p`.
void rhs_into(const std::vector<double>& p, const DecayParams& d, std::vector<double>& out) {
    const std::size_t size = p.size();
    const double down = d.gamma * (d.nbar_bath + 1.0);
    const double up = d.gamma * d.nbar_bath;
    for (std::size_t k = 0; k < size; ++k) {
        const double kk = static_cast<double>(k);
        double v = -down * kk * p[k];
        if (k + 1 < size) v += down * (kk + 1.0) * p[k + 1];
        if (k > 0) v += up * kk * p[k - 1];
        if (k + 1 < size) v -= up * (kk + 1.0) * p[k];  // reflecting top boundary
        out[k] = v;
    }
}

}  // namespace

std::vector<double> rate_rhs(const NumberDistribution& dist, const DecayParams& d) {
    d.validate();
    std::vector<double> out(dist.size());
    rhs_into(dist.probs(), d, out);
    return out;
}

NumberDistribution evolve_numeric(const NumberDistribution& initial, const DecayParams& d,
                                  double t_ps, double dt_ps, double* norm_drift) {
    d.validate();
    if (t_ps < 0.0) throw std::domain_error("evolve_numeric: t must be >= 0");
    std::vector<double> y = initial.probs();
    if (t_ps > 0.0) {
        if (dt_ps <= 0.0)
            dt_ps = std::min(0.01 / (d.gamma * (1.0 + d.nbar_bath)), t_ps / 100.0);
        const auto steps = static_cast<std::size_t>(std::ceil(t_ps / dt_ps - 1e-9));
        const double h = t_ps / static_cast<double>(steps);

        const std::size_t size = y.size();
        std::vector<double> k1(size), k2(size), k3(size), k4(size), tmp(size);
        for (std::size_t s = 0; s < steps; ++s) {
            rhs_into(y, d, k1);
            for (std::size_t i = 0; i < size; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
            rhs_into(tmp, d, k2);
            for (std::size_t i = 0; i < size; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
            rhs_into(tmp, d, k3);
            for (std::size_t i = 0; i < size; ++i) tmp[i] = y[i] + h * k3[i];
            rhs_into(tmp, d, k4);
            for (std::size_t i = 0; i < size; ++i)
                y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            for (double v : y)
                if (v < -1e-9)
                    throw std::runtime_error(
                        "evolve_numeric: negative probability; step too large");
        }
    }
    if (norm_drift) {
        double sum = 0.0;
        for (double v : y) sum += v;
        *norm_drift = sum - 1.0;
    }
    return NumberDistribution::adopt_raw(std::move(y));
}

NumberDistribution evolve_analytic(const NumberDistribution& initial, const DecayParams& d,
                                   double t_ps, int n_trunc) {
    d.validate();
    if (t_ps < 0.0) throw std::domain_error("evolve_analytic: t must be >= 0");
    const double decay = std::exp(-d.gamma * t_ps);
    const double growth = d.nbar_bath * (1.0 - decay);  // c in the header formula

    std::size_t order;
    if (n_trunc >= 0) {
        order = static_cast<std::size_t>(n_trunc);
    } else {
        // initial support plus enough room for the bath-fed geometric tail
        std::size_t pad = 4;
        if (growth > 0.0) {
            const double q = growth / (1.0 + growth);
            pad += static_cast<std::size_t>(
                std::ceil(std::log(kAutoTailMass) / std::log(q)));
        }
        order = initial.max_n() + pad;
    }

    // denominator D(z) = (1+c) - c z and its reciprocal
    PowerSeries denom = PowerSeries::affine(1.0 + growth, -growth, order);
    PowerSeries inv_denom = denom.reciprocal();
    // per-quantum map w(z) = 1 - E (1-z) / D(z)
    PowerSeries w = PowerSeries::constant(1.0, order) -
                    decay * (PowerSeries::affine(1.0, -1.0, order) * inv_denom);
    PowerSeries q = compose_polynomial(initial.probs(), w) * inv_denom;

    std::vector<double> out(q.coefficients());
    double sum = 0.0;
    for (double v : out) sum += v;
    if (std::abs(sum - 1.0) > 1e-8)
        throw std::runtime_error(
            "evolve_analytic: series truncation overflow; increase n_trunc");
    return NumberDistribution::adopt_raw(std::move(out));
}

ThreeLevelOccupation pn_closed_form(const NumberDistribution& initial, const DecayParams& d,
                                    double t_ps) {
    d.validate();
    if (t_ps < 0.0) throw std::domain_error("pn_closed_form: t must be >= 0");
    for (std::size_t n = 3; n < initial.size(); ++n)
        if (initial[n] > 1e-14)
            throw std::invalid_argument("pn_closed_form: initial support beyond n = 2");
    const double e = std::exp(-d.gamma * t_ps);
    const double p0 = initial[0], p1 = initial[1], p2 = initial[2];
    return {
        p0 + (1.0 - e) * p1 + (1.0 - e) * (1.0 - e) * p2,
        e * p1 + 2.0 * e * (1.0 - e) * p2,
        e * e * p2,
    };
}

double g2_conditional(double t_ps, double p1_0, const DecayParams& d) {
    d.validate();
    if (t_ps < 0.0) throw std::domain_error("g2_conditional: t must be >= 0");
    if (!(p1_0 > 0.0) || p1_0 > 1.0)
        throw std::domain_error("g2_conditional: p1_0 must lie in (0, 1]");
    const double x = d.nbar_bath * std::expm1(d.gamma * t_ps);
    if (std::isinf(x)) return 2.0 / p1_0;
    // 1 - 1/(1+x)^2 written as x(2+x)/(1+x)^2; exact zero at t = 0
    return (2.0 / p1_0) * x * (2.0 + x) / ((1.0 + x) * (1.0 + x));
}

double alpha_model(double t_ps, double p1_0, const DecayParams& d, double alpha0) {
    if (alpha0 < 0.0) throw std::domain_error("alpha_model: alpha0 must be >= 0");
    return g2_conditional(t_ps, p1_0, d) + alpha0;
}

double g2_sas_decay_model(double t_ps, double g2_0, const DecayParams& d,
                          double irf_fwhm_fs) {
    d.validate();
    if (!(g2_0 > 1.0))
        throw std::domain_error("g2_sas_decay_model: g2_0 must exceed the accidental floor 1");
    const double tau = 1.0 / d.gamma;
    if (irf_fwhm_fs <= 0.0)
        return t_ps < 0.0 ? 1.0 : 1.0 + (g2_0 - 1.0) * std::exp(-t_ps / tau);
    // exponential decay starting at t = 0 convolved with a Gaussian kernel
    const double sigma = irf_fwhm_fs * 1e-3 / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    const double smeared =
        0.5 * std::exp(sigma * sigma / (2.0 * tau * tau) - t_ps / tau) *
        std::erfc((sigma / tau - t_ps / sigma) / std::sqrt(2.0));
    return 1.0 + (g2_0 - 1.0) * smeared;
}

}  // namespace phonon
