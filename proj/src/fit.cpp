#include <gsl/gsl_blas.h>
#include <gsl/gsl_matrix.h>
#include <gsl/gsl_multifit_nlinear.h>
#include <gsl/gsl_vector.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>
#include <stdexcept>

#include "phonon/dynamics.hpp"

namespace phonon {

namespace {

struct FitContext {
    const std::vector<DecaySample>* samples;
    DecayModelKind kind;
    const FitOptions* options;
};

double eval_model(double t, double tau, double amplitude, const FitContext& ctx) {
    DecayParams d;
    d.gamma = 1.0 / tau;
    d.nbar_bath = ctx.options->nbar;
    if (ctx.kind == DecayModelKind::g2_sas)
        return g2_sas_decay_model(t, amplitude, d, ctx.options->irf_fwhm_fs);
    return alpha_model(t, ctx.options->p1_0, d, amplitude);
}

// Parameters are (log tau, amplitude); log keeps the lifetime positive
// without constrained optimization.
int residuals(const gsl_vector* x, void* raw, gsl_vector* f) {
    const auto& ctx = *static_cast<const FitContext*>(raw);
    const double tau = std::exp(gsl_vector_get(x, 0));
    const double amplitude = gsl_vector_get(x, 1);
    const auto& samples = *ctx.samples;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double model;
        try {
            model = eval_model(samples[i].t_ps, tau, amplitude, ctx);
        } catch (const std::domain_error&) {
            return GSL_EDOM;  // e.g. amplitude wandered below the model floor
        }
        gsl_vector_set(f, i, (model - samples[i].value) / samples[i].std_error);
    }
    return GSL_SUCCESS;
}

void validate_samples(const std::vector<DecaySample>& samples) {
    if (samples.size() < 4)
        throw std::runtime_error("fit_decay: degenerate sample set (need >= 4 samples)");
    std::set<double> times;
    for (const auto& s : samples) {
        if (!(s.std_error > 0.0))
            throw std::invalid_argument("fit_decay: sample std_error must be positive");
        times.insert(s.t_ps);
    }
    if (times.size() < 3)
        throw std::runtime_error("fit_decay: degenerate sample set (need >= 3 distinct times)");
}

// Fixed, deterministic starting point.
// tau:   time for the background-subtracted signal to fall below 1/e of its
//        value at the earliest sample, else a third of the time span.
// g2_sas amplitude: the largest observed value.
// alpha  amplitude: the smallest observed value (the offset floor).
void initial_guess(const std::vector<DecaySample>& samples, DecayModelKind kind,
                   double& tau0, double& amp0) {
    std::vector<DecaySample> sorted(samples);
    std::sort(sorted.begin(), sorted.end(),
              [](const DecaySample& a, const DecaySample& b) { return a.t_ps < b.t_ps; });
    const double span = sorted.back().t_ps - sorted.front().t_ps;
    double vmin = sorted.front().value, vmax = sorted.front().value;
    for (const auto& s : sorted) {
        vmin = std::min(vmin, s.value);
        vmax = std::max(vmax, s.value);
    }
    tau0 = span / 3.0;
    if (kind == DecayModelKind::g2_sas) {
        amp0 = std::max(vmax, 1.5);
        const double start = sorted.front().value - 1.0;
        if (start > 0.0) {
            for (const auto& s : sorted) {
                if (s.value - 1.0 < start / M_E) {
                    tau0 = std::max(s.t_ps - sorted.front().t_ps, span / 20.0);
                    break;
                }
            }
        }
    } else {
        amp0 = std::max(vmin, 0.0);
    }
}

}  // namespace

FitResult fit_decay(const std::vector<DecaySample>& samples, DecayModelKind model,
                    const FitOptions& options) {
    validate_samples(samples);

    FitContext ctx{&samples, model, &options};

    gsl_multifit_nlinear_fdf fdf{};
    fdf.f = residuals;
    fdf.df = nullptr;  // finite-difference Jacobian
    fdf.fvv = nullptr;
    fdf.n = samples.size();
    fdf.p = 2;
    fdf.params = &ctx;

    double tau0 = 0.0, amp0 = 0.0;
    initial_guess(samples, model, tau0, amp0);
    double x_init[2] = {std::log(tau0), amp0};
    gsl_vector_view x = gsl_vector_view_array(x_init, 2);

    gsl_multifit_nlinear_parameters fdf_params = gsl_multifit_nlinear_default_parameters();
    std::unique_ptr<gsl_multifit_nlinear_workspace,
                    decltype(&gsl_multifit_nlinear_free)>
        work(gsl_multifit_nlinear_alloc(gsl_multifit_nlinear_trust, &fdf_params,
                                        samples.size(), 2),
             &gsl_multifit_nlinear_free);
    if (!work) throw std::runtime_error("fit_decay: workspace allocation failed");

    int status = gsl_multifit_nlinear_init(&x.vector, &fdf, work.get());
    if (status != GSL_SUCCESS) throw std::runtime_error("fit_decay: init failed");

    int info = 0;
    status = gsl_multifit_nlinear_driver(options.max_iterations, 1e-12, 1e-12, 0.0,
                                         nullptr, nullptr, &info, work.get());
    if (status != GSL_SUCCESS && status != GSL_EMAXITER)
        throw std::runtime_error("fit_decay: solver failed");
    if (status == GSL_EMAXITER || info == 0)
        throw std::runtime_error("fit_decay: no convergence within iteration budget");

    gsl_matrix* covar = gsl_matrix_alloc(2, 2);
    gsl_multifit_nlinear_covar(gsl_multifit_nlinear_jac(work.get()), 0.0, covar);

    FitResult result;
    const double log_tau = gsl_vector_get(work->x, 0);
    result.tau_ps = std::exp(log_tau);
    result.amplitude = gsl_vector_get(work->x, 1);
    // Residuals are pre-scaled by the sample errors, so the covariance is the
    // parameter covariance directly; 1.96 sigma gives the 95% interval. The
    // log-tau variance maps to tau by the delta method.
    const double z95 = 1.959964;
    result.tau_ci95 = z95 * result.tau_ps * std::sqrt(gsl_matrix_get(covar, 0, 0));
    result.amplitude_ci95 = z95 * std::sqrt(gsl_matrix_get(covar, 1, 1));
    gsl_matrix_free(covar);

    double chi2 = 0.0;
    gsl_blas_ddot(work->f, work->f, &chi2);
    result.chi2 = chi2;
    result.iterations = static_cast<int>(gsl_multifit_nlinear_niter(work.get()));
    result.converged = true;
    return result;
}

}  // namespace phonon
