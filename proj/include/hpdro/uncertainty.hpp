#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hpdro/errors.hpp"

namespace hpdro::uncertainty {

/// Historical forecast-error samples for one stream (e.g. zonal power in kW
/// or outdoor temperature in °C) at one schedule slot.
struct ErrorHistory {
    std::string stream_id;
    int time_slot = 0;
    std::vector<double> samples;
};

/// Nominal Gaussian error model, population moments.
struct GaussianModel {
    double mu = 0.0;
    double sigma = 0.0;

    /// Model of the negated stream −ξ (used for lower-bound margins).
    GaussianModel negated() const { return {-mu, sigma}; }
};

/// Nominal kernel density estimate: equal-weight normal kernels of width
/// `bandwidth` placed on the historical samples.
struct KdeModel {
    std::vector<double> centers;
    double bandwidth = 0.0;

    double density(double xi) const;
    double mean() const;
    /// Model of the negated stream −ξ (used for lower-bound margins).
    KdeModel negated() const;
};

/// KL-divergence ball radius around the nominal distribution, in nats.
/// eta = 0 collapses the ambiguity set to the nominal itself.
struct AmbiguityRadius {
    double eta = 0.0;
};

enum class RadiusMode { constant, sqrt_t };

RadiusMode radius_mode_from_string(const std::string& s);
std::string to_string(RadiusMode mode);

/// Population-moment Gaussian fit (mean, σ with ÷N). Needs ≥ 2 samples.
GaussianModel fit_gaussian(const ErrorHistory& history);

/// Stores the samples as kernel centers. bandwidth must be positive.
KdeModel fit_kde(const ErrorHistory& history, double bandwidth);

/// Risk level β ∈ (0,1] → radius η = −ln β.
AmbiguityRadius radius_from_risk(double beta);

/// Per-slot radii. constant: −ln β everywhere. sqrt_t: −ln β·√t with t the
/// slot's end time in hours (first slot uses t = dt, never 0).
std::vector<AmbiguityRadius> radius_schedule(double beta, int H, RadiusMode mode,
                                             double dt_hours);

/// Worst-case mean of a Gaussian stream over the KL ball: μ + σ√(2η).
double gaussian_margin(const GaussianModel& model, AmbiguityRadius radius);

/// Worst-case mean of a KDE stream over the KL ball, i.e. the minimum over
/// α > 0 of
///
///   g(α) = α·η + h²/(2α) + α·ln( (1/N)·Σ_i exp(ξ_i/α) )
///
/// g is convex in α; the minimum is located by a coarse log-grid scan plus
/// golden-section refinement, with the exp-sum evaluated in log-sum-exp form.
/// η = 0 returns the sample mean (the infimum is approached as α → ∞).
double g_min_kde(const KdeModel& model, AmbiguityRadius radius);

/// Evaluates g(α) itself (exposed for convexity tests and diagnostics).
double g_kde(const KdeModel& model, AmbiguityRadius radius, double alpha);

/// Primal-side oracle: max of E_Q[value] over all distributions Q on the
/// given atoms with D_KL(Q‖nominal) ≤ η, found by exponential tilting
/// Q_i(s) ∝ prob_i·e^{s·value_i} and bisection on s. When the ball is wide
/// enough to contain the point mass on the best atoms, returns max value.
double worst_case_expectation(const std::vector<double>& values,
                              const std::vector<double>& probs,
                              AmbiguityRadius radius);

/// Histogram KL divergence of samples against a fitted density (diagnostic).
/// Sturges-rule bins; empty bins contribute 0; a bin the model assigns zero
/// probability but the samples populate yields +infinity.
double kl_divergence_estimate(const std::vector<double>& samples,
                              const std::function<double(double)>& density);

} // namespace hpdro::uncertainty
