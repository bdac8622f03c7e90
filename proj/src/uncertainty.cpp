#include "hpdro/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hpdro/kernels.hpp"

namespace hpdro::uncertainty {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

void require_samples(const ErrorHistory& history, std::size_t minimum) {
    require(history.samples.size() >= minimum, ErrorCode::invalid_argument,
            "stream '" + history.stream_id + "' slot " +
                std::to_string(history.time_slot) + ": need at least " +
                std::to_string(minimum) + " samples, got " +
                std::to_string(history.samples.size()));
    for (double v : history.samples)
        require(std::isfinite(v), ErrorCode::invalid_argument,
                "stream '" + history.stream_id + "' slot " +
                    std::to_string(history.time_slot) +
                    ": non-finite error sample");
}

} // namespace

double KdeModel::density(double xi) const {
    const double h = bandwidth;
    double acc = 0.0;
    for (double c : centers) {
        const double z = (xi - c) / h;
        acc += std::exp(-0.5 * z * z);
    }
    return acc / (static_cast<double>(centers.size()) * h * std::sqrt(kTwoPi));
}

double KdeModel::mean() const {
    return kernels::sum(centers.data(), centers.size()) /
           static_cast<double>(centers.size());
}

KdeModel KdeModel::negated() const {
    KdeModel m;
    m.bandwidth = bandwidth;
    m.centers.reserve(centers.size());
    for (double c : centers) m.centers.push_back(-c);
    return m;
}

GaussianModel fit_gaussian(const ErrorHistory& history) {
    require_samples(history, 2);
    const auto& s = history.samples;
    const double n = static_cast<double>(s.size());
    const double mu = kernels::sum(s.data(), s.size()) / n;
    double var = 0.0;
    for (double v : s) var += (v - mu) * (v - mu);
    var /= n; // population moments, matching the fit's definition
    return {mu, std::sqrt(var)};
}

KdeModel fit_kde(const ErrorHistory& history, double bandwidth) {
    require_samples(history, 2);
    require(std::isfinite(bandwidth) && bandwidth > 0.0,
            ErrorCode::invalid_argument,
            "bandwidth must be positive, got " + std::to_string(bandwidth));
    KdeModel m;
    m.centers = history.samples;
    m.bandwidth = bandwidth;
    return m;
}

AmbiguityRadius radius_from_risk(double beta) {
    require(std::isfinite(beta) && beta > 0.0 && beta <= 1.0,
            ErrorCode::invalid_argument,
            "risk level must lie in (0,1], got " + std::to_string(beta));
    return {-std::log(beta)};
}

RadiusMode radius_mode_from_string(const std::string& s) {
    if (s == "constant") return RadiusMode::constant;
    if (s == "sqrt-t" || s == "sqrt_t") return RadiusMode::sqrt_t;
    throw Error(ErrorCode::config,
                "unknown radius mode '" + s + "' (expected constant or sqrt-t)");
}

std::string to_string(RadiusMode mode) {
    return mode == RadiusMode::constant ? "constant" : "sqrt-t";
}

std::vector<AmbiguityRadius> radius_schedule(double beta, int H, RadiusMode mode,
                                             double dt_hours) {
    require(H >= 1, ErrorCode::invalid_argument,
            "schedule needs at least one slot");
    require(std::isfinite(dt_hours) && dt_hours > 0.0,
            ErrorCode::invalid_argument, "slot length must be positive");
    const double base = radius_from_risk(beta).eta;
    std::vector<AmbiguityRadius> out;
    out.reserve(static_cast<std::size_t>(H));
    for (int t = 0; t < H; ++t) {
        if (mode == RadiusMode::constant) {
            out.push_back({base});
        } else {
            // slot t ends at (t+1)·dt hours; the first slot scales by √dt
            out.push_back({base * std::sqrt((t + 1) * dt_hours)});
        }
    }
    return out;
}

double gaussian_margin(const GaussianModel& model, AmbiguityRadius radius) {
    require(radius.eta >= 0.0, ErrorCode::invalid_argument,
            "ambiguity radius must be nonnegative");
    require(model.sigma >= 0.0, ErrorCode::invalid_argument,
            "sigma must be nonnegative");
    return model.mu + model.sigma * std::sqrt(2.0 * radius.eta);
}

double g_kde(const KdeModel& model, AmbiguityRadius radius, double alpha) {
    require(alpha > 0.0, ErrorCode::invalid_argument, "alpha must be positive");
    const auto& c = model.centers;
    const double n = static_cast<double>(c.size());
    // log-sum-exp around the largest center: every addend is ≤ 1, so the sum
    // lives in [1, N] and cannot overflow however small alpha gets
    const double m = kernels::max(c.data(), c.size());
    double acc = 0.0;
    for (double v : c) acc += std::exp((v - m) / alpha);
    return alpha * radius.eta +
           model.bandwidth * model.bandwidth / (2.0 * alpha) + m +
           alpha * std::log(acc / n);
}

double g_min_kde(const KdeModel& model, AmbiguityRadius radius) {
    require(!model.centers.empty() && model.bandwidth > 0.0,
            ErrorCode::invalid_argument, "KDE model not fitted");
    require(radius.eta >= 0.0, ErrorCode::invalid_argument,
            "ambiguity radius must be nonnegative");
    if (radius.eta == 0.0) {
        // infimum over alpha is approached as alpha → ∞ and equals the mean
        return model.mean();
    }

    const auto [lo_it, hi_it] =
        std::minmax_element(model.centers.begin(), model.centers.end());
    const double spread = *hi_it - *lo_it;
    const double scale = std::max({model.bandwidth, spread, 1.0});

    auto g = [&](double u) { return g_kde(model, radius, std::exp(u)); };

    // Coarse scan of the convex objective over a wide log-alpha window,
    // expanding the window if the minimum sits on an edge.
    double u_lo = std::log(1e-6 * scale);
    double u_hi = std::log(1e6 * scale);
    int best = -1;
    constexpr int kGrid = 241;
    std::vector<double> gu(kGrid);
    for (int attempt = 0; attempt < 4; ++attempt) {
        const double step = (u_hi - u_lo) / (kGrid - 1);
        best = 0;
        for (int i = 0; i < kGrid; ++i) {
            gu[i] = g(u_lo + i * step);
            if (gu[i] < gu[best]) best = i;
        }
        if (best > 0 && best < kGrid - 1) break;
        if (best == 0)
            u_lo -= 14.0;
        else
            u_hi += 14.0;
        best = -1;
    }
    require(best > 0, ErrorCode::numeric,
            "failed to bracket the margin minimizer over alpha in [" +
                std::to_string(std::exp(u_lo)) + ", " +
                std::to_string(std::exp(u_hi)) + "]");

    const double step = (u_hi - u_lo) / (kGrid - 1);
    double a = u_lo + (best - 1) * step;
    double b = u_lo + (best + 1) * step;

    // Golden-section refinement; convexity guarantees the bracket is valid.
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = g(x1);
    double f2 = g(x2);
    for (int it = 0; it < 90 && (b - a) > 1e-11 * std::max(1.0, std::abs(a));
         ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = g(x2);
        }
    }
    return std::min(f1, f2);
}

double worst_case_expectation(const std::vector<double>& values,
                              const std::vector<double>& probs,
                              AmbiguityRadius radius) {
    require(!values.empty() && values.size() == probs.size(),
            ErrorCode::invalid_argument,
            "values and probabilities must be non-empty and equally long");
    double total = 0.0;
    for (double p : probs) {
        require(std::isfinite(p) && p >= 0.0, ErrorCode::invalid_argument,
                "probabilities must be nonnegative");
        total += p;
    }
    require(std::abs(total - 1.0) < 1e-9, ErrorCode::invalid_argument,
            "probabilities must sum to 1, got " + std::to_string(total));
    require(radius.eta >= 0.0, ErrorCode::invalid_argument,
            "ambiguity radius must be nonnegative");

    const std::size_t n = values.size();
    const double vmax = kernels::max(values.data(), n);

    auto nominal_mean = [&] {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m += probs[i] * values[i];
        return m;
    };
    if (radius.eta == 0.0) return nominal_mean();

    // Tilting by s places mass p_i·e^{s·v_i}/Z on atom i. Its KL divergence
    // from the nominal grows monotonically from 0 towards −ln(mass on the
    // argmax atoms); beyond that the ball already contains the argmax point
    // mass and the worst case is simply max value.
    double p_top = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (values[i] >= vmax - 1e-15 * std::max(1.0, std::abs(vmax)))
            p_top += probs[i];
    if (p_top > 0.0 && radius.eta >= -std::log(p_top) - 1e-13) return vmax;

    struct Tilt {
        double mean, kl;
    };
    auto tilt = [&](double s) -> Tilt {
        // log-sum-exp around s·vmax
        double z = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            z += probs[i] * std::exp(s * (values[i] - vmax));
        const double log_z = std::log(z) + s * vmax;
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double q = probs[i] * std::exp(s * (values[i] - vmax)) / z;
            mean += q * values[i];
        }
        // D_KL(Q(s) ‖ P) = s·E_Q[v] − ln Z(s)
        return {mean, s * mean - log_z};
    };

    double s_hi = 1.0;
    for (int i = 0; i < 200 && tilt(s_hi).kl < radius.eta; ++i) s_hi *= 2.0;
    double s_lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (s_lo + s_hi);
        if (tilt(mid).kl < radius.eta)
            s_lo = mid;
        else
            s_hi = mid;
    }
    return tilt(0.5 * (s_lo + s_hi)).mean;
}

double kl_divergence_estimate(const std::vector<double>& samples,
                              const std::function<double(double)>& density) {
    require(samples.size() >= 100, ErrorCode::invalid_argument,
            "KL estimate needs at least 100 samples, got " +
                std::to_string(samples.size()));
    const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    require(std::isfinite(lo) && std::isfinite(hi), ErrorCode::invalid_argument,
            "samples must be finite");
    const std::size_t n = samples.size();
    const int bins =
        static_cast<int>(std::ceil(1.0 + std::log2(static_cast<double>(n))));
    const double width = (hi - lo) / bins;
    if (width == 0.0) {
        // all samples identical: the histogram is a point mass; any density
        // places zero probability on a zero-width bin
        return std::numeric_limits<double>::infinity();
    }

    std::vector<double> freq(static_cast<std::size_t>(bins), 0.0);
    for (double v : samples) {
        int b = static_cast<int>((v - lo) / width);
        b = std::clamp(b, 0, bins - 1);
        freq[static_cast<std::size_t>(b)] += 1.0;
    }

    double kl = 0.0;
    for (int b = 0; b < bins; ++b) {
        const double f = freq[static_cast<std::size_t>(b)] /
                         static_cast<double>(n);
        if (f == 0.0) continue;
        // composite Simpson over the bin for the model's bin probability
        const double a = lo + b * width;
        constexpr int kPieces = 8; // even
        const double hstep = width / kPieces;
        double integral = density(a) + density(a + width);
        for (int i = 1; i < kPieces; ++i)
            integral += density(a + i * hstep) * ((i % 2) ? 4.0 : 2.0);
        integral *= hstep / 3.0;
        if (integral <= 0.0)
            return std::numeric_limits<double>::infinity();
        kl += f * std::log(f / integral);
    }
    return kl;
}

} // namespace hpdro::uncertainty
