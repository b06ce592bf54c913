#include "pnav/patience.hpp"

#include <cmath>
#include <stdexcept>

namespace pnav {

namespace {
constexpr double kExpClamp = 700.0; // keeps exp() finite for any beta*arg
} // namespace

void PatienceParams::validate() const {
    if (!std::isfinite(beta))
        throw std::invalid_argument("patience beta must be finite");
    if (!(sigma_s > 0.0))
        throw std::invalid_argument("patience sigma must be > 0");
    if (!(prior_q >= 0.0 && prior_q <= 1.0))
        throw std::invalid_argument("patience prior_q must be in [0, 1]");
}

double normal_cdf(double x) {
    if (!std::isfinite(x))
        throw std::invalid_argument("normal_cdf: non-finite input");
    return 0.5 * std::erfc(-x * M_SQRT1_2);
}

double normal_cdf_inv(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("normal_cdf_inv: p must be in (0, 1)");
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (normal_cdf(mid) < p) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

double reach_likelihood(double t_s, const PatienceParams& params) {
    params.validate();
    if (!(t_s >= 0.0))
        throw std::invalid_argument("reach_likelihood: t must be >= 0");
    return params.prior_q * normal_cdf((t_s - params.mu_s) / params.sigma_s);
}

double p_wait(double t_s, const PatienceParams& params) {
    params.validate();
    if (!(t_s >= 0.0))
        throw std::invalid_argument("p_wait: t must be >= 0");
    const double phi = normal_cdf((t_s - params.mu_s) / params.sigma_s);
    double arg;
    if (params.variant == PatienceVariant::LiteralEq1) {
        arg = params.beta * (params.prior_q * phi);
    } else {
        arg = params.beta * (phi - params.prior_q);
    }
    arg = std::fmin(kExpClamp, std::fmax(-kExpClamp, arg));
    return 1.0 / (1.0 + std::exp(arg));
}

double wait_crossing_time(double p_level, const PatienceParams& params) {
    if (!(p_level > 0.0 && p_level < 1.0))
        throw std::invalid_argument("wait_crossing_time: level must be in (0, 1)");
    // p_wait is strictly decreasing in t; bisect on [0, t_hi].
    double lo = 0.0, hi = params.mu_s + 40.0 * params.sigma_s;
    if (p_wait(lo, params) < p_level) return 0.0;
    for (int i = 0; i < 200 && hi - lo > 1e-10; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (p_wait(mid, params) > p_level) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

WaitDecision decide_wait(double t_s, const PatienceParams& params, double u) {
    if (!(u >= 0.0 && u < 1.0))
        throw std::invalid_argument("decide_wait: u must be in [0, 1)");
    return u > p_wait(t_s, params) ? WaitDecision::Skip : WaitDecision::Wait;
}

SkipTimeDistribution skip_time_distribution(const PatienceParams& params,
                                            double tick_s, double horizon_s) {
    params.validate();
    if (!(tick_s > 0.0))
        throw std::invalid_argument("skip_time_distribution: tick must be > 0");
    const double steps = horizon_s / tick_s;
    if (std::fabs(steps - std::round(steps)) > 1e-9)
        throw std::invalid_argument("skip_time_distribution: horizon must be a multiple of tick");

    SkipTimeDistribution dist;
    const long n = std::lround(steps);
    dist.times_s.reserve(n);
    dist.mass.reserve(n);
    double survival = 1.0;
    double m1 = 0.0, m2 = 0.0, total = 0.0;
    for (long k = 1; k <= n; ++k) {
        const double t = static_cast<double>(k) * tick_s;
        const double pw = p_wait(t, params);
        const double mass = survival * (1.0 - pw);
        dist.times_s.push_back(t);
        dist.mass.push_back(mass);
        total += mass;
        m1 += t * mass;
        m2 += t * t * mass;
        survival *= pw;
    }
    dist.survival = survival;
    dist.skip_probability = total;
    if (total > 0.0) {
        dist.mean_skip_time_s = m1 / total;
        const double var = m2 / total - dist.mean_skip_time_s * dist.mean_skip_time_s;
        dist.stddev_skip_time_s = var > 0.0 ? std::sqrt(var) : 0.0;
    }
    return dist;
}

WaitCurve sample_wait_curve(const PatienceParams& params, double t_max_s,
                            double step_s) {
    if (!(step_s > 0.0))
        throw std::invalid_argument("sample_wait_curve: step must be > 0");
    WaitCurve curve;
    curve.params = params;
    for (double t = 0.0; t <= t_max_s + 1e-9; t += step_s)
        curve.samples.emplace_back(t, p_wait(t, params));
    return curve;
}

} // namespace pnav
