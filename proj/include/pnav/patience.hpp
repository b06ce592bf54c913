#pragma once

#include <vector>

namespace pnav {

/// Two readings of the wait-probability sigmoid. The printed equation
/// (LiteralEq1) makes higher reward priors skip *earlier*, which contradicts
/// the reported behavior; FigureConsistent recenters the sigmoid at the prior
/// so that a higher prior shifts the curve right (longer waits). Both ship;
/// FigureConsistent is the default used by the simulator.
enum class PatienceVariant { FigureConsistent, LiteralEq1 };

struct PatienceParams {
    double beta = 50.0;     // sigmoid gain
    double mu_s = 40.0;     // reach-likelihood mean, seconds
    double sigma_s = 20.0;  // reach-likelihood std, seconds
    double prior_q = 0.5;   // prior reward probability (0.50 low, 0.95 high serotonin)
    PatienceVariant variant = PatienceVariant::FigureConsistent;

    void validate() const;
};

/// Standard normal CDF. Absolute error well below 1e-12.
double normal_cdf(double x);

/// Inverse standard normal CDF via bisection on normal_cdf. p in (0, 1).
double normal_cdf_inv(double p);

/// Prior-scaled likelihood of reaching the waypoint by time t:
/// prior_q * Phi((t - mu) / sigma).
double reach_likelihood(double t_s, const PatienceParams& params);

/// Probability of continuing to wait at elapsed search time t.
/// Strictly decreasing in t; never exactly 0 or 1 (exponent clamped).
double p_wait(double t_s, const PatienceParams& params);

/// Elapsed search time at which p_wait crosses the given level (FigureConsistent
/// closed form used as a starting point, refined by bisection for either variant).
double wait_crossing_time(double p_level, const PatienceParams& params);

enum class WaitDecision { Wait, Skip };

/// One patience draw: Skip iff u > p_wait(t). Pure; u comes from the caller's
/// seeded stream.
WaitDecision decide_wait(double t_s, const PatienceParams& params, double u);

/// Exact discrete distribution of the skip time under checks at
/// t = tick, 2*tick, ..., horizon. Serves as the dynamic-programming oracle
/// for Monte Carlo tests and analytics.
struct SkipTimeDistribution {
    std::vector<double> times_s;   // t_k = k * tick
    std::vector<double> mass;      // P(skip at t_k)
    double survival = 1.0;         // P(no skip by horizon)
    double mean_skip_time_s = 0.0; // E[t | skip]
    double stddev_skip_time_s = 0.0;
    double skip_probability = 0.0; // 1 - survival
};

SkipTimeDistribution skip_time_distribution(const PatienceParams& params,
                                            double tick_s, double horizon_s);

/// Evaluated wait curve, ordered in t.
struct WaitCurve {
    PatienceParams params;
    std::vector<std::pair<double, double>> samples; // (t, p_wait)
};

WaitCurve sample_wait_curve(const PatienceParams& params, double t_max_s,
                            double step_s);

} // namespace pnav
