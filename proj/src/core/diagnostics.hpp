#pragma once

#include <cstdint>
#include <vector>

#include "core/covariance.hpp"
#include "core/hull_cloud.hpp"

namespace cle {

// Monte-Carlo checks of the statistical identities. Every report carries the
// full (N, seed, h) triple; re-running with the same triple is bit-identical.

struct DriftReport {
    Covariance sigma{0.0, 0.0, 0.0};
    std::size_t paths = 0;
    double t_end = 0.0;
    double h = 0.0;
    std::uint64_t seed = 0;
    double mean = 0.0;
    double se = 0.0;
    double reference = 0.0;  // expected value of the estimator
    bool pass = false;       // |mean - reference| <= 3 se
};

// Mean growth rate of log|f| per unit sigma-time against the density-averaged
// prediction. Start angles are drawn from the stationary density; path i uses
// the stream addressed by (seed, i) for both the start angle and the noise.
DriftReport drift_logmod(const Covariance& sigma, std::size_t paths, double t_end, double h,
                         std::uint64_t seed, std::size_t M = 2048);

// Mean rate of log|f'/f|, compared against minus the second phase integral.
// Same streams as drift_logmod: identical inputs replay identical noise.
DriftReport drift_logderiv(const Covariance& sigma, std::size_t paths, double t_end, double h,
                           std::uint64_t seed, std::size_t M = 2048);

struct StationarityReport {
    Covariance sigma{0.0, 0.0, 0.0};
    std::size_t paths = 0;
    double h = 0.0;
    std::uint64_t seed = 0;
    double alpha = 0.01;
    double slack = 0.0;  // discretization allowance added to the critical value
    std::vector<double> checkpoints;
    std::vector<double> ks;
    double critical = 0.0;
    bool pass = false;
};

// Starts theta ~ p, evolves to each sigma-time checkpoint, and compares
// theta mod pi against the density CDF (rescaled to the half period) by a
// one-sample KS test at level alpha with an O(sqrt(h)) slack.
StationarityReport stationarity_test(const Covariance& sigma, std::size_t paths,
                                     std::vector<double> checkpoints, double h,
                                     std::uint64_t seed, std::size_t M = 2048);

enum class DualityStatistic { max_modulus, real_extent, imag_extent };

const char* duality_statistic_name(DualityStatistic s);

struct DualityReport {
    Covariance sigma{0.0, 0.0, 0.0};
    Covariance sigma_dual{0.0, 0.0, 0.0};
    std::size_t hulls = 0;
    std::size_t steps = 0;
    double horizon = 0.0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    DualityStatistic statistic = DualityStatistic::max_modulus;
    double ks = 0.0;
    double p_value = 0.0;
    double threshold = 1e-3;
    bool retried = false;
    bool pass = false;  // p_value > threshold
};

// Two-sample comparison of a scalar hull statistic: right hulls of sigma
// against left hulls of the dual covariance (a and b swapped, c negated)
// rotated by i. Independent seeds on the two sides.
DualityReport duality_test(const Covariance& sigma, std::size_t n_hulls, std::size_t n_steps,
                           double horizon, double epsilon, DualityStatistic statistic,
                           std::uint64_t seed, int threads = 1);

// Single-retry policy for the statistical flakiness budget: on failure the
// test reruns once with a shifted seed and reports that attempt.
DualityReport duality_with_retry(const Covariance& sigma, std::size_t n_hulls,
                                 std::size_t n_steps, double horizon, double epsilon,
                                 DualityStatistic statistic, std::uint64_t seed,
                                 int threads = 1);

struct DisconnectionReport {
    double cell = 0.0;
    double dilation = 0.0;
    std::size_t grid_w = 0;
    std::size_t grid_h = 0;
    double origin_re = 0.0;  // lower-left corner of the raster
    double origin_im = 0.0;
    std::size_t covered_cells = 0;
    std::size_t enclosed_cells = 0;
    double enclosed_area = 0.0;
};

// Rasterizes the cloud dilated by `dilation` onto a grid covering its
// bounding box (padded 10%, with a floor so the flood
// fill always starts outside the dilated set), flood-fills from the border,
// and reports cells that are neither covered nor reachable: candidate
// regions the hull disconnected from infinity. Only positive evidence is
// claimed; a sparse cloud can miss enclosures of the underlying hull.
DisconnectionReport disconnection_probe(const HullPointCloud& cloud, double cell,
                                        double dilation);

}  // namespace cle
