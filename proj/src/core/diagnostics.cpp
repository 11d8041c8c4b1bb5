#include "core/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "core/density.hpp"
#include "core/phases.hpp"
#include "core/polar.hpp"
#include "core/rng.hpp"
#include "core/stats.hpp"

namespace cle {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSigmaMultiplier = 3.0;

void require_mc_args(std::size_t paths, double t_end, double h, const char* who) {
    if (paths == 0) throw std::invalid_argument(std::string(who) + ": requires at least one path");
    if (!(t_end > 0.0) || !(h > 0.0) || h > t_end)
        throw std::invalid_argument(std::string(who) + ": requires 0 < h <= t_end");
}

struct PolarBatch {
    std::vector<double> rate_logmod;  // logmod(t_end) / t_end
    std::vector<double> rate_gap;     // (logderiv - logmod)(t_end) / t_end
};

PolarBatch run_polar_batch(const Covariance& sigma, const StationaryDensity& d,
                           std::size_t paths, double t_end, double h, std::uint64_t seed) {
    PolarBatch batch;
    batch.rate_logmod.resize(paths);
    batch.rate_gap.resize(paths);
    for (std::size_t i = 0; i < paths; ++i) {
        RandomStream rs(seed, i);
        const double theta0 = d.sample(rs);
        const PolarTrajectory traj = polar_evolve(sigma, theta0, t_end, h, rs);
        const double lm = traj.logmod.back();
        const double ld = traj.logderiv.back();
        batch.rate_logmod[i] = lm / t_end;
        batch.rate_gap[i] = (ld - lm) / t_end;
    }
    return batch;
}

DriftReport drift_common(const Covariance& sigma, std::size_t paths, double t_end, double h,
                         std::uint64_t seed, std::size_t M, bool gap) {
    require_mc_args(paths, t_end, h, gap ? "drift_logderiv" : "drift_logmod");
    const StationaryDensity d = stationary_density(sigma, M);
    const PhaseIntegrals v = phase_integrals(d.sigma, M);
    const PolarBatch batch = run_polar_batch(d.sigma, d, paths, t_end, h, seed);

    DriftReport rep;
    rep.sigma = d.sigma;
    rep.paths = paths;
    rep.t_end = t_end;
    rep.h = h;
    rep.seed = seed;
    const MeanSe ms = mean_and_se(gap ? batch.rate_gap : batch.rate_logmod);
    rep.mean = ms.mean;
    rep.se = ms.se;
    rep.reference = gap ? -v.two : v.one;
    rep.pass = std::fabs(rep.mean - rep.reference) <= kSigmaMultiplier * rep.se;
    return rep;
}

}  // namespace

DriftReport drift_logmod(const Covariance& sigma, std::size_t paths, double t_end, double h,
                         std::uint64_t seed, std::size_t M) {
    return drift_common(sigma, paths, t_end, h, seed, M, false);
}

DriftReport drift_logderiv(const Covariance& sigma, std::size_t paths, double t_end, double h,
                           std::uint64_t seed, std::size_t M) {
    return drift_common(sigma, paths, t_end, h, seed, M, true);
}

StationarityReport stationarity_test(const Covariance& sigma, std::size_t paths,
                                     std::vector<double> checkpoints, double h,
                                     std::uint64_t seed, std::size_t M) {
    if (checkpoints.empty())
        throw std::invalid_argument("stationarity_test: requires at least one checkpoint");
    std::sort(checkpoints.begin(), checkpoints.end());
    const double t_end = checkpoints.back();
    require_mc_args(paths, t_end, h, "stationarity_test");
    for (double c : checkpoints) {
        if (!(c > 0.0))
            throw std::invalid_argument("stationarity_test: checkpoints must be positive");
    }
    const StationaryDensity d = stationary_density(sigma, M);

    std::vector<std::size_t> steps(checkpoints.size());
    for (std::size_t j = 0; j < checkpoints.size(); ++j)
        steps[j] = static_cast<std::size_t>(std::llround(checkpoints[j] / h));

    std::vector<std::vector<double>> angles(checkpoints.size(),
                                            std::vector<double>(paths, 0.0));
    for (std::size_t i = 0; i < paths; ++i) {
        RandomStream rs(seed, i);
        const double theta0 = d.sample(rs);
        const PolarTrajectory traj = polar_evolve(d.sigma, theta0, t_end, h, rs);
        for (std::size_t j = 0; j < checkpoints.size(); ++j) {
            const std::size_t idx = std::min(steps[j], traj.theta.size() - 1);
            double th = std::fmod(traj.theta[idx], kPi);
            if (th < 0.0) th += kPi;
            angles[j][i] = th;
        }
    }

    StationarityReport rep;
    rep.sigma = d.sigma;
    rep.paths = paths;
    rep.h = h;
    rep.seed = seed;
    rep.checkpoints = checkpoints;
    rep.slack = std::sqrt(h);
    rep.critical = ks_one_sample_critical(rep.alpha, paths);
    // theta mod pi has CDF 2 * cdf(p) on [0, pi): the density is pi-periodic
    // and each half period carries mass 1/2.
    const auto cdf_half = [&d](double x) { return 2.0 * d.cdf_at(x); };
    rep.pass = true;
    for (auto& sample : angles) {
        const double ks = ks_distance(std::move(sample), cdf_half);
        rep.ks.push_back(ks);
        if (ks > rep.critical + rep.slack) rep.pass = false;
    }
    return rep;
}

const char* duality_statistic_name(DualityStatistic s) {
    switch (s) {
        case DualityStatistic::max_modulus: return "max_modulus";
        case DualityStatistic::real_extent: return "real_extent";
        case DualityStatistic::imag_extent: return "imag_extent";
    }
    return "unknown";
}

namespace {

double cloud_statistic(const HullPointCloud& cloud, DualityStatistic stat) {
    if (cloud.points.empty()) return 0.0;
    switch (stat) {
        case DualityStatistic::max_modulus: {
            double best = 0.0;
            for (const auto& p : cloud.points)
                best = std::max(best, p.re * p.re + p.im * p.im);
            return std::sqrt(best);
        }
        case DualityStatistic::real_extent: {
            double lo = cloud.points[0].re, hi = lo;
            for (const auto& p : cloud.points) {
                lo = std::min(lo, p.re);
                hi = std::max(hi, p.re);
            }
            return hi - lo;
        }
        case DualityStatistic::imag_extent: {
            double lo = cloud.points[0].im, hi = lo;
            for (const auto& p : cloud.points) {
                lo = std::min(lo, p.im);
                hi = std::max(hi, p.im);
            }
            return hi - lo;
        }
    }
    return 0.0;
}

DualityReport duality_once(const Covariance& sigma, std::size_t n_hulls, std::size_t n_steps,
                           double horizon, double epsilon, DualityStatistic statistic,
                           std::uint64_t seed, int threads) {
    if (n_hulls < 2) throw std::invalid_argument("duality_test: requires at least two hulls");
    if (n_steps == 0 || !(horizon > 0.0) || !(epsilon > 0.0))
        throw std::invalid_argument("duality_test: requires n_steps > 0, horizon > 0, epsilon > 0");
    DualityReport rep;
    rep.sigma = make_covariance(sigma.a, sigma.b, sigma.c);
    rep.sigma_dual = Covariance{rep.sigma.b, rep.sigma.a, -rep.sigma.c};
    rep.hulls = n_hulls;
    rep.steps = n_steps;
    rep.horizon = horizon;
    rep.epsilon = epsilon;
    rep.seed = seed;
    rep.statistic = statistic;

    // Independent drivers on the two sides; the left clouds are rotated by i
    // before the statistic is taken.
    std::vector<double> right_stats(n_hulls), left_stats(n_hulls);
    constexpr std::uint64_t kSideOffset = 0x100000001b3ull;
    for (std::size_t k = 0; k < n_hulls; ++k) {
        const DrivingPath path = sample_driving_path(rep.sigma, n_steps, horizon, seed + k);
        right_stats[k] = cloud_statistic(right_hull_cloud(path, epsilon, threads), statistic);
    }
    for (std::size_t k = 0; k < n_hulls; ++k) {
        const DrivingPath path =
            sample_driving_path(rep.sigma_dual, n_steps, horizon, seed + kSideOffset + k);
        HullPointCloud cloud = left_hull_cloud(path, epsilon, threads);
        for (auto& p : cloud.points) {
            const double re = p.re;
            p.re = -p.im;
            p.im = re;
        }
        left_stats[k] = cloud_statistic(cloud, statistic);
    }

    rep.ks = ks_two_sample(right_stats, left_stats);
    rep.p_value = ks_two_sample_pvalue(rep.ks, n_hulls, n_hulls);
    rep.pass = rep.p_value > rep.threshold;
    return rep;
}

}  // namespace

DualityReport duality_test(const Covariance& sigma, std::size_t n_hulls, std::size_t n_steps,
                           double horizon, double epsilon, DualityStatistic statistic,
                           std::uint64_t seed, int threads) {
    return duality_once(sigma, n_hulls, n_steps, horizon, epsilon, statistic, seed, threads);
}

DualityReport duality_with_retry(const Covariance& sigma, std::size_t n_hulls,
                                 std::size_t n_steps, double horizon, double epsilon,
                                 DualityStatistic statistic, std::uint64_t seed, int threads) {
    DualityReport rep =
        duality_once(sigma, n_hulls, n_steps, horizon, epsilon, statistic, seed, threads);
    if (rep.pass) return rep;
    rep = duality_once(sigma, n_hulls, n_steps, horizon, epsilon, statistic,
                       seed + 0x9e3779b97f4a7c15ull, threads);
    rep.retried = true;
    return rep;
}

DisconnectionReport disconnection_probe(const HullPointCloud& cloud, double cell,
                                        double dilation) {
    if (cloud.points.empty())
        throw std::invalid_argument("disconnection_probe: empty cloud");
    if (!(cell > 0.0) || !(dilation >= 0.0))
        throw std::invalid_argument("disconnection_probe: requires cell > 0 and dilation >= 0");

    double re_lo = cloud.points[0].re, re_hi = re_lo;
    double im_lo = cloud.points[0].im, im_hi = im_lo;
    for (const auto& p : cloud.points) {
        re_lo = std::min(re_lo, p.re);
        re_hi = std::max(re_hi, p.re);
        im_lo = std::min(im_lo, p.im);
        im_hi = std::max(im_hi, p.im);
    }
    const double pad_floor = dilation + 2.0 * cell;
    const double pad_re = std::max(0.1 * (re_hi - re_lo), pad_floor);
    const double pad_im = std::max(0.1 * (im_hi - im_lo), pad_floor);
    const double org_re = re_lo - pad_re;
    const double org_im = im_lo - pad_im;
    const auto w = static_cast<std::size_t>(std::ceil((re_hi + pad_re - org_re) / cell)) + 1;
    const auto hgt = static_cast<std::size_t>(std::ceil((im_hi + pad_im - org_im) / cell)) + 1;
    if (w * hgt > (std::size_t{1} << 26))
        throw std::invalid_argument("disconnection_probe: raster too large; increase cell size");

    // 0 = empty, 1 = covered by the dilated cloud, 2 = connected to the border.
    std::vector<std::uint8_t> grid(w * hgt, 0);
    const auto reach = static_cast<long>(std::ceil(dilation / cell));
    const double dil2 = dilation * dilation;
    for (const auto& p : cloud.points) {
        const auto ci = static_cast<long>(std::floor((p.re - org_re) / cell));
        const auto cj = static_cast<long>(std::floor((p.im - org_im) / cell));
        for (long dj = -reach - 1; dj <= reach + 1; ++dj) {
            for (long di = -reach - 1; di <= reach + 1; ++di) {
                const long i = ci + di, j = cj + dj;
                if (i < 0 || j < 0 || i >= static_cast<long>(w) || j >= static_cast<long>(hgt))
                    continue;
                const double cx = org_re + (static_cast<double>(i) + 0.5) * cell;
                const double cy = org_im + (static_cast<double>(j) + 0.5) * cell;
                const double dr = cx - p.re, dm = cy - p.im;
                if (dr * dr + dm * dm <= dil2) grid[static_cast<std::size_t>(j) * w + i] = 1;
            }
        }
    }

    std::queue<std::size_t> frontier;
    const auto push_if_empty = [&](std::size_t idx) {
        if (grid[idx] == 0) {
            grid[idx] = 2;
            frontier.push(idx);
        }
    };
    for (std::size_t i = 0; i < w; ++i) {
        push_if_empty(i);
        push_if_empty((hgt - 1) * w + i);
    }
    for (std::size_t j = 0; j < hgt; ++j) {
        push_if_empty(j * w);
        push_if_empty(j * w + (w - 1));
    }
    while (!frontier.empty()) {
        const std::size_t idx = frontier.front();
        frontier.pop();
        const std::size_t i = idx % w, j = idx / w;
        if (i > 0) push_if_empty(idx - 1);
        if (i + 1 < w) push_if_empty(idx + 1);
        if (j > 0) push_if_empty(idx - w);
        if (j + 1 < hgt) push_if_empty(idx + w);
    }

    DisconnectionReport rep;
    rep.cell = cell;
    rep.dilation = dilation;
    rep.grid_w = w;
    rep.grid_h = hgt;
    rep.origin_re = org_re;
    rep.origin_im = org_im;
    for (const auto v : grid) {
        if (v == 1) ++rep.covered_cells;
        if (v == 0) ++rep.enclosed_cells;
    }
    rep.enclosed_area = static_cast<double>(rep.enclosed_cells) * cell * cell;
    return rep;
}

}  // namespace cle
