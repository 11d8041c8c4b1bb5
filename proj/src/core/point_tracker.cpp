#include "core/point_tracker.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cle {

namespace {

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

}  // namespace

PointTrajectory evolve_point(const DrivingPath& path, cplx z, double delta_swallow) {
    if (z == cplx(0.0, 0.0)) throw std::invalid_argument("evolve_point: z must be nonzero");
    if (!(delta_swallow > 0.0)) throw std::invalid_argument("evolve_point: delta_swallow must be positive");

    const std::size_t n = path.size();
    const double dt = path.step_dt();
    const double swallow2 = delta_swallow * delta_swallow;

    PointTrajectory traj;
    traj.z0 = z;
    traj.samples.reserve(n + 1);
    traj.samples.push_back({0.0, z});

    cplx f = z;
    if (std::norm(f) <= swallow2) {
        traj.absorbed = true;
        traj.t_z = AbsorptionWindow{0.0, 0.0};
        return traj;
    }

    double t_above = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double span_start = static_cast<double>(j) * dt;
        double consumed = 0.0;
        while (consumed < dt) {
            const double step = std::min(dt - consumed, 0.1 * std::norm(f));
            f = sqrt_near(f * f + 4.0 * step, f);
            consumed += step;
            const double t_now = span_start + consumed;
            if (std::norm(f) <= swallow2) {
                traj.samples.push_back({t_now, f});
                traj.absorbed = true;
                traj.t_z = AbsorptionWindow{t_above, t_now};
                return traj;
            }
            t_above = t_now;
        }
        const double t_end = static_cast<double>(j + 1) * dt;
        f -= cplx(path.x[j], path.y[j]);
        traj.samples.push_back({t_end, f});
        if (std::norm(f) <= swallow2) {
            traj.absorbed = true;
            traj.t_z = AbsorptionWindow{t_above, t_end};
            return traj;
        }
        t_above = t_end;
    }
    return traj;
}

SigmaTimeMap sigma_time(const PointTrajectory& traj) {
    if (traj.samples.size() < 2) throw std::invalid_argument("sigma_time: need at least two samples");
    SigmaTimeMap map;
    map.t.reserve(traj.samples.size());
    map.sigma.reserve(traj.samples.size());
    map.t.push_back(traj.samples[0].t);
    map.sigma.push_back(0.0);
    double acc = 0.0;
    for (std::size_t k = 1; k < traj.samples.size(); ++k) {
        const double dt = traj.samples[k].t - traj.samples[k - 1].t;
        const double g0 = 1.0 / std::norm(traj.samples[k - 1].f);
        const double g1 = 1.0 / std::norm(traj.samples[k].f);
        acc += 0.5 * (g0 + g1) * dt;
        map.t.push_back(traj.samples[k].t);
        map.sigma.push_back(acc);
    }
    return map;
}

double SigmaTimeMap::sigma_of_t(double t_query) const { return interp(t, sigma, t_query); }

double SigmaTimeMap::t_of_sigma(double s_query) const { return interp(sigma, t, s_query); }

}  // namespace cle
