#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/complexmath.hpp"
#include "core/driving_path.hpp"

namespace cle {

struct TrajectorySample {
    double t = 0.0;  // capacity time
    cplx f;          // centered map value
};

// |f| was last above the swallow radius at t_above and first at-or-below it
// at t_below; the absorbing time lies in [t_above, t_below].
struct AbsorptionWindow {
    double t_above = 0.0;
    double t_below = 0.0;
};

struct PointTrajectory {
    cplx z0;
    std::vector<TrajectorySample> samples;  // samples[0] = (0, z0), one per driver span,
                                            // plus a final sub-span sample if absorbed
    std::optional<AbsorptionWindow> t_z;
    bool absorbed = false;
};

inline constexpr double kDefaultSwallowRadius = 1e-4;

// Integrates the centered evolution df = 2/f dt - dU for the piecewise
// constant discrete driver: within a span the drift has the exact solution
// f -> sqrt(f^2 + 4*dt) on the branch continuing f, taken in substeps of at
// most 0.1*|f|^2 (a bounded step in sigma-time) so the branch never jumps;
// the driver increment is subtracted at the span end.  Declares absorption
// once |f| <= delta_swallow.
PointTrajectory evolve_point(const DrivingPath& path, cplx z,
                             double delta_swallow = kDefaultSwallowRadius);

// Cumulative sigma-time over a trajectory: knots[k] pairs capacity time t_k
// with 𝔱_k = ∫ |f|^{-2} ds, trapezoid rule on the sample grid.  Both
// coordinate sequences are strictly increasing.
struct SigmaTimeMap {
    std::vector<double> t;      // capacity times
    std::vector<double> sigma;  // sigma-times

    double sigma_of_t(double t_query) const;  // linear interpolation, clamped
    double t_of_sigma(double s_query) const;
};

SigmaTimeMap sigma_time(const PointTrajectory& traj);

}  // namespace cle
