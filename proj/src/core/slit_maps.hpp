#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "core/complexmath.hpp"
#include "core/driving_path.hpp"

namespace cle {

// A point fell within tolerance of the excluded segment of a slit map.
struct OnSlitError : std::domain_error {
    using std::domain_error::domain_error;
};

// Tolerance for treating a point as touching a slit.
inline double on_slit_tolerance(double z_re, double z_im) {
    return 1e-9 * (1.0 + std::sqrt(z_re * z_re + z_im * z_im));
}

// Evaluates u * principal_sqrt(1 + s / u^2), the analytic branch asymptotic
// to u at infinity.  The sqrt argument crosses the negative real axis exactly
// on the excluded segment (u imaginary with |u| <= 2*sqrt(t) for s = +4t,
// u real with |u| <= 2*sqrt(t) for s = -4t), so landing within `tol` of that
// axis raises the on_slit flag.  All four slit maps reduce to this primitive;
// the hull sweep calls it in bulk, so it must stay branch-free.
inline void branch_pullback(double u_re, double u_im, double s, double tol,
                            double& out_re, double& out_im, bool& on_slit) {
    const double sq_re = u_re * u_re - u_im * u_im;
    const double sq_im = 2.0 * u_re * u_im;
    const double m2 = sq_re * sq_re + sq_im * sq_im;
    // s / u^2 = s * conj(u^2) / |u^2|^2
    const double arg_re = 1.0 + s * sq_re / m2;
    const double arg_im = -s * sq_im / m2;
    // !(m2 > ...) also catches NaN from an already-dead lane.  Bitwise ops
    // keep the check branch-free so bulk callers vectorize.
    const bool degenerate = !(m2 > tol * tol * tol * tol);
    const bool on_axis = (arg_re <= tol) & (std::fabs(arg_im) <= tol);
    on_slit = degenerate | on_axis;
    double r_re, r_im;
    fast_sqrt(arg_re, arg_im, r_re, r_im);
    out_re = u_re * r_re - u_im * r_im;
    out_im = u_re * r_im + u_im * r_re;
}

// Map removing the vertical slit x + i[-2*sqrt(t), 2*sqrt(t)], normalized to
// z - x at infinity.  Throws OnSlitError on the excluded segment.
cplx slit_map_real(double x, double t, cplx z);

// Map removing the vertical slit i*[y - 2*sqrt(t), y + 2*sqrt(t)] on the
// imaginary axis, normalized to z - iy at infinity.
cplx slit_map_imag(double y, double t, cplx z);

// Inverse of slit_map_real; defined off the real segment [-2*sqrt(t), 2*sqrt(t)].
cplx inverse_slit_real(double x, double t, cplx w);

// Inverse of slit_map_imag; same excluded segment, recenters to i*y.
cplx inverse_slit_imag(double y, double t, cplx w);

// Discrete centered chain: pair k applies the real-slit map for increment x_k
// then the imaginary-slit map for y_k, each of capacity duration
// horizon / (2n), so pair k lands at capacity time k * horizon / n.
struct ForwardTrajectory {
    std::vector<cplx> values;                // values[k] = chain after k pairs, values[0] = z
    std::optional<std::size_t> absorbed_at;  // 1-based pair index that swallowed the point
};

ForwardTrajectory compose_forward(const DrivingPath& path, cplx z);

}  // namespace cle
