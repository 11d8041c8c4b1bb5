#pragma once

#include <cmath>
#include <complex>

namespace cle {

using cplx = std::complex<double>;

// Principal square root, branch cut on the negative real axis.
// std::sqrt already implements this; the alias documents intent at call
// sites where the branch choice is the whole point.
inline cplx principal_sqrt(cplx z) { return std::sqrt(z); }

// Branchless principal sqrt used in hot loops. Matches std::sqrt to a few
// ulp for the moderate magnitudes that occur here (no overflow guards).
// The divisor clamp keeps the lane free of control flow so bulk callers
// vectorize; it is value-exact: any nonzero input gives t >= 2^-538, which
// absorbs the addend, and for zero input `inv` only ever multiplies im == 0.
inline void fast_sqrt(double re, double im, double& out_re, double& out_im) {
    double m = std::sqrt(re * re + im * im);
    double t = std::sqrt(0.5 * (m + std::fabs(re)));
    double inv = 0.5 / (t + 1e-300);
    bool nonneg = re >= 0.0;
    out_re = nonneg ? t : std::fabs(im) * inv;
    out_im = nonneg ? im * inv : std::copysign(t, im);
}

// Square root of `square` on the branch nearest `anchor`. Used when stepping
// f through d(f^2)/dt = 4, where the step size guarantees the two roots are
// separated relative to the anchor.
inline cplx sqrt_near(cplx square, cplx anchor) {
    cplx r = std::sqrt(square);
    double dot = r.real() * anchor.real() + r.imag() * anchor.imag();
    return dot >= 0.0 ? r : -r;
}

}  // namespace cle
