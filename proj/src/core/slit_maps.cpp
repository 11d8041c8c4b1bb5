#include "core/slit_maps.hpp"

#include <sstream>

namespace cle {

namespace {

void require_capacity(double t, const char* who) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        std::ostringstream msg;
        msg << who << ": capacity time must be finite and nonnegative, got " << t;
        throw std::invalid_argument(msg.str());
    }
}

[[noreturn]] void throw_on_slit(const char* who, cplx z, double t) {
    std::ostringstream msg;
    msg << who << ": point (" << z.real() << ", " << z.imag()
        << ") lies on the excluded slit for t = " << t;
    throw OnSlitError(msg.str());
}

cplx centered_map(double center_re, double center_im, double s, cplx z,
                  const char* who, double t) {
    const double u_re = z.real() - center_re;
    const double u_im = z.imag() - center_im;
    if (s == 0.0) return {u_re, u_im};
    const double tol = on_slit_tolerance(z.real(), z.imag());
    double out_re, out_im;
    bool on_slit = false;
    branch_pullback(u_re, u_im, s, tol, out_re, out_im, on_slit);
    if (on_slit) throw_on_slit(who, z, t);
    return {out_re, out_im};
}

cplx inverse_map(double shift_re, double shift_im, double t, cplx w, const char* who) {
    if (t == 0.0) return {w.real() + shift_re, w.imag() + shift_im};
    const double tol = on_slit_tolerance(w.real(), w.imag());
    double out_re, out_im;
    bool on_slit = false;
    branch_pullback(w.real(), w.imag(), -4.0 * t, tol, out_re, out_im, on_slit);
    if (on_slit) throw_on_slit(who, w, t);
    return {out_re + shift_re, out_im + shift_im};
}

}  // namespace

cplx slit_map_real(double x, double t, cplx z) {
    require_capacity(t, "slit_map_real");
    return centered_map(x, 0.0, 4.0 * t, z, "slit_map_real", t);
}

cplx slit_map_imag(double y, double t, cplx z) {
    require_capacity(t, "slit_map_imag");
    return centered_map(0.0, y, 4.0 * t, z, "slit_map_imag", t);
}

cplx inverse_slit_real(double x, double t, cplx w) {
    require_capacity(t, "inverse_slit_real");
    return inverse_map(x, 0.0, t, w, "inverse_slit_real");
}

cplx inverse_slit_imag(double y, double t, cplx w) {
    require_capacity(t, "inverse_slit_imag");
    return inverse_map(0.0, y, t, w, "inverse_slit_imag");
}

ForwardTrajectory compose_forward(const DrivingPath& path, cplx z) {
    const std::size_t n = path.size();
    const double t_half = path.horizon / (2.0 * static_cast<double>(n));
    ForwardTrajectory out;
    out.values.reserve(n + 1);
    out.values.push_back(z);
    double re = z.real(), im = z.imag();
    for (std::size_t k = 0; k < n; ++k) {
        bool hit_x = false, hit_y = false;
        double ur = re - path.x[k], ui = im;
        branch_pullback(ur, ui, 4.0 * t_half, on_slit_tolerance(re, im), re, im, hit_x);
        ur = re;
        ui = im - path.y[k];
        branch_pullback(ur, ui, 4.0 * t_half, on_slit_tolerance(re, im), re, im, hit_y);
        if (hit_x || hit_y) {
            out.absorbed_at = k + 1;
            break;
        }
        out.values.emplace_back(re, im);
    }
    return out;
}

}  // namespace cle
