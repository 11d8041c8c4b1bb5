#include "support/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ref {

namespace {

cpx rk4_span(cpx f, double x, double dt, int steps) {
    const auto rhs = [x](cpx g) { return 2.0 / (g - x); };
    const double h = dt / steps;
    for (int i = 0; i < steps; ++i) {
        const cpx k1 = rhs(f);
        const cpx k2 = rhs(f + 0.5 * h * k1);
        const cpx k3 = rhs(f + 0.5 * h * k2);
        const cpx k4 = rhs(f + h * k3);
        f += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return f;
}

}  // namespace

cpx slit_flow_rk4(double x, double t, cpx z, int steps) {
    return rk4_span(z, x, t, steps) - x;
}

std::vector<cpx> centered_flow_rk4(const std::vector<double>& dx,
                                   const std::vector<double>& dy,
                                   double span_dt, cpx z, int sub) {
    if (dx.size() != dy.size()) throw std::invalid_argument("centered_flow_rk4: size mismatch");
    std::vector<cpx> out;
    out.reserve(dx.size() + 1);
    out.push_back(z);
    cpx f = z;
    for (std::size_t j = 0; j < dx.size(); ++j) {
        f = rk4_span(f, 0.0, span_dt, sub);
        f -= cpx(dx[j], dy[j]);
        out.push_back(f);
    }
    return out;
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n < 2 || n % 2 != 0) throw std::invalid_argument("simpson: n must be even and >= 2");
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

double dist_to_segment(cpx v, cpx p, cpx q) {
    const cpx d = q - p;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(v - p);
    double s = ((v.real() - p.real()) * d.real() + (v.imag() - p.imag()) * d.imag()) / len2;
    s = std::clamp(s, 0.0, 1.0);
    return std::abs(v - (p + s * d));
}

double hausdorff_to_segment(const std::vector<cpx>& pts, cpx p, cpx q, int samples) {
    if (pts.empty()) throw std::invalid_argument("hausdorff_to_segment: empty point set");
    double cloud_to_seg = 0.0;
    for (const cpx& v : pts) cloud_to_seg = std::max(cloud_to_seg, dist_to_segment(v, p, q));
    double seg_to_cloud = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const cpx s = p + (static_cast<double>(i) / samples) * (q - p);
        double best = std::abs(s - pts[0]);
        for (const cpx& v : pts) best = std::min(best, std::abs(s - v));
        seg_to_cloud = std::max(seg_to_cloud, best);
    }
    return std::max(cloud_to_seg, seg_to_cloud);
}

std::vector<double> dft_derivative(const std::vector<double>& f, double period) {
    const std::size_t n = f.size();
    if (n < 4) throw std::invalid_argument("dft_derivative: need at least 4 samples");
    const double two_pi = 2.0 * std::acos(-1.0);
    std::vector<cpx> coef(n);
    for (std::size_t k = 0; k < n; ++k) {
        cpx acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = -two_pi * static_cast<double>(k) * static_cast<double>(j) /
                               static_cast<double>(n);
            acc += f[j] * cpx(std::cos(ang), std::sin(ang));
        }
        coef[k] = acc / static_cast<double>(n);
    }
    std::vector<double> out(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        cpx acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            // Signed frequency: modes above n/2 wrap to negative; the n/2
            // mode differentiates to zero for real data.
            if (2 * k == n) continue;
            const double ks =
                k <= n / 2 ? static_cast<double>(k)
                           : static_cast<double>(k) - static_cast<double>(n);
            const double ang = two_pi * ks * static_cast<double>(j) / static_cast<double>(n);
            const cpx wave(std::cos(ang), std::sin(ang));
            acc += coef[k] * cpx(0.0, two_pi * ks / period) * wave;
        }
        out[j] = acc.real();
    }
    return out;
}

}  // namespace ref
