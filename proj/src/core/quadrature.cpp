#include "core/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cle {

namespace {

// Per-interval tolerances halve with each subdivision, but the estimates on
// a subinterval cannot settle below the rounding noise of the integrand
// itself, which for integrands built from cancelling sums (mu / D near a
// diffusion zero) runs a few thousand ulp. Without this floor an interval
// that keeps most of the mass through subdivision recurses forever. Twelve
// relative digits per subinterval is far tighter than any consumer needs.
double noise_floor(double whole, double halves) {
    return 4e-12 * std::max(std::fabs(whole), std::fabs(halves));
}

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a,
                     double fa, double b, double fb, double m, double fm,
                     double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, fa, m, fm, flm);
    double right = simpson(m, fm, b, fb, frm);
    double delta = left + right - whole;
    if (std::fabs(delta) <= std::max(15.0 * tol, noise_floor(whole, left + right)))
        return left + right + delta / 15.0;
    if (depth <= 0) throw std::runtime_error("adaptive_simpson: depth limit");
    return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

constexpr double kGl8Nodes[4] = {
    0.18343464249564980494, 0.52553240991632898582,
    0.79666647741362673959, 0.96028985649753623168};
constexpr double kGl8Weights[4] = {
    0.36268378337836198297, 0.31370664587788728734,
    0.22238103445337447054, 0.10122853629037625915};

double gl8_cell(const std::function<double(double)>& f, double a, double b) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
        double dx = half * kGl8Nodes[i];
        acc += kGl8Weights[i] * (f(mid - dx) + f(mid + dx));
    }
    return acc * half;
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
    double whole = simpson(a, fa, b, fb, fm);
    return adaptive_step(f, a, fa, b, fb, m, fm, whole, abs_tol, max_depth);
}

double composite_gl8(const std::function<double(double)>& f, double a,
                     double b, std::size_t ncells) {
    double acc = 0.0, h = (b - a) / static_cast<double>(ncells);
    for (std::size_t i = 0; i < ncells; ++i) {
        double lo = a + h * static_cast<double>(i);
        double hi = (i + 1 == ncells) ? b : lo + h;
        acc += gl8_cell(f, lo, hi);
    }
    return acc;
}

double adaptive_gl8(const std::function<double(double)>& f, double a, double b,
                    double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    const double whole = gl8_cell(f, a, b);
    const double m = 0.5 * (a + b);
    const double halves = gl8_cell(f, a, m) + gl8_cell(f, m, b);
    if (std::fabs(halves - whole) <= std::max(abs_tol, noise_floor(whole, halves)))
        return halves;
    if (max_depth <= 0) {
        throw std::runtime_error("adaptive_gl8: no convergence on [" + std::to_string(a) +
                                 ", " + std::to_string(b) + "]");
    }
    return adaptive_gl8(f, a, m, 0.5 * abs_tol, max_depth - 1) +
           adaptive_gl8(f, m, b, 0.5 * abs_tol, max_depth - 1);
}

std::vector<double> cumulative_gl8(const std::function<double(double)>& f,
                                   const std::vector<double>& knots) {
    std::vector<double> out(knots.size(), 0.0);
    for (std::size_t i = 1; i < knots.size(); ++i)
        out[i] = out[i - 1] + gl8_cell(f, knots[i - 1], knots[i]);
    return out;
}

double trapezoid_uniform(const std::vector<double>& values, double h) {
    if (values.size() < 2) return 0.0;
    double acc = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) acc += values[i];
    return acc * h;
}

}  // namespace cle
