#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace cle {

// Adaptive Simpson with absolute tolerance. Throws std::runtime_error if the
// recursion depth limit is hit before the tolerance is met.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double abs_tol, int max_depth = 60);

// Composite 8-point Gauss-Legendre over [a, b] split into ncells cells.
// Exact to machine precision for the smooth integrands used here.
double composite_gl8(const std::function<double(double)>& f, double a,
                     double b, std::size_t ncells);

// Cumulative integrals at the knots: out[i] = integral from knots[0] to
// knots[i], each cell integrated by GL8.
std::vector<double> cumulative_gl8(const std::function<double(double)>& f,
                                   const std::vector<double>& knots);

// GL8 with bisection refinement until the whole-vs-halves estimate settles
// below abs_tol. Unlike adaptive_simpson the error decays smoothly along
// neighbouring calls, which matters when results feed a spectral derivative.
// Throws std::runtime_error naming the subinterval on depth exhaustion.
double adaptive_gl8(const std::function<double(double)>& f, double a, double b,
                    double abs_tol, int max_depth = 40);

// Trapezoid rule over uniformly spaced samples with spacing h.
double trapezoid_uniform(const std::vector<double>& values, double h);

}  // namespace cle
