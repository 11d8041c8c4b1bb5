#pragma once

#include <cstdint>
#include <utility>

namespace cle {

class RandomStream;

// Covariance of the complex driver per unit capacity time: the real part has
// variance a, the imaginary part b, and their covariance is c. Valid iff the
// matrix [[a, c], [c, b]] is positive semidefinite.
struct Covariance {
    double a;
    double b;
    double c;
};

// Validates and returns the triple; throws std::invalid_argument on NaN,
// negative a or b, or c^2 > ab (degeneracy tolerance 1e-12 relative).
Covariance make_covariance(double a, double b, double c);

bool is_valid_covariance(double a, double b, double c);

// |c| = sqrt(ab) within 1e-12 relative, with a, b > 0.
bool is_degenerate(const Covariance& s);

// One increment (x, y) ~ N(0, dt * Sigma), built from two standard normals:
// x = sqrt(a) g1, y = (c / sqrt(a)) g1 + sqrt(b - c^2/a) g2 when a > 0,
// else x = 0, y = sqrt(b) g2.
std::pair<double, double> sample_increment(const Covariance& s, double dt,
                                           RandomStream& rng);

}  // namespace cle
