#include "core/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "core/rng.hpp"

namespace cle {

namespace {
constexpr double kDegenerateRelTol = 1e-12;
}

bool is_valid_covariance(double a, double b, double c) {
    if (!(std::isfinite(a) && std::isfinite(b) && std::isfinite(c)))
        return false;
    if (a < 0.0 || b < 0.0) return false;
    double slack = kDegenerateRelTol * std::max(a * b, 1.0);
    return c * c <= a * b + slack;
}

Covariance make_covariance(double a, double b, double c) {
    if (!is_valid_covariance(a, b, c))
        throw std::invalid_argument(
            "covariance (a=" + std::to_string(a) + ", b=" + std::to_string(b) +
            ", c=" + std::to_string(c) +
            ") is not positive semidefinite (need a,b >= 0 and c^2 <= ab)");
    return {a, b, c};
}

bool is_degenerate(const Covariance& s) {
    if (s.a <= 0.0 || s.b <= 0.0) return false;
    return std::fabs(s.c * s.c - s.a * s.b) <= kDegenerateRelTol * (s.a * s.b);
}

std::pair<double, double> sample_increment(const Covariance& s, double dt,
                                           RandomStream& rng) {
    auto [g1, g2] = rng.next_gaussian_pair();
    double sd = std::sqrt(dt);
    if (s.a > 0.0) {
        double x = sd * std::sqrt(s.a) * g1;
        // Perfectly correlated driver: y is a deterministic multiple of x,
        // kept exact so downstream identities hold bitwise.
        if (is_degenerate(s))
            return {x, std::copysign(std::sqrt(s.b / s.a), s.c) * x};
        double resid = std::max(s.b - s.c * s.c / s.a, 0.0);
        double y = (s.c / std::sqrt(s.a)) * g1 + std::sqrt(resid) * g2;
        return {x, sd * y};
    }
    return {0.0, sd * std::sqrt(s.b) * g2};
}

}  // namespace cle
