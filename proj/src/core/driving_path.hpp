#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "core/covariance.hpp"

namespace cle {

// Discrete complex driver: n increments (x_j, y_j), each spanning capacity
// time horizon / n. cum_re/cum_im hold prefix sums with a leading zero, so
// cum[j] is the driver value after j increments (size n + 1).
struct DrivingPath {
    Covariance sigma{0.0, 0.0, 0.0};
    double horizon = 0.0;
    std::uint64_t seed = 0;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> cum_re;
    std::vector<double> cum_im;

    std::size_t size() const { return x.size(); }
    double step_dt() const { return horizon / static_cast<double>(x.size()); }
};

// Samples n increments with per-increment covariance (horizon / n) * Sigma.
// Increment j draws from the stream addressed by (seed, j).
DrivingPath sample_driving_path(const Covariance& sigma, std::size_t n,
                                double horizon, std::uint64_t seed);

// Builds a path from explicit increments (tests, replay).
DrivingPath make_path(const Covariance& sigma, double horizon,
                      std::vector<double> x, std::vector<double> y,
                      std::uint64_t seed = 0);

enum class PathTransform {
    conjugate,  // (x, y) -> (x, -y): conjugated driver
    negate,     // (x, y) -> (-x, -y): negated driver
    scale,      // increments * r, horizon * r^2
    dual,       // (x_j, y_j) -> (y_{n-j+1}, -x_{n-j+1}): reversed driver times i
};

DrivingPath transform_path(const DrivingPath& p, PathTransform op,
                           double r = 1.0);

// CSV columns: j, x, y, cum_re, cum_im. '#'-prefixed header lines carry the
// resolved configuration as key = value pairs.
void write_path_csv(const DrivingPath& p, std::ostream& os);
void write_path_csv(const DrivingPath& p, const std::string& file);

// Binary layout: magic "CLEPATH1", then a,b,c,horizon as little-endian f64,
// seed and n as little-endian u64, then n little-endian f64 pairs (x_j, y_j).
void write_path_binary(const DrivingPath& p, const std::string& file);
DrivingPath read_path_binary(const std::string& file);

}  // namespace cle
