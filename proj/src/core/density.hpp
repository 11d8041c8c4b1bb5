#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "core/covariance.hpp"
#include "core/rng.hpp"

namespace cle {

enum class DensityMethod { c0_closed_form, p0_p1, degenerate, reflected };

// Pi-periodic stationary density of the angular diffusion, tabulated on a
// uniform grid over [0, 2*pi] and normalized so the trapezoid integral is 1.
struct StationaryDensity {
    Covariance sigma{0.0, 0.0, 0.0};
    std::vector<double> u;  // M + 1 angles, u[0] = 0, u[M] = 2*pi
    std::vector<double> p;  // p[M] = p[0]
    std::vector<double> cdf;  // cumulative trapezoid of p, cdf[0] = 0, cdf[M] = 1
    DensityMethod method = DensityMethod::c0_closed_form;
    double normalizer = 0.0;                  // integral of the raw formula before scaling
    std::optional<double> r_star;             // mixing weight; 0 when c = 0, absent when degenerate
    std::optional<double> singular_point;     // angle where D vanishes (degenerate case)

    std::size_t grid_size() const { return u.size() - 1; }
    // Periodic linear interpolation of the table.
    double value(double angle) const;
    // CDF lookup / inverse-CDF sampling over [0, 2*pi).
    double cdf_at(double angle) const;
    double sample(RandomStream& rng) const;
};

// Dispatches on c: closed form at c = 0, the two-solution construction for
// 0 < |c| < sqrt(ab), the critical formula at |c| = sqrt(ab).  Negative c is
// handled by building the density for -c and reflecting u -> -u.
// Requires a > 0 and b > 0; M must be even and at least 8.
StationaryDensity stationary_density(const Covariance& sigma, std::size_t M = 2048);

// The individual constructions (dispatch targets), exposed for direct testing.
StationaryDensity density_c0(const Covariance& sigma, std::size_t M);
StationaryDensity density_general(const Covariance& sigma, std::size_t M);
StationaryDensity density_degenerate(const Covariance& sigma, std::size_t M);

// Closed form of the half-period integral of mu/D; requires ab - c^2 > 0 and
// (a - b)^2 + 4c^2 > 0.  Nonpositive for c >= 0.
double mu_over_D_integral(const Covariance& sigma);

// Independent evaluation of the same integral by adaptive quadrature, kept
// separate so the two routes can be compared.
double mu_over_D_quadrature(const Covariance& sigma);

// CSV columns: u, p.
void write_density_csv(const StationaryDensity& d, std::ostream& os);
void write_density_csv(const StationaryDensity& d, const std::string& file);

}  // namespace cle
