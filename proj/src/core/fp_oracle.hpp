#pragma once

#include <cstddef>
#include <vector>

#include "core/covariance.hpp"

namespace cle {

// Steady state of the angular Fokker-Planck equation on a periodic grid,
// computed by finite-volume relaxation with Scharfetter-Gummel fluxes.
// Shares nothing with the closed-form construction in density.hpp beyond
// the drift/diffusion coefficients, so it serves as an independent check.
struct FpOracleResult {
    std::vector<double> u;      // M + 1 nodes on [0, 2*pi]
    std::vector<double> p;      // normalized, pi-periodic, p.back() == p.front()
    std::size_t iterations = 0;
    double residual = 0.0;      // L1 flux imbalance of the returned state
};

FpOracleResult fp_steady_march(const Covariance& sigma, std::size_t M);

// Same discrete flux balance solved algebraically: the steady state has
// constant probability current, so cell values follow by chasing the flux
// relation around the circle. Second route for cross-checking the march.
std::vector<double> fp_steady_direct(const Covariance& sigma, std::size_t M);

// Trapezoid L1 distance between two tables on a uniform grid of spacing h.
double l1_grid_distance(const std::vector<double>& f, const std::vector<double>& g, double h);

}  // namespace cle
