#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "core/covariance.hpp"
#include "core/rng.hpp"

namespace cle {

// Pi-periodic coefficients of the angular system in sigma-time:
// mu drives the angle, nu the log-modulus, D is the angular diffusion.
struct AngularCoefficients {
    double u = 0.0;
    double mu = 0.0;
    double nu = 0.0;
    double D = 0.0;
};

AngularCoefficients angular_coefficients(const Covariance& sigma, double u);

// Euler-Maruyama sample of the coupled polar system at uniform sigma-time
// step h.  theta is the continuous lift (never reduced mod pi); logderiv has
// no noise term.  inc_re/inc_im record the per-step correlated Gaussian pair
// shared by the theta and logmod updates.
struct PolarTrajectory {
    double h = 0.0;
    std::vector<double> sigma_t;  // grid 0, h, ..., steps*h
    std::vector<double> theta;
    std::vector<double> logmod;
    std::vector<double> logderiv;
    std::vector<double> inc_re;  // size steps
    std::vector<double> inc_im;
};

PolarTrajectory polar_evolve(const Covariance& sigma, double theta0, double t_end,
                             double h, RandomStream& rng);

// CSV columns: sigma_t, theta, logmod, logderiv.
void write_polar_csv(const PolarTrajectory& traj, std::ostream& os);
void write_polar_csv(const PolarTrajectory& traj, const std::string& file);

}  // namespace cle
