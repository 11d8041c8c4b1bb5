#include "core/polar.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "core/io_util.hpp"

namespace cle {

AngularCoefficients angular_coefficients(const Covariance& sigma, double u) {
    const double s2 = std::sin(2.0 * u);
    const double c2 = std::cos(2.0 * u);
    const double s1 = std::sin(u);
    const double c1 = std::cos(u);
    const double radial = 2.0 - 0.5 * sigma.a + 0.5 * sigma.b;
    AngularCoefficients k;
    k.u = u;
    k.mu = -radial * s2 - sigma.c * c2;
    k.nu = radial * c2 - sigma.c * s2;
    k.D = 0.5 * sigma.a * s1 * s1 + 0.5 * sigma.b * c1 * c1 - sigma.c * c1 * s1;
    return k;
}

PolarTrajectory polar_evolve(const Covariance& sigma, double theta0, double t_end,
                             double h, RandomStream& rng) {
    if (!(h > 0.0)) throw std::invalid_argument("polar_evolve: h must be positive");
    if (!(t_end > 0.0)) throw std::invalid_argument("polar_evolve: t_end must be positive");
    const auto steps = static_cast<std::size_t>(std::llround(t_end / h));
    if (steps == 0) throw std::invalid_argument("polar_evolve: t_end shorter than one step");

    PolarTrajectory traj;
    traj.h = h;
    traj.sigma_t.resize(steps + 1);
    traj.theta.resize(steps + 1);
    traj.logmod.resize(steps + 1);
    traj.logderiv.resize(steps + 1);
    traj.inc_re.resize(steps);
    traj.inc_im.resize(steps);

    traj.sigma_t[0] = 0.0;
    traj.theta[0] = theta0;
    traj.logmod[0] = 0.0;
    traj.logderiv[0] = 0.0;

    double th = theta0, lm = 0.0, ld = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
        const auto [xi, eta] = sample_increment(sigma, h, rng);
        const double s1 = std::sin(th);
        const double c1 = std::cos(th);
        const double s2 = 2.0 * s1 * c1;
        const double c2 = c1 * c1 - s1 * s1;
        const double radial = 2.0 - 0.5 * sigma.a + 0.5 * sigma.b;
        const double mu = -radial * s2 - sigma.c * c2;
        const double nu = radial * c2 - sigma.c * s2;
        // Shared (xi, eta) feeds both angle and log-modulus; the derivative
        // log is noise-free.
        th += mu * h - s1 * xi + c1 * eta;
        lm += nu * h + c1 * xi + s1 * eta;
        ld += -2.0 * c2 * h;
        traj.sigma_t[i + 1] = static_cast<double>(i + 1) * h;
        traj.theta[i + 1] = th;
        traj.logmod[i + 1] = lm;
        traj.logderiv[i + 1] = ld;
        traj.inc_re[i] = xi;
        traj.inc_im[i] = eta;
    }
    return traj;
}

void write_polar_csv(const PolarTrajectory& traj, std::ostream& os) {
    write_config_header(os, {{"h", fmt_full(traj.h)},
                             {"steps", std::to_string(traj.inc_re.size())}});
    os << "sigma_t,theta,logmod,logderiv\n";
    for (std::size_t i = 0; i < traj.sigma_t.size(); ++i) {
        os << fmt_full(traj.sigma_t[i]) << ',' << fmt_full(traj.theta[i]) << ','
           << fmt_full(traj.logmod[i]) << ',' << fmt_full(traj.logderiv[i]) << '\n';
    }
    if (!os) throw std::runtime_error("write_polar_csv: stream failure");
}

void write_polar_csv(const PolarTrajectory& traj, const std::string& file) {
    std::ofstream os(file);
    if (!os) throw std::runtime_error("cannot open for writing: " + file);
    write_polar_csv(traj, os);
}

}  // namespace cle
