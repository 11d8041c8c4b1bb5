#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "core/covariance.hpp"
#include "core/driving_path.hpp"
#include "core/point_tracker.hpp"
#include "core/polar.hpp"
#include "core/rng.hpp"
#include "support/reference.hpp"

using namespace cle;

namespace {

DrivingPath zero_path(std::size_t n, double horizon) {
    return make_path(make_covariance(1.0, 1.0, 0.0), horizon,
                     std::vector<double>(n, 0.0), std::vector<double>(n, 0.0));
}

}  // namespace

TEST_CASE("zero driving reproduces sqrt(z^2 + 4t)") {
    const DrivingPath p = zero_path(64, 1.0);
    const PointTrajectory tr = evolve_point(p, {3.0, 0.0});
    REQUIRE_FALSE(tr.absorbed);
    REQUIRE(tr.samples.size() == 65);
    CHECK(tr.samples.front().t == 0.0);
    CHECK(tr.samples.front().f == cplx(3.0, 0.0));
    CHECK(std::abs(tr.samples.back().f - cplx(std::sqrt(13.0), 0.0)) < 1e-6);
}

TEST_CASE("absorption of z = i happens at t = 1/4") {
    const DrivingPath p = zero_path(2000, 2.0);
    const PointTrajectory tr = evolve_point(p, {0.0, 1.0});
    REQUIRE(tr.absorbed);
    REQUIRE(tr.t_z.has_value());
    CHECK(tr.t_z->t_above <= tr.t_z->t_below);
    CHECK(std::fabs(tr.t_z->t_below - 0.25) < 1e-2);
    CHECK(std::norm(tr.samples.back().f) <= kDefaultSwallowRadius * kDefaultSwallowRadius);
}

TEST_CASE("tracker matches a Runge-Kutta integration of the same driver") {
    const Covariance s = make_covariance(1.0, 0.6, -0.2);
    const DrivingPath p = sample_driving_path(s, 300, 0.6, 13);
    const cplx z(1.2, 2.0);
    const PointTrajectory tr = evolve_point(p, z);
    REQUIRE_FALSE(tr.absorbed);
    const std::vector<ref::cpx> ode =
        ref::centered_flow_rk4(p.x, p.y, p.step_dt(), ref::cpx(z.real(), z.imag()), 32);
    REQUIRE(tr.samples.size() == ode.size());
    for (std::size_t k = 0; k < ode.size(); ++k) {
        CHECK(std::abs(tr.samples[k].f - cplx(ode[k].real(), ode[k].imag())) < 1e-7);
    }
}

TEST_CASE("envelope bounds hold along sampled spans") {
    const Covariance s = make_covariance(2.0, 1.5, 0.8);
    const DrivingPath p = sample_driving_path(s, 500, 1.0, 29);
    const PointTrajectory tr = evolve_point(p, {0.5, 2.2});
    const double dt = p.step_dt();
    int checked = 0;
    for (std::size_t k = 1; k < tr.samples.size(); ++k) {
        const auto& s0 = tr.samples[k - 1];
        const auto& s1 = tr.samples[k];
        if (std::abs(s0.f) < 1.0 || std::abs(s1.f) < 1.0) continue;
        const double span = s1.t - s0.t;
        const bool at_boundary = std::fabs(s1.t - static_cast<double>(k) * dt) < 1e-12;
        const double jx = at_boundary ? p.x[k - 1] : 0.0;
        const double jy = at_boundary ? p.y[k - 1] : 0.0;
        const double tol = 1e-8 * (1.0 + span);
        const double dre = s1.f.real() - s0.f.real();
        const double dim = s1.f.imag() - s0.f.imag();
        CHECK(dre >= -2.0 * span - jx - tol);
        CHECK(dre <= 2.0 * span - jx + tol);
        CHECK(dim >= -2.0 * span - jy - tol);
        CHECK(dim <= 2.0 * span - jy + tol);
        ++checked;
    }
    REQUIRE(checked > 100);
}

TEST_CASE("sigma time of the zero path matches the closed form") {
    const DrivingPath p = zero_path(2000, 1.0);
    const PointTrajectory tr = evolve_point(p, {1.0, 0.0});
    const SigmaTimeMap map = sigma_time(tr);
    for (double t : {0.1, 0.25, 0.5, 0.9, 1.0}) {
        const double expect = 0.25 * std::log1p(4.0 * t);
        CHECK(std::fabs(map.sigma_of_t(t) - expect) < 1e-4);
    }
    // Inverse lookup runs the interpolation the other way.
    const double s_mid = 0.25 * std::log1p(2.0);
    CHECK(std::fabs(map.t_of_sigma(s_mid) - 0.5) < 1e-3);
}

TEST_CASE("unit modulus makes sigma time equal capacity time") {
    PointTrajectory tr;
    tr.z0 = {1.0, 0.0};
    for (int k = 0; k <= 10; ++k)
        tr.samples.push_back({0.1 * k, cplx(std::cos(0.3 * k), std::sin(0.3 * k))});
    const SigmaTimeMap map = sigma_time(tr);
    for (int k = 0; k <= 10; ++k)
        CHECK(map.sigma_of_t(0.1 * k) == doctest::Approx(0.1 * k).epsilon(1e-12));
}

TEST_CASE("sigma time is strictly monotone on random trajectories") {
    RandomStream pick(61, 0);
    for (int trial = 0; trial < 1000; ++trial) {
        const double a = 0.2 + 3.0 * pick.next_uniform();
        const double b = 0.2 + 3.0 * pick.next_uniform();
        const double rho = -0.9 + 1.8 * pick.next_uniform();
        const Covariance s = make_covariance(a, b, rho * std::sqrt(a * b));
        const DrivingPath p = sample_driving_path(s, 50, 0.5, 9000 + trial);
        const cplx z(-1.0 + 2.0 * pick.next_uniform(), 0.5 + 2.0 * pick.next_uniform());
        const PointTrajectory tr = evolve_point(p, z);
        if (tr.samples.size() < 2) continue;
        const SigmaTimeMap map = sigma_time(tr);
        for (std::size_t k = 1; k < map.t.size(); ++k) {
            REQUIRE(map.t[k] > map.t[k - 1]);
            REQUIRE(map.sigma[k] > map.sigma[k - 1]);
        }
    }
}

TEST_CASE("evolve_point rejects the origin") {
    const DrivingPath p = zero_path(4, 0.1);
    CHECK_THROWS_AS(evolve_point(p, {0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(evolve_point(p, {1.0, 0.0}, 0.0), std::invalid_argument);
}

TEST_CASE("angular coefficients: plug-in values and periodicity") {
    const AngularCoefficients k0 = angular_coefficients(make_covariance(2.0, 1.0, 0.0), 0.0);
    CHECK(k0.mu == 0.0);
    CHECK(k0.nu == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(k0.D == doctest::Approx(0.5).epsilon(1e-15));

    // Degenerate spec: D vanishes at tan(u) = sqrt(b/a).
    const Covariance deg = make_covariance(4.0, 1.0, 2.0);
    const double ustar = std::atan(std::sqrt(1.0 / 4.0));
    CHECK(std::fabs(angular_coefficients(deg, ustar).D) < 1e-15);

    RandomStream rs(62, 0);
    const double pi = std::acos(-1.0);
    for (int i = 0; i < 1000; ++i) {
        const double u = pi * rs.next_uniform();
        const Covariance s = make_covariance(1.3, 0.9, -0.4);
        const AngularCoefficients at_u = angular_coefficients(s, u);
        const AngularCoefficients at_up = angular_coefficients(s, u + pi);
        CHECK(std::fabs(at_u.mu - at_up.mu) < 1e-13);
        CHECK(std::fabs(at_u.nu - at_up.nu) < 1e-13);
        CHECK(std::fabs(at_u.D - at_up.D) < 1e-13);
    }
}

TEST_CASE("degenerate diffusion equals the squared linear combination") {
    RandomStream rs(63, 0);
    const double pi = std::acos(-1.0);
    for (int i = 0; i < 500; ++i) {
        const double a = 0.3 + 4.0 * rs.next_uniform();
        const double b = 0.3 + 4.0 * rs.next_uniform();
        const Covariance s = make_covariance(a, b, std::sqrt(a * b));
        const double u = 2.0 * pi * rs.next_uniform();
        const double lin = std::sqrt(a) * std::sin(u) - std::sqrt(b) * std::cos(u);
        CHECK(std::fabs(2.0 * angular_coefficients(s, u).D - lin * lin) < 1e-14 * (1.0 + lin * lin));
    }
}

TEST_CASE("noise-free polar system is the explicit ODE") {
    RandomStream rs(64, 0);
    const PolarTrajectory tr = polar_evolve(make_covariance(0.0, 0.0, 0.0), 0.0, 1.0, 0.01, rs);
    REQUIRE(tr.theta.size() == 101);
    for (std::size_t i = 0; i < tr.theta.size(); ++i) {
        CHECK(tr.theta[i] == 0.0);
        CHECK(tr.logmod[i] == doctest::Approx(2.0 * 0.01 * i).epsilon(1e-12));
        CHECK(tr.logderiv[i] == doctest::Approx(-2.0 * 0.01 * i).epsilon(1e-12));
    }
}

TEST_CASE("zero-driving logmod closed form crosses the tracker") {
    // For the zero path from z = 1, log|f| = (1/2)log(1+4t) and sigma-time
    // is (1/4)log(1+4t), so logmod = 2 * sigma-time: the deterministic polar
    // system must reproduce the tracked trajectory through the time change.
    const DrivingPath p = zero_path(4000, 1.0);
    const PointTrajectory tr = evolve_point(p, {1.0, 0.0});
    const SigmaTimeMap map = sigma_time(tr);
    RandomStream rs(65, 0);
    const PolarTrajectory polar = polar_evolve(make_covariance(0.0, 0.0, 0.0), 0.0, 0.45, 1e-3, rs);
    for (double t : {0.2, 0.5, 1.0}) {
        const double st = map.sigma_of_t(t);
        const auto idx = static_cast<std::size_t>(std::llround(st / 1e-3));
        REQUIRE(idx < polar.logmod.size());
        const double from_tracker = std::log(std::abs(
            tr.samples[static_cast<std::size_t>(std::llround(t / p.step_dt()))].f));
        CHECK(std::fabs(polar.logmod[idx] - from_tracker) < 5e-3);
    }
}

TEST_CASE("polar noise feeds angle and modulus consistently") {
    const Covariance s = make_covariance(2.0, 1.0, 0.5);
    RandomStream rs(66, 0);
    const PolarTrajectory tr = polar_evolve(s, 0.7, 0.5, 1e-3, rs);
    const double radial = 2.0 - 0.5 * s.a + 0.5 * s.b;
    for (std::size_t i = 0; i + 1 < tr.theta.size(); ++i) {
        const double th = tr.theta[i];
        const double s1 = std::sin(th), c1 = std::cos(th);
        const double s2 = 2.0 * s1 * c1, c2 = c1 * c1 - s1 * s1;
        const double mu = -radial * s2 - s.c * c2;
        const double nu = radial * c2 - s.c * s2;
        const double mart_theta = tr.theta[i + 1] - th - mu * 1e-3;
        const double mart_logmod = tr.logmod[i + 1] - tr.logmod[i] - nu * 1e-3;
        // Invert the rotation [(-sin, cos), (cos, sin)] applied to (xi, eta).
        const double xi = -s1 * mart_theta + c1 * mart_logmod;
        const double eta = c1 * mart_theta + s1 * mart_logmod;
        CHECK(std::fabs(xi - tr.inc_re[i]) < 1e-12);
        CHECK(std::fabs(eta - tr.inc_im[i]) < 1e-12);
    }
}

TEST_CASE("logderiv steps are deterministic and bounded by 2h") {
    const Covariance s = make_covariance(3.0, 1.0, -0.9);
    RandomStream rs(67, 0);
    const double h = 2e-3;
    const PolarTrajectory tr = polar_evolve(s, 0.3, 0.8, h, rs);
    for (std::size_t i = 0; i + 1 < tr.logderiv.size(); ++i) {
        const double step = tr.logderiv[i + 1] - tr.logderiv[i];
        CHECK(std::fabs(step) <= 2.0 * h + 1e-15);
        // The update is exactly -2 cos(2 theta_i) h.
        const double c2 = std::cos(2.0 * tr.theta[i]);
        CHECK(step == doctest::Approx(-2.0 * c2 * h).epsilon(1e-12));
    }
}

TEST_CASE("realized quadratic variation of theta matches 2 D") {
    const Covariance s = make_covariance(2.0, 1.0, 0.5);
    RandomStream rs(68, 5);
    const double h = 1e-4;
    const PolarTrajectory tr = polar_evolve(s, 0.2, 1.0, h, rs);
    double qv = 0.0, predicted = 0.0;
    for (std::size_t i = 0; i + 1 < tr.theta.size(); ++i) {
        const double d = tr.theta[i + 1] - tr.theta[i];
        qv += d * d;
        predicted += 2.0 * angular_coefficients(s, tr.theta[i]).D * h;
    }
    // Single-path realized variance fluctuates at the few-percent scale.
    CHECK(std::fabs(qv - predicted) < 0.15 * predicted);
}

TEST_CASE("theta moves continuously at the sqrt(h) scale") {
    const Covariance s = make_covariance(4.0, 2.0, 1.0);
    RandomStream rs(69, 0);
    const double h = 1e-3;
    const PolarTrajectory tr = polar_evolve(s, 1.0, 2.0, h, rs);
    const double bound = 10.0 * std::sqrt((s.a + s.b) * h) + 10.0 * h;
    for (std::size_t i = 0; i + 1 < tr.theta.size(); ++i)
        CHECK(std::fabs(tr.theta[i + 1] - tr.theta[i]) < bound);
}
