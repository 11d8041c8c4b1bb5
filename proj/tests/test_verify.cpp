#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/density.hpp"
#include "core/diagnostics.hpp"
#include "core/phases.hpp"
#include "core/polar.hpp"
#include "core/stats.hpp"

using namespace cle;

namespace {

const double kPi = std::acos(-1.0);

}  // namespace

TEST_CASE("log-modulus drift matches the density-averaged rate") {
    const Covariance s = make_covariance(2.0, 2.0, 0.0);
    const DriftReport r = drift_logmod(s, 400, 1.5, 1e-3, 901);
    CHECK(r.mean > 0.0);
    CHECK(r.se > 0.0);
    CHECK(r.reference == doctest::Approx(phase_integrals(s).one).epsilon(1e-12));
    CHECK(r.pass);
    CHECK(r.paths == 400);
    CHECK(r.t_end == 1.5);
    CHECK(r.h == 1e-3);
    CHECK(r.seed == 901);

    // Identical triple replays identical noise.
    const DriftReport again = drift_logmod(s, 400, 1.5, 1e-3, 901);
    CHECK(again.mean == r.mean);
    CHECK(again.se == r.se);
}

TEST_CASE("standard error halves when the sample quadruples") {
    const Covariance s = make_covariance(2.0, 2.0, 0.0);
    const DriftReport small = drift_logmod(s, 300, 1.0, 2e-3, 902);
    const DriftReport big = drift_logmod(s, 1200, 1.0, 2e-3, 902);
    const double ratio = small.se / big.se;
    CHECK(ratio > 1.6);
    CHECK(ratio < 2.5);
}

TEST_CASE("total log growth has variance linear in the horizon") {
    const Covariance s = make_covariance(3.0, 1.0, 0.0);
    const DriftReport one = drift_logmod(s, 300, 1.0, 2e-3, 903);
    const DriftReport two = drift_logmod(s, 300, 2.0, 2e-3, 904);
    // (t_end * se)^2 estimates var(total) / N, which should double.
    const double v1 = 1.0 * one.se * 1.0 * one.se;
    const double v2 = 2.0 * two.se * 2.0 * two.se;
    CHECK(v2 / v1 > 1.4);
    CHECK(v2 / v1 < 2.8);
}

TEST_CASE("derivative-gap drift vanishes on the second boundary line") {
    const Covariance s = make_covariance(9.0, 1.0, 0.0);
    const DriftReport r = drift_logderiv(s, 400, 1.5, 1e-3, 905);
    CHECK(r.reference == 0.0);
    CHECK(std::fabs(r.mean) <= 3.0 * r.se);
    CHECK(r.pass);
}

TEST_CASE("drift rejects unusable inputs") {
    CHECK_THROWS_AS(drift_logmod(make_covariance(0.0, 0.0, 0.0), 10, 1.0, 1e-2, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(drift_logmod(make_covariance(2.0, 1.0, 0.0), 0, 1.0, 1e-2, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(drift_logmod(make_covariance(2.0, 1.0, 0.0), 10, 1.0, 2.0, 1),
                    std::invalid_argument);
}

TEST_CASE("stationary starts stay stationary") {
    const StationarityReport r =
        stationarity_test(make_covariance(5.0, 1.0, 0.0), 800, {0.5, 1.0}, 1e-3, 906);
    REQUIRE(r.ks.size() == 2);
    CHECK(r.checkpoints == std::vector<double>{0.5, 1.0});
    CHECK(r.critical == doctest::Approx(ks_one_sample_critical(r.alpha, 800)).epsilon(1e-12));
    CHECK(r.slack > 0.0);
    for (double ks : r.ks) CHECK(ks <= r.critical + r.slack);
    CHECK(r.pass);

    const StationarityReport skew =
        stationarity_test(make_covariance(2.0, 1.0, 0.5), 500, {0.5}, 1e-3, 907);
    CHECK(skew.pass);
}

TEST_CASE("stationarity validates checkpoints") {
    CHECK_THROWS_AS(stationarity_test(make_covariance(2.0, 1.0, 0.0), 100, {}, 1e-3, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(stationarity_test(make_covariance(2.0, 1.0, 0.0), 100, {-1.0}, 1e-3, 1),
                    std::invalid_argument);
}

TEST_CASE("uniform starts relax toward the stationary law") {
    const Covariance s = make_covariance(6.0, 1.0, 0.0);
    const StationaryDensity d = stationary_density(s, 1024);
    const std::size_t N = 600;
    const double h = 1e-3;
    std::vector<double> early(N), late(N);
    for (std::size_t i = 0; i < N; ++i) {
        RandomStream rs(908, i);
        const double theta0 = kPi * (static_cast<double>(i) + 0.5) / static_cast<double>(N);
        const PolarTrajectory traj = polar_evolve(s, theta0, 2.0, h, rs);
        const auto mod_pi = [](double t) {
            double v = std::fmod(t, std::acos(-1.0));
            return v < 0.0 ? v + std::acos(-1.0) : v;
        };
        early[i] = mod_pi(traj.theta[200]);
        late[i] = mod_pi(traj.theta[2000]);
    }
    const auto cdf_half = [&d](double x) { return 2.0 * d.cdf_at(x); };
    const double ks_early = ks_distance(early, cdf_half);
    const double ks_late = ks_distance(late, cdf_half);
    CHECK(ks_early > 0.05);
    CHECK(ks_late < ks_early);
    CHECK(ks_late < ks_one_sample_critical(0.001, N) + std::sqrt(h));
}

TEST_CASE("duality self-test on a symmetric covariance") {
    const DualityReport r = duality_with_retry(make_covariance(3.0, 3.0, 0.0), 120, 400, 1.0,
                                               0.05, DualityStatistic::max_modulus, 909);
    CHECK(r.pass);
    CHECK(r.p_value > r.threshold);
    CHECK(r.ks >= 0.0);
    CHECK(r.ks <= 1.0);
    CHECK(r.sigma_dual.a == 3.0);
    CHECK(r.sigma_dual.b == 3.0);
    CHECK(r.sigma_dual.c == 0.0);
}

TEST_CASE("duality report metadata and determinism") {
    const Covariance s = make_covariance(1.0, 4.0, 0.5);
    const DualityReport r =
        duality_test(s, 30, 150, 1.0, 0.05, DualityStatistic::real_extent, 7);
    CHECK(r.sigma_dual.a == 4.0);
    CHECK(r.sigma_dual.b == 1.0);
    CHECK(r.sigma_dual.c == -0.5);
    CHECK(r.hulls == 30);
    CHECK(r.steps == 150);
    CHECK(r.horizon == 1.0);
    CHECK(r.epsilon == 0.05);
    CHECK(r.seed == 7);
    CHECK(r.statistic == DualityStatistic::real_extent);
    CHECK_FALSE(r.retried);
    CHECK(r.p_value >= 0.0);
    CHECK(r.p_value <= 1.0);

    const DualityReport again =
        duality_test(s, 30, 150, 1.0, 0.05, DualityStatistic::real_extent, 7);
    CHECK(again.ks == r.ks);
    CHECK(again.p_value == r.p_value);

    CHECK(std::string(duality_statistic_name(DualityStatistic::max_modulus)) == "max_modulus");
    CHECK(std::string(duality_statistic_name(DualityStatistic::real_extent)) == "real_extent");
    CHECK(std::string(duality_statistic_name(DualityStatistic::imag_extent)) == "imag_extent");
}

TEST_CASE("disconnection probe sees nothing around a straight slit") {
    const DrivingPath p = make_path(make_covariance(1.0, 1.0, 0.0), 1.0,
                                    std::vector<double>(2000, 0.0),
                                    std::vector<double>(2000, 0.0));
    const HullPointCloud cloud = left_hull_cloud(p, 1e-3);
    const DisconnectionReport r = disconnection_probe(cloud, 0.02, 0.05);
    CHECK(r.covered_cells > 0);
    CHECK(r.enclosed_cells == 0);
    CHECK(r.enclosed_area == 0.0);
}

TEST_CASE("disconnection probe finds the inside of a ring") {
    HullPointCloud cloud;
    cloud.epsilon = 0.01;
    const std::size_t K = 200;
    for (std::size_t k = 0; k < K; ++k) {
        const double phi = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(K);
        CloudPoint pt;
        pt.re = std::cos(phi);
        pt.im = 1.5 + std::sin(phi);
        pt.t_added = 0.0;
        pt.probe = 0;
        cloud.points.push_back(pt);
    }
    const DisconnectionReport r = disconnection_probe(cloud, 0.02, 0.06);
    CHECK(r.grid_w > 0);
    CHECK(r.grid_h > 0);
    CHECK(r.covered_cells > 0);
    CHECK(r.enclosed_cells > 0);
    CHECK(r.enclosed_area == doctest::Approx(0.02 * 0.02 * r.enclosed_cells).epsilon(1e-12));
    // Interior of the dilated ring: a disk of radius roughly 0.94.
    CHECK(r.enclosed_area > 2.2);
    CHECK(r.enclosed_area < 3.2);
}
