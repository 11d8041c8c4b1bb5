#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "core/phases.hpp"
#include "core/rng.hpp"

using namespace cle;

namespace {

std::vector<double> arange(double lo, double hi, double step) {
    std::vector<double> v;
    for (double x = lo; x <= hi + 1e-12; x += step) v.push_back(x);
    return v;
}

}  // namespace

TEST_CASE("exact cancellations on the symmetric axis") {
    // Radial coefficient 2 - a/2 + b/2 vanishes at a - b = 4, and shifts to
    // -2 at a - b = 8 where it cancels the derivative term; both integrands
    // are then identically zero before any quadrature happens.
    const PhaseIntegrals five = phase_integrals(make_covariance(5.0, 1.0, 0.0));
    CHECK(five.one == 0.0);
    CHECK(std::fabs(five.one) < 1e-9);
    CHECK(five.two > 0.0);

    const PhaseIntegrals nine = phase_integrals(make_covariance(9.0, 1.0, 0.0));
    CHECK(nine.two == 0.0);
    CHECK(std::fabs(nine.two) < 1e-9);
    CHECK(nine.one < 0.0);
}

TEST_CASE("representative classifications") {
    const PhaseReport sym = classify(make_covariance(2.0, 2.0, 0.0));
    CHECK(sym.phase == Phase::thin);
    CHECK(sym.integrals.one > 0.0);
    CHECK(sym.integrals.two > 0.0);

    const PhaseReport mid = classify(make_covariance(7.0, 1.0, 0.0));
    CHECK(mid.phase == Phase::swallowing);
    CHECK(mid.integrals.one < 0.0);
    CHECK(mid.integrals.two > 0.0);

    const PhaseReport deep = classify(make_covariance(12.0, 1.0, 0.0));
    CHECK(deep.phase == Phase::hitting);
    CHECK(deep.integrals.one < 0.0);
    CHECK(deep.integrals.two < 0.0);

    // Boundary values resolve through the exact rule, closed side inward.
    CHECK(classify(make_covariance(5.0, 1.0, 0.0)).phase == Phase::thin);
    CHECK(classify(make_covariance(9.0, 1.0, 0.0)).phase == Phase::hitting);
    CHECK(classify(make_covariance(6.0, 2.0, 0.0)).phase == Phase::thin);
    CHECK(classify(make_covariance(10.0, 2.0, 0.0)).phase == Phase::hitting);
}

TEST_CASE("c = 0 classification matches the difference rule everywhere") {
    RandomStream rs(80, 0);
    for (int i = 0; i < 200; ++i) {
        const double a = 0.3 + 11.0 * rs.next_uniform();
        const double b = 0.3 + 7.0 * rs.next_uniform();
        const double d = a - b;
        if (std::fabs(d - 4.0) < 0.15 || std::fabs(d - 8.0) < 0.15) continue;
        const Phase expect =
            d < 4.0 ? Phase::thin : (d < 8.0 ? Phase::swallowing : Phase::hitting);
        const PhaseReport rep = classify(make_covariance(a, b, 0.0), 256);
        CHECK(rep.phase == expect);
    }
}

TEST_CASE("classification is invariant under flipping the sign of c") {
    for (double a : {2.0, 5.0, 8.0}) {
        const PhaseReport plus = classify(make_covariance(a, 1.0, 0.5), 512);
        const PhaseReport minus = classify(make_covariance(a, 1.0, -0.5), 512);
        CHECK(plus.phase == minus.phase);
        CHECK(std::fabs(plus.integrals.one - minus.integrals.one) <
              1e-12 * (1.0 + std::fabs(plus.integrals.one)));
        CHECK(std::fabs(plus.integrals.two - minus.integrals.two) <
              1e-12 * (1.0 + std::fabs(plus.integrals.two)));
    }
}

TEST_CASE("a zero crossing off the symmetric axis reads as indeterminate") {
    // Bisect the root of the second integral in a for b = 1, c = 1/2; with
    // c nonzero there is no exact tie-break, so classification must refuse.
    const std::size_t M = 256;
    double lo = 7.0, hi = 11.0;
    const double v_lo = phase_integrals(make_covariance(lo, 1.0, 0.5), M).two;
    const double v_hi = phase_integrals(make_covariance(hi, 1.0, 0.5), M).two;
    REQUIRE(((v_lo < 0.0) != (v_hi < 0.0)));
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double v = phase_integrals(make_covariance(mid, 1.0, 0.5), M).two;
        if ((v < 0.0) == (v_lo < 0.0))
            lo = mid;
        else
            hi = mid;
    }
    const double a_root = 0.5 * (lo + hi);
    const PhaseReport rep = classify(make_covariance(a_root, 1.0, 0.5), M);
    CHECK(std::fabs(rep.integrals.two) <= rep.zero_tol);
    CHECK(rep.phase == Phase::boundary_indeterminate);
}

TEST_CASE("integrals refuse bad grids") {
    CHECK_THROWS_AS(phase_integrals(make_covariance(2.0, 1.0, 0.0), 10), std::invalid_argument);
    CHECK_THROWS_AS(phase_integrals(make_covariance(2.0, 1.0, 0.0), 513), std::invalid_argument);
}

TEST_CASE("phase names") {
    CHECK(std::string(phase_name(Phase::thin)) == "thin");
    CHECK(std::string(phase_name(Phase::swallowing)) == "swallowing");
    CHECK(std::string(phase_name(Phase::hitting)) == "hitting");
    CHECK(std::string(phase_name(Phase::dense)) == "dense");
    CHECK(std::string(phase_name(Phase::boundary_indeterminate)) == "boundary_indeterminate");
}

TEST_CASE("scan over the symmetric axis finds both boundary lines") {
    const PhaseScan scan = phase_scan(arange(0.0, 12.0, 0.5), arange(0.0, 8.0, 0.5), 0.0, 256);
    const std::size_t na = scan.a_values.size();
    REQUIRE(na == 25);
    REQUIRE(scan.b_values.size() == 17);

    // a = 0 column is invalid, as is b = 0 row.
    for (std::size_t ib = 0; ib < scan.b_values.size(); ++ib) CHECK(scan.phase[ib * na] == -1);
    for (std::size_t ia = 0; ia < na; ++ia) CHECK(scan.phase[ia] == -1);
    CHECK(std::isnan(scan.one[0]));

    const auto at = [&](double a, double b) {
        const std::size_t ia = static_cast<std::size_t>(a / 0.5);
        const std::size_t ib = static_cast<std::size_t>(b / 0.5);
        return scan.phase[ib * na + ia];
    };
    CHECK(at(2.0, 1.0) == static_cast<int>(Phase::thin));
    CHECK(at(6.0, 1.0) == static_cast<int>(Phase::swallowing));
    CHECK(at(10.0, 1.0) == static_cast<int>(Phase::hitting));

    REQUIRE(!scan.boundary_one.empty());
    REQUIRE(!scan.boundary_two.empty());
    for (const BoundaryPoint& p : scan.boundary_one) CHECK(std::fabs(p.a - p.b - 4.0) < 0.01);
    for (const BoundaryPoint& p : scan.boundary_two) CHECK(std::fabs(p.a - p.b - 8.0) < 0.01);
}

TEST_CASE("scan marks indefinite covariances invalid when c is nonzero") {
    const PhaseScan scan = phase_scan(arange(1.0, 5.0, 1.0), arange(1.0, 3.0, 1.0), 2.0, 256);
    const std::size_t na = scan.a_values.size();
    // ab < c^2 = 4 is invalid: (1,1), (2,1), (3,1), (1,2), (1,3).
    CHECK(scan.phase[0] == -1);
    CHECK(scan.phase[1] == -1);
    CHECK(scan.phase[na] == -1);
    // ab > 4 is analyzable: (5,1), (4,2).
    CHECK(scan.phase[4] >= 0);
    CHECK(scan.phase[na + 3] >= 0);
}

TEST_CASE("scan csv writers") {
    const PhaseScan scan = phase_scan(arange(0.0, 6.0, 1.0), arange(1.0, 2.0, 1.0), 0.0, 256);
    std::ostringstream grid;
    write_scan_grid_csv(scan, grid);
    const std::string g = grid.str();
    CHECK(g.find("# c = 0") != std::string::npos);
    CHECK(g.find("a,b,one,two,phase") != std::string::npos);
    CHECK(g.find(",,invalid") != std::string::npos);
    CHECK(g.find("thin") != std::string::npos);

    std::ostringstream boundary;
    write_scan_boundary_csv(scan, boundary);
    const std::string b = boundary.str();
    CHECK(b.find("curve,a,b") != std::string::npos);
    CHECK(b.find("one,") != std::string::npos);
}
