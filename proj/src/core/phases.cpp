#include "core/phases.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "core/io_util.hpp"
#include "core/quadrature.hpp"

namespace cle {

namespace {

// Trapezoid of nu * p and (nu + 2 cos 2u) * p over one period. The second
// integrand is assembled from the same cos value so that covariances with
// radial coefficient -2 cancel exactly instead of to rounding.
void integrals_on_grid(const StationaryDensity& d, double& one, double& two) {
    const Covariance& s = d.sigma;
    const double radial = 2.0 - 0.5 * s.a + 0.5 * s.b;
    const std::size_t M = d.grid_size();
    std::vector<double> f1(M + 1), f2(M + 1);
    for (std::size_t i = 0; i <= M; ++i) {
        const double c2 = std::cos(2.0 * d.u[i]);
        const double s2 = std::sin(2.0 * d.u[i]);
        const double nu = radial * c2 - s.c * s2;
        f1[i] = nu * d.p[i];
        f2[i] = (nu + 2.0 * c2) * d.p[i];
    }
    const double h = d.u[1] - d.u[0];
    one = trapezoid_uniform(f1, h);
    two = trapezoid_uniform(f2, h);
}

}  // namespace

PhaseIntegrals phase_integrals(const Covariance& sigma, std::size_t M) {
    if (M < 16 || M % 4 != 0)
        throw std::invalid_argument("phase_integrals: grid size must be a multiple of 4, at least 16");
    const StationaryDensity fine = stationary_density(sigma, M);
    const StationaryDensity coarse = stationary_density(sigma, M / 2);
    PhaseIntegrals out;
    double c1 = 0.0, c2 = 0.0;
    integrals_on_grid(fine, out.one, out.two);
    integrals_on_grid(coarse, c1, c2);
    out.err_one = std::fabs(out.one - c1);
    out.err_two = std::fabs(out.two - c2);
    return out;
}

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::thin: return "thin";
        case Phase::swallowing: return "swallowing";
        case Phase::hitting: return "hitting";
        case Phase::dense: return "dense";
        case Phase::boundary_indeterminate: return "boundary_indeterminate";
    }
    return "unknown";
}

PhaseReport classify(const Covariance& sigma, std::size_t M) {
    PhaseReport rep;
    rep.sigma = make_covariance(sigma.a, sigma.b, sigma.c);
    rep.integrals = phase_integrals(rep.sigma, M);
    rep.zero_tol = std::max(1e-9, 10.0 * std::max(rep.integrals.err_one, rep.integrals.err_two));

    const double one = rep.integrals.one;
    const double two = rep.integrals.two;
    const bool one_zero = std::fabs(one) <= rep.zero_tol;
    const bool two_zero = std::fabs(two) <= rep.zero_tol;

    if ((one_zero || two_zero) && rep.sigma.c == 0.0) {
        // Exact rule on the symmetric axis: both integrals reduce to
        // multiples of the density moment, with zeros at a - b = 4 and
        // a - b = 8; each boundary belongs to the phase on its closed side.
        const double d = rep.sigma.a - rep.sigma.b;
        rep.phase = d <= 4.0 ? Phase::thin : (d < 8.0 ? Phase::swallowing : Phase::hitting);
        return rep;
    }
    if (one_zero || two_zero) {
        rep.phase = Phase::boundary_indeterminate;
        return rep;
    }
    if (one >= 0.0)
        rep.phase = two > 0.0 ? Phase::thin : Phase::dense;
    else
        rep.phase = two > 0.0 ? Phase::swallowing : Phase::hitting;
    return rep;
}

namespace {

bool scan_cell(double a, double b, double c, std::size_t M, PhaseIntegrals& out) {
    if (!is_valid_covariance(a, b, c) || !(a > 0.0) || !(b > 0.0)) return false;
    out = phase_integrals(Covariance{a, b, c}, M);
    return true;
}

int phase_code(const Covariance& sigma, const PhaseIntegrals& v) {
    const double tol = std::max(1e-9, 10.0 * std::max(v.err_one, v.err_two));
    const bool one_zero = std::fabs(v.one) <= tol;
    const bool two_zero = std::fabs(v.two) <= tol;
    if (one_zero || two_zero) {
        if (sigma.c == 0.0) {
            const double d = sigma.a - sigma.b;
            return static_cast<int>(d <= 4.0 ? Phase::thin
                                             : (d < 8.0 ? Phase::swallowing : Phase::hitting));
        }
        return static_cast<int>(Phase::boundary_indeterminate);
    }
    if (v.one >= 0.0) return static_cast<int>(v.two > 0.0 ? Phase::thin : Phase::dense);
    return static_cast<int>(v.two > 0.0 ? Phase::swallowing : Phase::hitting);
}

// Bisects the zero of the selected integral along the segment between two
// valid covariances (the PSD region is log-convex, so the segment is valid).
BoundaryPoint bisect_edge(double a0, double b0, double a1, double b1, double c, bool first,
                          double v0, std::size_t M) {
    double lo = 0.0, hi = 1.0;
    const double sign_lo = v0;
    for (int it = 0; it < 40 && (hi - lo) > 1e-6; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double am = a0 + mid * (a1 - a0);
        const double bm = b0 + mid * (b1 - b0);
        const PhaseIntegrals v = phase_integrals(Covariance{am, bm, c}, M);
        const double val = first ? v.one : v.two;
        if ((val < 0.0) == (sign_lo < 0.0))
            lo = mid;
        else
            hi = mid;
    }
    const double t = 0.5 * (lo + hi);
    return BoundaryPoint{a0 + t * (a1 - a0), b0 + t * (b1 - b0)};
}

}  // namespace

PhaseScan phase_scan(const std::vector<double>& a_values, const std::vector<double>& b_values,
                     double c, std::size_t M) {
    if (a_values.empty() || b_values.empty())
        throw std::invalid_argument("phase_scan: empty grid");
    PhaseScan scan;
    scan.a_values = a_values;
    scan.b_values = b_values;
    scan.c = c;
    scan.grid_M = M;
    const std::size_t na = a_values.size(), nb = b_values.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    scan.phase.assign(na * nb, -1);
    scan.one.assign(na * nb, nan);
    scan.two.assign(na * nb, nan);

    for (std::size_t ib = 0; ib < nb; ++ib) {
        for (std::size_t ia = 0; ia < na; ++ia) {
            PhaseIntegrals v;
            if (!scan_cell(a_values[ia], b_values[ib], c, M, v)) continue;
            const std::size_t idx = ib * na + ia;
            scan.one[idx] = v.one;
            scan.two[idx] = v.two;
            scan.phase[idx] = phase_code(Covariance{a_values[ia], b_values[ib], c}, v);
        }
    }

    // Sign changes along grid edges locate the zero curves of each integral.
    const auto edge = [&](std::size_t i0, std::size_t i1, double a0, double b0, double a1,
                          double b1) {
        if (scan.phase[i0] < 0 || scan.phase[i1] < 0) return;
        if ((scan.one[i0] < 0.0) != (scan.one[i1] < 0.0))
            scan.boundary_one.push_back(bisect_edge(a0, b0, a1, b1, c, true, scan.one[i0], M));
        if ((scan.two[i0] < 0.0) != (scan.two[i1] < 0.0))
            scan.boundary_two.push_back(bisect_edge(a0, b0, a1, b1, c, false, scan.two[i0], M));
    };
    for (std::size_t ib = 0; ib < nb; ++ib) {
        for (std::size_t ia = 0; ia + 1 < na; ++ia)
            edge(ib * na + ia, ib * na + ia + 1, a_values[ia], b_values[ib], a_values[ia + 1],
                 b_values[ib]);
    }
    for (std::size_t ib = 0; ib + 1 < nb; ++ib) {
        for (std::size_t ia = 0; ia < na; ++ia)
            edge(ib * na + ia, (ib + 1) * na + ia, a_values[ia], b_values[ib], a_values[ia],
                 b_values[ib + 1]);
    }
    const auto by_ab = [](const BoundaryPoint& l, const BoundaryPoint& r) {
        return l.b != r.b ? l.b < r.b : l.a < r.a;
    };
    std::sort(scan.boundary_one.begin(), scan.boundary_one.end(), by_ab);
    std::sort(scan.boundary_two.begin(), scan.boundary_two.end(), by_ab);
    return scan;
}

void write_scan_grid_csv(const PhaseScan& scan, std::ostream& os) {
    write_config_header(os, {{"c", fmt_full(scan.c)},
                             {"na", std::to_string(scan.a_values.size())},
                             {"nb", std::to_string(scan.b_values.size())},
                             {"grid", std::to_string(scan.grid_M)}});
    os << "a,b,one,two,phase\n";
    const std::size_t na = scan.a_values.size();
    for (std::size_t ib = 0; ib < scan.b_values.size(); ++ib) {
        for (std::size_t ia = 0; ia < na; ++ia) {
            const std::size_t idx = ib * na + ia;
            os << fmt_full(scan.a_values[ia]) << ',' << fmt_full(scan.b_values[ib]) << ',';
            if (scan.phase[idx] < 0) {
                os << ",,invalid\n";
            } else {
                os << fmt_full(scan.one[idx]) << ',' << fmt_full(scan.two[idx]) << ','
                   << phase_name(static_cast<Phase>(scan.phase[idx])) << '\n';
            }
        }
    }
    if (!os) throw std::runtime_error("write_scan_grid_csv: stream failure");
}

void write_scan_grid_csv(const PhaseScan& scan, const std::string& file) {
    std::ofstream os(file);
    if (!os) throw std::runtime_error("cannot open for writing: " + file);
    write_scan_grid_csv(scan, os);
}

void write_scan_boundary_csv(const PhaseScan& scan, std::ostream& os) {
    write_config_header(os, {{"c", fmt_full(scan.c)}});
    os << "curve,a,b\n";
    for (const auto& p : scan.boundary_one)
        os << "one," << fmt_full(p.a) << ',' << fmt_full(p.b) << '\n';
    for (const auto& p : scan.boundary_two)
        os << "two," << fmt_full(p.a) << ',' << fmt_full(p.b) << '\n';
    if (!os) throw std::runtime_error("write_scan_boundary_csv: stream failure");
}

void write_scan_boundary_csv(const PhaseScan& scan, const std::string& file) {
    std::ofstream os(file);
    if (!os) throw std::runtime_error("cannot open for writing: " + file);
    write_scan_boundary_csv(scan, os);
}

}  // namespace cle
