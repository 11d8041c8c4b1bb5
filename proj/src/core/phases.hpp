#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "core/covariance.hpp"
#include "core/density.hpp"

namespace cle {

// Almost-sure growth rates per unit sigma-time, averaged against the
// stationary angular density:
//   integral_one = rate of log|f_t(z)|        (< 0: points get swallowed)
//   integral_two = rate of log|f_t(z)/f_t'(z)| (< 0: the hull reaches the point)
struct PhaseIntegrals {
    double one = 0.0;
    double two = 0.0;
    double err_one = 0.0;  // grid-refinement estimates (M vs M/2)
    double err_two = 0.0;
};

PhaseIntegrals phase_integrals(const Covariance& sigma, std::size_t M = 2048);

enum class Phase {
    thin,        // one >= 0, two > 0
    swallowing,  // one <  0, two > 0
    hitting,     // one <  0, two < 0
    dense,       // one >= 0, two < 0
    boundary_indeterminate,
};

const char* phase_name(Phase p);

struct PhaseReport {
    Covariance sigma{0.0, 0.0, 0.0};
    PhaseIntegrals integrals;
    double zero_tol = 0.0;  // max(1e-9, 10 * err): |value| below this reads as zero
    Phase phase = Phase::boundary_indeterminate;
};

// Sign-table classification. Values within zero_tol of zero resolve through
// the exact c = 0 rule (boundaries at a - b = 4 and a - b = 8) when c = 0,
// and report boundary_indeterminate otherwise.
PhaseReport classify(const Covariance& sigma, std::size_t M = 2048);

struct BoundaryPoint {
    double a = 0.0;
    double b = 0.0;
};

struct PhaseScan {
    std::vector<double> a_values;
    std::vector<double> b_values;
    double c = 0.0;
    std::size_t grid_M = 0;
    // Row-major [ib * a_values.size() + ia]; -1 marks covariances that are
    // not positive semidefinite.
    std::vector<int> phase;
    std::vector<double> one;  // NaN where invalid
    std::vector<double> two;
    // Zero crossings of each integral, bisected along grid edges.
    std::vector<BoundaryPoint> boundary_one;
    std::vector<BoundaryPoint> boundary_two;
};

PhaseScan phase_scan(const std::vector<double>& a_values,
                     const std::vector<double>& b_values, double c,
                     std::size_t M = 512);

// Grid CSV: a, b, one, two, phase (phase as name, "invalid" for -1).
void write_scan_grid_csv(const PhaseScan& scan, std::ostream& os);
void write_scan_grid_csv(const PhaseScan& scan, const std::string& file);

// Boundary CSV: curve, a, b with curve in {one, two}.
void write_scan_boundary_csv(const PhaseScan& scan, std::ostream& os);
void write_scan_boundary_csv(const PhaseScan& scan, const std::string& file);

}  // namespace cle
