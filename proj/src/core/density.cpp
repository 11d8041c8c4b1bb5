#include "core/density.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "core/io_util.hpp"
#include "core/polar.hpp"
#include "core/quadrature.hpp"

namespace cle {

namespace {

constexpr double kPi = 3.14159265358979323846;
// exp() overflows past ~709; beyond this the p0/p1 mix has more dynamic
// range than a double can hold and we refuse rather than return garbage.
constexpr double kExpRangeLimit = 600.0;

void require_positive_axes(const Covariance& s, const char* who) {
    if (!(s.a > 0.0) || !(s.b > 0.0)) {
        std::ostringstream msg;
        msg << who << ": requires a > 0 and b > 0 (axis-confined drivers are classical SLE,"
            << " out of scope here); got a = " << s.a << ", b = " << s.b;
        throw std::invalid_argument(msg.str());
    }
}

void require_grid(std::size_t M, const char* who) {
    if (M < 8 || M % 2 != 0)
        throw std::invalid_argument(std::string(who) + ": grid size must be even and at least 8");
}

std::vector<double> make_grid(std::size_t M) {
    std::vector<double> u(M + 1);
    const double h = 2.0 * kPi / static_cast<double>(M);
    for (std::size_t i = 0; i <= M; ++i) u[i] = h * static_cast<double>(i);
    return u;
}

// Copies half-period raw values (size M/2 + 1) onto the full grid and
// normalizes; raw[H] must equal raw[0] so the copy is seamless.
void assemble(StationaryDensity& d, const std::vector<double>& raw, std::size_t M) {
    const std::size_t H = M / 2;
    d.u = make_grid(M);
    d.p.resize(M + 1);
    for (std::size_t i = 0; i <= H; ++i) d.p[i] = raw[i];
    for (std::size_t i = 1; i <= H; ++i) d.p[H + i] = raw[i];
    const double h = 2.0 * kPi / static_cast<double>(M);
    const double z = trapezoid_uniform(d.p, h);
    if (!(z > 0.0) || !std::isfinite(z))
        throw std::runtime_error("stationary density: non-normalizable values");
    d.normalizer = z;
    for (auto& v : d.p) v /= z;
    d.cdf.assign(M + 1, 0.0);
    for (std::size_t i = 1; i <= M; ++i)
        d.cdf[i] = d.cdf[i - 1] + 0.5 * (d.p[i - 1] + d.p[i]) * h;
    const double total = d.cdf[M];
    for (auto& v : d.cdf) v /= total;
}

StationaryDensity reflect_density(StationaryDensity base) {
    StationaryDensity out;
    out.sigma = Covariance{base.sigma.a, base.sigma.b, -base.sigma.c};
    out.u = base.u;
    const std::size_t M = base.grid_size();
    out.p.resize(M + 1);
    for (std::size_t i = 0; i <= M; ++i) out.p[i] = base.p[M - i];
    out.method = DensityMethod::reflected;
    out.normalizer = base.normalizer;
    out.r_star = base.r_star;
    if (base.singular_point) {
        const double x = *base.singular_point;
        out.singular_point = kPi - x;
    }
    const double h = 2.0 * kPi / static_cast<double>(M);
    out.cdf.assign(M + 1, 0.0);
    for (std::size_t i = 1; i <= M; ++i)
        out.cdf[i] = out.cdf[i - 1] + 0.5 * (out.p[i - 1] + out.p[i]) * h;
    const double total = out.cdf[M];
    for (auto& v : out.cdf) v /= total;
    return out;
}

double mu_of(const Covariance& s, double u) { return angular_coefficients(s, u).mu; }
double D_of(const Covariance& s, double u) { return angular_coefficients(s, u).D; }

}  // namespace

StationaryDensity density_c0(const Covariance& sigma, std::size_t M) {
    require_positive_axes(sigma, "density_c0");
    require_grid(M, "density_c0");
    if (sigma.c != 0.0) throw std::invalid_argument("density_c0: requires c = 0");
    const std::size_t H = M / 2;
    std::vector<double> raw(H + 1);
    const double a = sigma.a, b = sigma.b;
    for (std::size_t i = 0; i <= H; ++i) {
        const double uu = kPi * static_cast<double>(i) / static_cast<double>(H);
        const double c2 = std::cos(2.0 * uu);
        // (a + b + (b - a) cos 2u)^{4/(b-a)} up to a constant factor; the
        // log1p form keeps the a -> b limit exp((4/a) cos^2 u) continuous.
        raw[i] = (a == b) ? std::exp((2.0 / a) * c2)
                          : std::exp(4.0 / (b - a) * std::log1p((b - a) / (a + b) * c2));
    }
    raw[H] = raw[0];
    StationaryDensity d;
    d.sigma = sigma;
    d.method = DensityMethod::c0_closed_form;
    d.r_star = 0.0;
    assemble(d, raw, M);
    return d;
}

StationaryDensity density_general(const Covariance& sigma, std::size_t M) {
    require_positive_axes(sigma, "density_general");
    require_grid(M, "density_general");
    if (sigma.c == 0.0) throw std::invalid_argument("density_general: requires c != 0");
    if (is_degenerate(sigma))
        throw std::invalid_argument("density_general: requires ab - c^2 > 0");
    if (sigma.c < 0.0)
        return reflect_density(density_general(Covariance{sigma.a, sigma.b, -sigma.c}, M));

    const std::size_t H = M / 2;
    const double h = kPi / static_cast<double>(H);
    const auto muD = [&sigma](double s) { return mu_of(sigma, s) / D_of(sigma, s); };

    // A(u) = integral of mu/D from 0; cumulative per cell so the quadrature
    // error varies smoothly along the grid.
    std::vector<double> A(H + 1, 0.0);
    for (std::size_t i = 0; i < H; ++i) {
        const double lo = h * static_cast<double>(i);
        const double hi = h * static_cast<double>(i + 1);
        A[i + 1] = A[i] + adaptive_gl8(muD, lo, hi, 1e-13);
    }
    const auto [amin_it, amax_it] = std::minmax_element(A.begin(), A.end());
    if (*amin_it < -kExpRangeLimit || *amax_it > kExpRangeLimit) {
        throw std::runtime_error(
            "density_general: exponent range of p0/p1 exceeds double precision "
            "(covariance too close to degenerate)");
    }

    // B(u) = integral of exp(-A); interior A values come from a nested GL8
    // over the partial cell.
    std::vector<double> B(H + 1, 0.0);
    for (std::size_t i = 0; i < H; ++i) {
        const double lo = h * static_cast<double>(i);
        const double hi = h * static_cast<double>(i + 1);
        const double base = A[i];
        const auto integrand = [&](double s) {
            return std::exp(-(base + composite_gl8(muD, lo, s, 1)));
        };
        const double scale = std::exp(-std::min(A[i], A[i + 1]));
        B[i + 1] = B[i] + adaptive_gl8(integrand, lo, hi, 1e-13 * std::max(1.0, scale * h));
    }

    const double D0 = D_of(sigma, 0.0);
    std::vector<double> p0(H + 1), p1(H + 1);
    for (std::size_t i = 0; i <= H; ++i) {
        const double uu = h * static_cast<double>(i);
        const double Du = D_of(sigma, uu);
        const double eA = std::exp(A[i]);
        p0[i] = D0 / Du * eA;
        p1[i] = eA * B[i] / Du;
    }
    const double r_star = (p0[0] - p0[H]) / p1[H];

    std::vector<double> raw(H + 1);
    for (std::size_t i = 0; i <= H; ++i) raw[i] = p0[i] + r_star * p1[i];
    raw[H] = raw[0];

    StationaryDensity d;
    d.sigma = sigma;
    d.method = DensityMethod::p0_p1;
    d.r_star = r_star;
    assemble(d, raw, M);
    return d;
}

namespace {

// Local model of the critical density near a zero of D: Taylor data of mu
// and D at the singular angle plus the (divergent, asymptotic) series of the
// bounded solution of -mu p + (Dp)' = 1.
struct CriticalSeries {
    std::vector<double> c;       // series coefficients of p about the singular angle
    double decay = 0.0;          // C in the flat-term scale exp(-C/tau)
    double trust_radius = 0.0;   // |tau| where optimal truncation reaches ~1e-13

    double eval(double tau) const {
        double sum = c[0];
        double pow_tau = 1.0;
        double prev = std::fabs(c[0]);
        int tiny_run = 0;
        for (std::size_t k = 1; k < c.size(); ++k) {
            pow_tau *= tau;
            const double term = c[k] * pow_tau;
            const double mag = std::fabs(term);
            // Asymptotic series: stop at the smallest term. Symmetric
            // covariances zero out every other coefficient, so both stopping
            // rules must look past exact zeros rather than react to them.
            if (mag > 0.0) {
                if (k > 4 && prev > 0.0 && mag > prev) break;
                sum += term;
                prev = mag;
            }
            tiny_run = mag < 1e-17 * std::fabs(sum) ? tiny_run + 1 : 0;
            if (tiny_run >= 2) break;
        }
        return sum;
    }
};

CriticalSeries build_critical_series(const Covariance& sigma, double x) {
    const double a = sigma.a, b = sigma.b, c = sigma.c;
    const double R = 2.0 - 0.5 * a + 0.5 * b;
    const double s2x = std::sin(2.0 * x), c2x = std::cos(2.0 * x);
    // mu(x + tau) = alpha cos 2tau + beta sin 2tau
    const double alpha = -R * s2x - c * c2x;
    const double beta = -R * c2x + c * s2x;
    // D(x + tau) = (a+b)/4 + gamma cos 2tau + delta sin 2tau
    const double gamma = (b - a) / 4.0 * c2x - 0.5 * c * s2x;
    const double delta = -(b - a) / 4.0 * s2x - 0.5 * c * c2x;

    constexpr std::size_t K = 60;
    std::vector<double> m(K + 2, 0.0), d(K + 2, 0.0);
    double fact = 1.0;  // 2^k / k!
    for (std::size_t k = 0; k + 1 < K + 2; ++k) {
        if (k > 0) fact *= 2.0 / static_cast<double>(k);
        const int quarter = static_cast<int>(k % 4);
        const double sgn = (quarter == 2 || quarter == 3) ? -1.0 : 1.0;
        if (k % 2 == 0) {
            m[k] = sgn * alpha * fact;
            d[k] = sgn * gamma * fact;
        } else {
            m[k] = sgn * beta * fact;
            d[k] = sgn * delta * fact;
        }
    }
    d[0] += (a + b) / 4.0;  // analytically zero at the singular angle
    d[0] = 0.0;
    d[1] = 0.0;

    CriticalSeries out;
    out.c.assign(K + 1, 0.0);
    out.c[0] = -1.0 / m[0];
    for (std::size_t kk = 1; kk <= K; ++kk) {
        double acc = 0.0;
        for (std::size_t i = 2; i <= kk + 1; ++i) acc += d[i] * out.c[kk + 1 - i];
        acc *= static_cast<double>(kk + 1);
        for (std::size_t i = 1; i <= kk; ++i) acc -= m[i] * out.c[kk - i];
        out.c[kk] = acc / m[0];
    }
    out.decay = -m[0] / ((a + b) / 2.0);  // |mu(x)| / d_2
    out.trust_radius = out.decay / 30.0;
    return out;
}

}  // namespace

StationaryDensity density_degenerate(const Covariance& sigma, std::size_t M) {
    require_positive_axes(sigma, "density_degenerate");
    require_grid(M, "density_degenerate");
    if (!is_degenerate(sigma)) throw std::invalid_argument("density_degenerate: requires c^2 = ab");
    if (sigma.c < 0.0)
        return reflect_density(density_degenerate(Covariance{sigma.a, sigma.b, -sigma.c}, M));

    const double x = std::atan2(std::sqrt(sigma.b), std::sqrt(sigma.a));
    const CriticalSeries series = build_critical_series(sigma, x);
    const double tau = series.trust_radius;
    const auto muD = [&sigma](double s) { return mu_of(sigma, s) / D_of(sigma, s); };

    // Sort the grid points (reduced into (x, x + pi)) that need the marching
    // solution; everything within the trust radius of an endpoint uses the
    // series instead.
    std::vector<double> grid_u = make_grid(M);
    struct Target {
        double v;
        std::size_t idx;
    };
    std::vector<Target> march_targets;
    std::vector<double> p_full(M + 1, 0.0);
    std::vector<char> done(M + 1, 0);
    for (std::size_t i = 0; i <= M; ++i) {
        double v = grid_u[i] - kPi * std::floor((grid_u[i] - x) / kPi);
        v = std::clamp(v, x, x + kPi);
        const double t_near = v - x;
        const double t_far = v - (x + kPi);
        if (t_near <= tau) {
            p_full[i] = series.eval(t_near);
            done[i] = 1;
        } else if (-t_far <= tau) {
            p_full[i] = series.eval(t_far);
            done[i] = 1;
        } else {
            march_targets.push_back({v, i});
        }
    }
    std::sort(march_targets.begin(), march_targets.end(),
              [](const Target& l, const Target& r) { return l.v < r.v; });

    // q = D p obeys q' = 1 + (mu/D) q; advance by the exact homogeneous
    // factor exp(DeltaA) plus the inhomogeneous integral, splitting segments
    // until the exponent variation per piece is mild.
    struct Stepper {
        const std::function<double(double)>& muD;
        double exponent_budget = 0.7;

        double delta_A(double lo, double hi) const {
            return adaptive_gl8(muD, lo, hi, 1e-13);
        }
        // integral over [lo, hi] of exp(A(hi) - A(s)) ds
        double forced(double lo, double hi, int depth) const {
            const double dA = delta_A(lo, hi);
            if (std::fabs(dA) > exponent_budget && depth < 60) {
                const double mid = 0.5 * (lo + hi);
                const double right_dA = delta_A(mid, hi);
                return forced(mid, hi, depth + 1) + std::exp(right_dA) * forced(lo, mid, depth + 1);
            }
            const auto f = [&](double s) { return std::exp(adaptive_gl8(muD, s, hi, 1e-13)); };
            return adaptive_gl8(f, lo, hi, 1e-14 * std::max(1.0, hi - lo));
        }
        double advance(double q, double lo, double hi, int depth = 0) const {
            if (hi <= lo) return q;
            const double dA = delta_A(lo, hi);
            if (std::fabs(dA) > exponent_budget && depth < 60) {
                const double mid = 0.5 * (lo + hi);
                return advance(advance(q, lo, mid, depth + 1), mid, hi, depth + 1);
            }
            return std::exp(dA) * q + forced(lo, hi, depth);
        }
    };
    const std::function<double(double)> muD_fn = muD;
    Stepper stepper{muD_fn};

    double pos = x + tau;
    double q = D_of(sigma, pos) * series.eval(tau);
    for (const auto& tgt : march_targets) {
        q = stepper.advance(q, pos, tgt.v, 0);
        pos = tgt.v;
        p_full[tgt.idx] = q / D_of(sigma, tgt.v);
        done[tgt.idx] = 1;
    }
    // Always finish at the far anchor and compare with the far-side series:
    // disagreement means the asymptotic matching lost precision.
    const double far = x + kPi - tau;
    q = stepper.advance(q, pos, far, 0);
    const double p_march = q / D_of(sigma, far);
    const double p_far = series.eval(-tau);
    if (std::fabs(p_march - p_far) > 1e-6 * (1.0 + std::fabs(p_far))) {
        std::ostringstream msg;
        msg << "density_degenerate: precision loss near the singular angle (march "
            << p_march << " vs series " << p_far << " at u = " << far << ")";
        throw std::runtime_error(msg.str());
    }
    for (std::size_t i = 0; i <= M; ++i) {
        if (!done[i]) throw std::logic_error("density_degenerate: grid point not covered");
    }

    // The values are already pi-periodic by construction via reduction;
    // assemble from the first half for the shared normalization path.
    const std::size_t H = M / 2;
    std::vector<double> raw(p_full.begin(), p_full.begin() + H + 1);
    raw[H] = raw[0];
    StationaryDensity d;
    d.sigma = sigma;
    d.method = DensityMethod::degenerate;
    d.singular_point = x;
    assemble(d, raw, M);
    return d;
}

StationaryDensity stationary_density(const Covariance& sigma, std::size_t M) {
    const Covariance s = make_covariance(sigma.a, sigma.b, sigma.c);
    require_positive_axes(s, "stationary_density");
    require_grid(M, "stationary_density");
    if (s.c == 0.0) return density_c0(s, M);
    if (is_degenerate(s)) return density_degenerate(s, M);
    return density_general(s, M);
}

double mu_over_D_integral(const Covariance& sigma) {
    if (sigma.c == 0.0) return 0.0;
    const double disc = sigma.a * sigma.b - sigma.c * sigma.c;
    if (!(disc > 0.0))
        throw std::invalid_argument("mu_over_D_integral: requires ab - c^2 > 0");
    const double root = std::sqrt(disc);
    const double denom = root * ((sigma.a - sigma.b) * (sigma.a - sigma.b) +
                                 4.0 * sigma.c * sigma.c);
    return 8.0 * kPi * sigma.c * (2.0 * root - (sigma.a + sigma.b)) / denom;
}

double mu_over_D_quadrature(const Covariance& sigma) {
    const double disc = sigma.a * sigma.b - sigma.c * sigma.c;
    if (!(disc > 0.0))
        throw std::invalid_argument("mu_over_D_quadrature: requires ab - c^2 > 0");
    return adaptive_simpson(
        [&sigma](double u) { return mu_of(sigma, u) / D_of(sigma, u); }, 0.0, kPi, 1e-11);
}

double StationaryDensity::value(double angle) const {
    const std::size_t M = grid_size();
    const double two_pi = 2.0 * kPi;
    double r = std::fmod(angle, two_pi);
    if (r < 0.0) r += two_pi;
    const double h = two_pi / static_cast<double>(M);
    const auto i = std::min(static_cast<std::size_t>(r / h), M - 1);
    const double w = (r - u[i]) / h;
    return p[i] + w * (p[i + 1] - p[i]);
}

double StationaryDensity::cdf_at(double angle) const {
    const std::size_t M = grid_size();
    const double two_pi = 2.0 * kPi;
    double r = std::fmod(angle, two_pi);
    if (r < 0.0) r += two_pi;
    // Whole turns reduce to 0; report the accumulated full mass instead.
    if (r == 0.0 && angle >= two_pi) return 1.0;
    const double h = two_pi / static_cast<double>(M);
    const auto i = std::min(static_cast<std::size_t>(r / h), M - 1);
    const double w = (r - u[i]) / h;
    return cdf[i] + w * (cdf[i + 1] - cdf[i]);
}

double StationaryDensity::sample(RandomStream& rng) const {
    const double target = rng.next_uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), target);
    std::size_t i = it == cdf.begin() ? 1 : static_cast<std::size_t>(it - cdf.begin());
    i = std::min(i, cdf.size() - 1);
    const double lo = cdf[i - 1], hi = cdf[i];
    const double w = hi > lo ? (target - lo) / (hi - lo) : 0.5;
    return u[i - 1] + w * (u[i] - u[i - 1]);
}

void write_density_csv(const StationaryDensity& d, std::ostream& os) {
    const char* method = "";
    switch (d.method) {
        case DensityMethod::c0_closed_form: method = "c0_closed_form"; break;
        case DensityMethod::p0_p1: method = "p0_p1"; break;
        case DensityMethod::degenerate: method = "degenerate"; break;
        case DensityMethod::reflected: method = "reflected"; break;
    }
    std::vector<std::pair<std::string, std::string>> kv = {
        {"a", fmt_full(d.sigma.a)},       {"b", fmt_full(d.sigma.b)},
        {"c", fmt_full(d.sigma.c)},       {"grid", std::to_string(d.grid_size())},
        {"method", method},
    };
    if (d.r_star) kv.emplace_back("r_star", fmt_full(*d.r_star));
    if (d.singular_point) kv.emplace_back("singular_point", fmt_full(*d.singular_point));
    write_config_header(os, kv);
    os << "u,p\n";
    for (std::size_t i = 0; i < d.u.size(); ++i)
        os << fmt_full(d.u[i]) << ',' << fmt_full(d.p[i]) << '\n';
    if (!os) throw std::runtime_error("write_density_csv: stream failure");
}

void write_density_csv(const StationaryDensity& d, const std::string& file) {
    std::ofstream os(file);
    if (!os) throw std::runtime_error("cannot open for writing: " + file);
    write_density_csv(d, os);
}

}  // namespace cle
