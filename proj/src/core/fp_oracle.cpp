#include "core/fp_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "core/polar.hpp"

namespace cle {

namespace {

constexpr double kPi = 3.14159265358979323846;

// x / (e^x - 1); the Bernoulli weight of the Scharfetter-Gummel flux.
double bernoulli_ratio(double x) {
    if (std::fabs(x) < 1e-5) return 1.0 - 0.5 * x + x * x / 12.0;
    if (x > 700.0) return 0.0;
    if (x < -700.0) return -x;
    return x / std::expm1(x);
}

// Current through face i (between cells i and i+1): J_i = ja[i] rho_i - jb[i] rho_{i+1}.
struct FaceCoeffs {
    std::vector<double> ja, jb;
};

FaceCoeffs face_coeffs(const Covariance& sigma, std::size_t H, double h) {
    FaceCoeffs f;
    f.ja.resize(H);
    f.jb.resize(H);
    for (std::size_t i = 0; i < H; ++i) {
        const double uf = (static_cast<double>(i) + 0.5) * h;
        const double D = angular_coefficients(sigma, uf).D;
        // Effective drift of the current J = m p - (D p)' + D' p = m p - D p',
        // where m = mu - D'; the trig identity collapses it to -2 sin 2u.
        const double m = -2.0 * std::sin(2.0 * uf);
        if (D < 1e-300) {
            f.ja[i] = std::max(m, 0.0);
            f.jb[i] = std::max(-m, 0.0);
        } else {
            const double P = m * h / D;
            f.ja[i] = D / h * bernoulli_ratio(-P);
            f.jb[i] = D / h * bernoulli_ratio(P);
        }
    }
    return f;
}

void require_oracle_args(const Covariance& sigma, std::size_t M, const char* who) {
    if (!is_valid_covariance(sigma.a, sigma.b, sigma.c) || !(sigma.a > 0.0) || !(sigma.b > 0.0))
        throw std::invalid_argument(std::string(who) + ": requires a valid covariance with a, b > 0");
    if (M < 8 || M % 4 != 0)
        throw std::invalid_argument(std::string(who) +
                                    ": grid size must be a multiple of four and at least 8");
}

// Cyclic tridiagonal solve via Thomas plus a rank-one correction.
// sub[i] multiplies x[i-1] in row i (sub[0] is the row-0, col-n-1 corner);
// sup[i] multiplies x[i+1] in row i (sup[n-1] is the row-n-1, col-0 corner).
std::vector<double> solve_cyclic_tridiag(std::vector<double> sub, std::vector<double> diag,
                                         std::vector<double> sup, const std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    const double corner_top = sub[0];
    const double corner_bottom = sup[n - 1];
    const double gamma = -diag[0];
    diag[0] -= gamma;
    diag[n - 1] -= corner_top * corner_bottom / gamma;

    const auto thomas = [&](const std::vector<double>& d_in, std::vector<double>& x) {
        std::vector<double> dp(n), xp(n);
        dp[0] = diag[0];
        xp[0] = d_in[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double w = sub[i] / dp[i - 1];
            dp[i] = diag[i] - w * sup[i - 1];
            xp[i] = d_in[i] - w * xp[i - 1];
        }
        x.resize(n);
        x[n - 1] = xp[n - 1] / dp[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) x[i] = (xp[i] - sup[i] * x[i + 1]) / dp[i];
    };

    std::vector<double> y, z;
    thomas(rhs, y);
    std::vector<double> uvec(n, 0.0);
    uvec[0] = gamma;
    uvec[n - 1] = corner_bottom;
    thomas(uvec, z);

    const double vy = y[0] + corner_top / gamma * y[n - 1];
    const double vz = z[0] + corner_top / gamma * z[n - 1];
    const double factor = vy / (1.0 + vz);
    for (std::size_t i = 0; i < n; ++i) y[i] -= factor * z[i];
    return y;
}

// Returns the L1 imbalance of the face currents together with the summed
// magnitude of their terms: the imbalance of the exact steady state still
// floats at roughly eps times that scale, which bounds what any iteration
// can achieve.
std::pair<double, double> flux_imbalance(const FaceCoeffs& f, const std::vector<double>& rho) {
    const std::size_t H = rho.size();
    double r = 0.0, scale = 0.0;
    double prev = f.ja[H - 1] * rho[H - 1] - f.jb[H - 1] * rho[0];
    for (std::size_t i = 0; i < H; ++i) {
        const double pa = f.ja[i] * rho[i];
        const double pb = f.jb[i] * rho[(i + 1) % H];
        const double cur = pa - pb;
        r += std::fabs(prev - cur);
        scale += std::fabs(pa) + std::fabs(pb);
        prev = cur;
    }
    return {r, scale};
}

FpOracleResult assemble_oracle(const Covariance&, std::vector<double> half, std::size_t M) {
    const std::size_t H = M / 2;
    FpOracleResult out;
    out.u.resize(M + 1);
    out.p.resize(M + 1);
    const double h = 2.0 * kPi / static_cast<double>(M);
    for (std::size_t i = 0; i <= M; ++i) out.u[i] = h * static_cast<double>(i);
    for (std::size_t i = 0; i < H; ++i) {
        out.p[i] = half[i];
        out.p[H + i] = half[i];
    }
    out.p[M] = half[0];
    double z = 0.0;
    for (std::size_t i = 0; i < M; ++i) z += 0.5 * (out.p[i] + out.p[i + 1]) * h;
    if (!(z > 0.0) || !std::isfinite(z))
        throw std::runtime_error("fp oracle: non-normalizable state");
    for (auto& v : out.p) v /= z;
    return out;
}

}  // namespace

FpOracleResult fp_steady_march(const Covariance& sigma, std::size_t M) {
    require_oracle_args(sigma, M, "fp_steady_march");
    const std::size_t H = M / 2;
    const double h = kPi / static_cast<double>(H);
    const FaceCoeffs f = face_coeffs(sigma, H, h);

    std::vector<double> rho(H, 1.0 / kPi);
    // Backward Euler in pseudo-time: unconditionally stable, so the step can
    // grow geometrically once the stiff transients are gone. Mass is
    // conserved exactly by the periodic flux form. The stopping floor tracks
    // the rounding noise of the imbalance functional itself.
    double dt = h;
    constexpr double kResidualTol = 1e-12;
    constexpr std::size_t kMaxIters = 2000;
    std::size_t iter = 0;
    auto [res, scale] = flux_imbalance(f, rho);
    std::vector<double> sub(H), diag(H), sup(H);
    while (res > std::max(kResidualTol, 4.0 * std::numeric_limits<double>::epsilon() * scale)) {
        if (++iter > kMaxIters) {
            std::ostringstream msg;
            msg << "fp_steady_march: no convergence after " << kMaxIters
                << " iterations (residual " << res << ")";
            throw std::runtime_error(msg.str());
        }
        for (std::size_t i = 0; i < H; ++i) {
            const std::size_t im = (i + H - 1) % H;
            sub[i] = -dt * f.ja[im] / h;
            diag[i] = 1.0 + dt * (f.jb[im] + f.ja[i]) / h;
            sup[i] = -dt * f.jb[i] / h;
        }
        rho = solve_cyclic_tridiag(sub, diag, sup, rho);
        std::tie(res, scale) = flux_imbalance(f, rho);
        dt = std::min(dt * 2.0, 64.0);
    }

    FpOracleResult out = assemble_oracle(sigma, rho, M);
    out.iterations = iter;
    out.residual = res;
    return out;
}

std::vector<double> fp_steady_direct(const Covariance& sigma, std::size_t M) {
    require_oracle_args(sigma, M, "fp_steady_direct");
    const std::size_t H = M / 2;
    const double h = kPi / static_cast<double>(H);
    const FaceCoeffs f = face_coeffs(sigma, H, h);

    // rho_i = s_i rho_0 + t_i J. Chase in the direction whose divisor stays
    // away from zero: a degenerate diffusion angle kills one of ja, jb.
    const double min_ja = *std::min_element(f.ja.begin(), f.ja.end());
    const double min_jb = *std::min_element(f.jb.begin(), f.jb.end());
    std::vector<double> s(H + 1), t(H + 1);
    if (min_jb >= min_ja) {
        s[0] = 1.0;
        t[0] = 0.0;
        for (std::size_t i = 0; i < H; ++i) {
            s[i + 1] = f.ja[i] * s[i] / f.jb[i];
            t[i + 1] = (f.ja[i] * t[i] - 1.0) / f.jb[i];
        }
    } else {
        s[H] = 1.0;
        t[H] = 0.0;
        for (std::size_t i = H; i-- > 0;) {
            s[i] = f.jb[i] * s[i + 1] / f.ja[i];
            t[i] = (f.jb[i] * t[i + 1] + 1.0) / f.ja[i];
        }
    }
    for (std::size_t i = 0; i <= H; ++i) {
        if (!std::isfinite(s[i]) || !std::isfinite(t[i]))
            throw std::runtime_error("fp_steady_direct: chase overflow; use fp_steady_march");
    }

    // Periodic closure plus normalization over the full circle (the half
    // table carries mass 1/2) pins (rho_0, J).
    double S = 0.0, T = 0.0;
    for (std::size_t i = 0; i < H; ++i) {
        S += s[i];
        T += t[i];
    }
    const double closure_s = (min_jb >= min_ja ? s[H] : s[0]) - 1.0;
    const double closure_t = min_jb >= min_ja ? t[H] : t[0];
    const double det = closure_s * T - closure_t * S;
    if (det == 0.0 || !std::isfinite(det))
        throw std::runtime_error("fp_steady_direct: singular closure system");
    const double mass = 1.0 / (2.0 * h);
    const double rho0 = -closure_t * mass / det;
    const double J = closure_s * mass / det;

    std::vector<double> rho(H);
    double peak = 0.0;
    for (std::size_t i = 0; i < H; ++i) {
        rho[i] = s[i] * rho0 + t[i] * J;
        peak = std::max(peak, std::fabs(rho[i]));
    }
    for (auto& v : rho) {
        if (v < -1e-8 * peak)
            throw std::runtime_error("fp_steady_direct: negative density from chase");
        v = std::max(v, 0.0);
    }
    return assemble_oracle(sigma, rho, M).p;
}

double l1_grid_distance(const std::vector<double>& f, const std::vector<double>& g, double h) {
    if (f.size() != g.size() || f.empty())
        throw std::invalid_argument("l1_grid_distance: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
        const double lo = std::fabs(f[i] - g[i]);
        const double hi = std::fabs(f[i + 1] - g[i + 1]);
        acc += 0.5 * (lo + hi) * h;
    }
    return acc;
}

}  // namespace cle
