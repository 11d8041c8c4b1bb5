#include "cle/cle.h"

#include <cstring>
#include <exception>
#include <new>
#include <stdexcept>
#include <string>

#include "core/density.hpp"
#include "core/diagnostics.hpp"
#include "core/driving_path.hpp"
#include "core/hull_cloud.hpp"
#include "core/phases.hpp"
#include "core/point_tracker.hpp"
#include "core/polar.hpp"
#include "core/rng.hpp"
#include "core/slit_maps.hpp"

#define CLE_EXPORT extern "C" __attribute__((visibility("default")))

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) noexcept {
    try {
        g_last_error = what;
    } catch (...) {
        // Leave the previous message in place rather than risk termination.
    }
}

// Returns `sentinel` after translating the active exception into an error
// code plus a thread-local message.
template <typename T>
T translate_exception(T sentinel, int* code_out = nullptr) noexcept {
    int code = CLE_ERROR_UNKNOWN;
    try {
        throw;
    } catch (const cle::OnSlitError& e) {
        code = CLE_ERROR_ON_SLIT;
        set_error(e.what());
    } catch (const std::invalid_argument& e) {
        code = CLE_ERROR_INVALID_ARGUMENT;
        set_error(e.what());
    } catch (const std::bad_alloc&) {
        code = CLE_ERROR_RUNTIME;
        set_error("out of memory");
    } catch (const std::exception& e) {
        code = CLE_ERROR_RUNTIME;
        set_error(e.what());
    } catch (...) {
        set_error("unknown error");
    }
    if (code_out) *code_out = code;
    return sentinel;
}

template <typename Fn>
auto guarded_ptr(Fn&& fn) noexcept -> decltype(fn()) {
    try {
        return fn();
    } catch (...) {
        return translate_exception<decltype(fn())>(nullptr);
    }
}

template <typename Fn>
int guarded_status(Fn&& fn) noexcept {
    try {
        fn();
        return CLE_OK;
    } catch (...) {
        int code = CLE_ERROR_UNKNOWN;
        translate_exception(0, &code);
        return code;
    }
}

int require_handle(const void* h, const char* who) {
    if (h) return CLE_OK;
    set_error((std::string(who) + ": null handle").c_str());
    return CLE_ERROR_INVALID_ARGUMENT;
}

}  // namespace

struct cle_path {
    cle::DrivingPath p;
};
struct cle_cloud {
    cle::HullPointCloud c;
};
struct cle_trajectory {
    cle::PointTrajectory traj;
    cle::SigmaTimeMap map;
};
struct cle_density {
    cle::StationaryDensity d;
    std::string method;
};
struct cle_scan {
    cle::PhaseScan s;
};
struct cle_polar {
    cle::PolarTrajectory t;
};

CLE_EXPORT const char* cle_version(void) { return "0.1.0"; }

CLE_EXPORT const char* cle_last_error(void) { return g_last_error.c_str(); }

/* --- driving paths ------------------------------------------------------ */

CLE_EXPORT cle_path* cle_path_sample(double a, double b, double c, size_t n, double horizon,
                                     uint64_t seed) {
    return guarded_ptr([&]() -> cle_path* {
        auto sigma = cle::make_covariance(a, b, c);
        return new cle_path{cle::sample_driving_path(sigma, n, horizon, seed)};
    });
}

CLE_EXPORT cle_path* cle_path_from_increments(double a, double b, double c, double horizon,
                                              const double* x, const double* y, size_t n,
                                              uint64_t seed) {
    return guarded_ptr([&]() -> cle_path* {
        if (n > 0 && (!x || !y))
            throw std::invalid_argument("cle_path_from_increments: null increment buffer");
        auto sigma = cle::make_covariance(a, b, c);
        std::vector<double> xs(x, x + n), ys(y, y + n);
        return new cle_path{cle::make_path(sigma, horizon, std::move(xs), std::move(ys), seed)};
    });
}

CLE_EXPORT cle_path* cle_path_transform(const cle_path* p, int op, double r) {
    return guarded_ptr([&]() -> cle_path* {
        if (!p) throw std::invalid_argument("cle_path_transform: null handle");
        if (op < 0 || op > 3)
            throw std::invalid_argument("cle_path_transform: op must be 0..3");
        return new cle_path{
            cle::transform_path(p->p, static_cast<cle::PathTransform>(op), r)};
    });
}

CLE_EXPORT size_t cle_path_size(const cle_path* p) { return p ? p->p.size() : 0; }

CLE_EXPORT int cle_path_params(const cle_path* p, double* a, double* b, double* c,
                               double* horizon, uint64_t* seed) {
    if (int rc = require_handle(p, "cle_path_params"); rc != CLE_OK) return rc;
    if (a) *a = p->p.sigma.a;
    if (b) *b = p->p.sigma.b;
    if (c) *c = p->p.sigma.c;
    if (horizon) *horizon = p->p.horizon;
    if (seed) *seed = p->p.seed;
    return CLE_OK;
}

CLE_EXPORT int cle_path_increments(const cle_path* p, double* x, double* y) {
    if (int rc = require_handle(p, "cle_path_increments"); rc != CLE_OK) return rc;
    if (x) std::memcpy(x, p->p.x.data(), p->p.x.size() * sizeof(double));
    if (y) std::memcpy(y, p->p.y.data(), p->p.y.size() * sizeof(double));
    return CLE_OK;
}

CLE_EXPORT int cle_path_write_csv(const cle_path* p, const char* file) {
    return guarded_status([&] {
        if (!p || !file) throw std::invalid_argument("cle_path_write_csv: null argument");
        cle::write_path_csv(p->p, std::string(file));
    });
}

CLE_EXPORT int cle_path_write_binary(const cle_path* p, const char* file) {
    return guarded_status([&] {
        if (!p || !file) throw std::invalid_argument("cle_path_write_binary: null argument");
        cle::write_path_binary(p->p, std::string(file));
    });
}

CLE_EXPORT cle_path* cle_path_read_binary(const char* file) {
    return guarded_ptr([&]() -> cle_path* {
        if (!file) throw std::invalid_argument("cle_path_read_binary: null file");
        return new cle_path{cle::read_path_binary(std::string(file))};
    });
}

CLE_EXPORT void cle_path_free(cle_path* p) { delete p; }

/* --- forward map and point tracking ------------------------------------- */

CLE_EXPORT int cle_forward_map(const cle_path* p, double z_re, double z_im, double* out_re,
                               double* out_im, size_t* absorbed_step) {
    return guarded_status([&] {
        if (!p || !out_re || !out_im || !absorbed_step)
            throw std::invalid_argument("cle_forward_map: null argument");
        const cle::ForwardTrajectory ft = cle::compose_forward(p->p, cle::cplx(z_re, z_im));
        const cle::cplx last = ft.values.back();
        *out_re = last.real();
        *out_im = last.imag();
        *absorbed_step = ft.absorbed_at.value_or(0);
    });
}

CLE_EXPORT cle_trajectory* cle_evolve_point(const cle_path* p, double z_re, double z_im,
                                            double delta_swallow) {
    return guarded_ptr([&]() -> cle_trajectory* {
        if (!p) throw std::invalid_argument("cle_evolve_point: null handle");
        auto* t = new cle_trajectory;
        t->traj = cle::evolve_point(p->p, cle::cplx(z_re, z_im), delta_swallow);
        t->map = cle::sigma_time(t->traj);
        return t;
    });
}

CLE_EXPORT size_t cle_trajectory_size(const cle_trajectory* t) {
    return t ? t->traj.samples.size() : 0;
}

CLE_EXPORT int cle_trajectory_sample(const cle_trajectory* t, size_t i, double* time,
                                     double* f_re, double* f_im) {
    if (int rc = require_handle(t, "cle_trajectory_sample"); rc != CLE_OK) return rc;
    if (i >= t->traj.samples.size()) {
        set_error("cle_trajectory_sample: index out of range");
        return CLE_ERROR_INVALID_ARGUMENT;
    }
    const auto& s = t->traj.samples[i];
    if (time) *time = s.t;
    if (f_re) *f_re = s.f.real();
    if (f_im) *f_im = s.f.imag();
    return CLE_OK;
}

CLE_EXPORT int cle_trajectory_window(const cle_trajectory* t, int* has_window, double* t_above,
                                     double* t_below) {
    if (int rc = require_handle(t, "cle_trajectory_window"); rc != CLE_OK) return rc;
    const bool has = t->traj.t_z.has_value();
    if (has_window) *has_window = has ? 1 : 0;
    if (has) {
        if (t_above) *t_above = t->traj.t_z->t_above;
        if (t_below) *t_below = t->traj.t_z->t_below;
    }
    return CLE_OK;
}

CLE_EXPORT int cle_trajectory_sigma_time(const cle_trajectory* t, double time,
                                         double* sigma_t) {
    return guarded_status([&] {
        if (!t || !sigma_t)
            throw std::invalid_argument("cle_trajectory_sigma_time: null argument");
        *sigma_t = t->map.sigma_of_t(time);
    });
}

CLE_EXPORT void cle_trajectory_free(cle_trajectory* t) { delete t; }

/* --- hull point clouds --------------------------------------------------- */

CLE_EXPORT cle_cloud* cle_cloud_left(const cle_path* p, double epsilon, int threads) {
    return guarded_ptr([&]() -> cle_cloud* {
        if (!p) throw std::invalid_argument("cle_cloud_left: null handle");
        return new cle_cloud{cle::left_hull_cloud(p->p, epsilon, threads)};
    });
}

CLE_EXPORT cle_cloud* cle_cloud_right(const cle_path* p, double epsilon, int threads) {
    return guarded_ptr([&]() -> cle_cloud* {
        if (!p) throw std::invalid_argument("cle_cloud_right: null handle");
        return new cle_cloud{cle::right_hull_cloud(p->p, epsilon, threads)};
    });
}

CLE_EXPORT size_t cle_cloud_size(const cle_cloud* c) { return c ? c->c.points.size() : 0; }

CLE_EXPORT size_t cle_cloud_dropped(const cle_cloud* c) { return c ? c->c.dropped : 0; }

CLE_EXPORT int cle_cloud_point(const cle_cloud* c, size_t i, double* re, double* im,
                               double* t_added, int* probe) {
    if (int rc = require_handle(c, "cle_cloud_point"); rc != CLE_OK) return rc;
    if (i >= c->c.points.size()) {
        set_error("cle_cloud_point: index out of range");
        return CLE_ERROR_INVALID_ARGUMENT;
    }
    const auto& pt = c->c.points[i];
    if (re) *re = pt.re;
    if (im) *im = pt.im;
    if (t_added) *t_added = pt.t_added;
    if (probe) *probe = pt.probe;
    return CLE_OK;
}

CLE_EXPORT int cle_cloud_write_csv(const cle_cloud* c, const char* file) {
    return guarded_status([&] {
        if (!c || !file) throw std::invalid_argument("cle_cloud_write_csv: null argument");
        cle::write_cloud_csv(c->c, std::string(file));
    });
}

CLE_EXPORT int cle_cloud_write_svg(const cle_cloud* c, const char* file) {
    return guarded_status([&] {
        if (!c || !file) throw std::invalid_argument("cle_cloud_write_svg: null argument");
        cle::write_cloud_svg(c->c, std::string(file));
    });
}

CLE_EXPORT void cle_cloud_free(cle_cloud* c) { delete c; }

/* --- stationary angular density ------------------------------------------ */

CLE_EXPORT cle_density* cle_density_build(double a, double b, double c, size_t grid) {
    return guarded_ptr([&]() -> cle_density* {
        auto* d = new cle_density;
        d->d = cle::stationary_density(cle::Covariance{a, b, c}, grid);
        switch (d->d.method) {
            case cle::DensityMethod::c0_closed_form: d->method = "c0_closed_form"; break;
            case cle::DensityMethod::p0_p1: d->method = "p0_p1"; break;
            case cle::DensityMethod::degenerate: d->method = "degenerate"; break;
            case cle::DensityMethod::reflected: d->method = "reflected"; break;
        }
        return d;
    });
}

CLE_EXPORT size_t cle_density_grid(const cle_density* d) { return d ? d->d.grid_size() : 0; }

CLE_EXPORT int cle_density_values(const cle_density* d, double* u, double* p) {
    if (int rc = require_handle(d, "cle_density_values"); rc != CLE_OK) return rc;
    if (u) std::memcpy(u, d->d.u.data(), d->d.u.size() * sizeof(double));
    if (p) std::memcpy(p, d->d.p.data(), d->d.p.size() * sizeof(double));
    return CLE_OK;
}

CLE_EXPORT double cle_density_value(const cle_density* d, double angle) {
    return d ? d->d.value(angle) : 0.0;
}

CLE_EXPORT double cle_density_cdf(const cle_density* d, double angle) {
    return d ? d->d.cdf_at(angle) : 0.0;
}

CLE_EXPORT int cle_density_r_star(const cle_density* d, int* present, double* value) {
    if (int rc = require_handle(d, "cle_density_r_star"); rc != CLE_OK) return rc;
    const bool has = d->d.r_star.has_value();
    if (present) *present = has ? 1 : 0;
    if (has && value) *value = *d->d.r_star;
    return CLE_OK;
}

CLE_EXPORT const char* cle_density_method(const cle_density* d) {
    return d ? d->method.c_str() : "";
}

CLE_EXPORT int cle_density_write_csv(const cle_density* d, const char* file) {
    return guarded_status([&] {
        if (!d || !file) throw std::invalid_argument("cle_density_write_csv: null argument");
        cle::write_density_csv(d->d, std::string(file));
    });
}

CLE_EXPORT void cle_density_free(cle_density* d) { delete d; }

/* --- phase integrals and classification ---------------------------------- */

CLE_EXPORT int cle_classify(double a, double b, double c, size_t grid,
                            cle_phase_report* out) {
    return guarded_status([&] {
        if (!out) throw std::invalid_argument("cle_classify: null output");
        const cle::PhaseReport rep = cle::classify(cle::Covariance{a, b, c}, grid);
        out->one = rep.integrals.one;
        out->two = rep.integrals.two;
        out->err_one = rep.integrals.err_one;
        out->err_two = rep.integrals.err_two;
        out->zero_tol = rep.zero_tol;
        out->phase = static_cast<int>(rep.phase);
    });
}

CLE_EXPORT const char* cle_phase_name(int phase) {
    if (phase < 0 || phase > 4) return "unknown";
    return cle::phase_name(static_cast<cle::Phase>(phase));
}

CLE_EXPORT cle_scan* cle_phase_scan(double a_min, double a_max, size_t na, double b_min,
                                    double b_max, size_t nb, double c, size_t grid) {
    return guarded_ptr([&]() -> cle_scan* {
        if (na < 2 || nb < 2)
            throw std::invalid_argument("cle_phase_scan: need at least 2 points per axis");
        if (!(a_max > a_min) || !(b_max > b_min))
            throw std::invalid_argument("cle_phase_scan: empty range");
        std::vector<double> av(na), bv(nb);
        for (size_t i = 0; i < na; ++i)
            av[i] = a_min + (a_max - a_min) * static_cast<double>(i) /
                                static_cast<double>(na - 1);
        for (size_t i = 0; i < nb; ++i)
            bv[i] = b_min + (b_max - b_min) * static_cast<double>(i) /
                                static_cast<double>(nb - 1);
        return new cle_scan{cle::phase_scan(av, bv, c, grid)};
    });
}

CLE_EXPORT int cle_scan_write_grid_csv(const cle_scan* s, const char* file) {
    return guarded_status([&] {
        if (!s || !file) throw std::invalid_argument("cle_scan_write_grid_csv: null argument");
        cle::write_scan_grid_csv(s->s, std::string(file));
    });
}

CLE_EXPORT int cle_scan_write_boundary_csv(const cle_scan* s, const char* file) {
    return guarded_status([&] {
        if (!s || !file)
            throw std::invalid_argument("cle_scan_write_boundary_csv: null argument");
        cle::write_scan_boundary_csv(s->s, std::string(file));
    });
}

CLE_EXPORT void cle_scan_free(cle_scan* s) { delete s; }

/* --- polar system sampling ------------------------------------------------ */

CLE_EXPORT cle_polar* cle_polar_evolve(double a, double b, double c, double theta0,
                                       double t_end, double h, uint64_t seed) {
    return guarded_ptr([&]() -> cle_polar* {
        auto sigma = cle::make_covariance(a, b, c);
        cle::RandomStream rng(seed, 0);
        return new cle_polar{cle::polar_evolve(sigma, theta0, t_end, h, rng)};
    });
}

CLE_EXPORT size_t cle_polar_size(const cle_polar* p) {
    return p ? p->t.sigma_t.size() : 0;
}

CLE_EXPORT int cle_polar_sample(const cle_polar* p, size_t i, double* sigma_t, double* theta,
                                double* logmod, double* logderiv) {
    if (int rc = require_handle(p, "cle_polar_sample"); rc != CLE_OK) return rc;
    if (i >= p->t.sigma_t.size()) {
        set_error("cle_polar_sample: index out of range");
        return CLE_ERROR_INVALID_ARGUMENT;
    }
    if (sigma_t) *sigma_t = p->t.sigma_t[i];
    if (theta) *theta = p->t.theta[i];
    if (logmod) *logmod = p->t.logmod[i];
    if (logderiv) *logderiv = p->t.logderiv[i];
    return CLE_OK;
}

CLE_EXPORT int cle_polar_write_csv(const cle_polar* p, const char* file) {
    return guarded_status([&] {
        if (!p || !file) throw std::invalid_argument("cle_polar_write_csv: null argument");
        cle::write_polar_csv(p->t, std::string(file));
    });
}

CLE_EXPORT void cle_polar_free(cle_polar* p) { delete p; }

/* --- Monte-Carlo verification --------------------------------------------- */

namespace {

void fill_drift(const cle::DriftReport& rep, cle_drift_report* out) {
    out->mean = rep.mean;
    out->se = rep.se;
    out->reference = rep.reference;
    out->pass = rep.pass ? 1 : 0;
}

}  // namespace

CLE_EXPORT int cle_verify_drift_logmod(double a, double b, double c, size_t paths,
                                       double t_end, double h, uint64_t seed,
                                       cle_drift_report* out) {
    return guarded_status([&] {
        if (!out) throw std::invalid_argument("cle_verify_drift_logmod: null output");
        fill_drift(cle::drift_logmod(cle::Covariance{a, b, c}, paths, t_end, h, seed), out);
    });
}

CLE_EXPORT int cle_verify_drift_logderiv(double a, double b, double c, size_t paths,
                                         double t_end, double h, uint64_t seed,
                                         cle_drift_report* out) {
    return guarded_status([&] {
        if (!out) throw std::invalid_argument("cle_verify_drift_logderiv: null output");
        fill_drift(cle::drift_logderiv(cle::Covariance{a, b, c}, paths, t_end, h, seed), out);
    });
}

CLE_EXPORT int cle_verify_stationarity(double a, double b, double c, size_t paths,
                                       const double* checkpoints, size_t n_checkpoints,
                                       double h, uint64_t seed, double* ks, double* critical,
                                       double* slack, int* pass) {
    return guarded_status([&] {
        if (!checkpoints || n_checkpoints == 0)
            throw std::invalid_argument("cle_verify_stationarity: no checkpoints");
        std::vector<double> cps(checkpoints, checkpoints + n_checkpoints);
        const cle::StationarityReport rep =
            cle::stationarity_test(cle::Covariance{a, b, c}, paths, cps, h, seed);
        if (ks) {
            for (size_t i = 0; i < n_checkpoints; ++i) ks[i] = rep.ks[i];
        }
        if (critical) *critical = rep.critical;
        if (slack) *slack = rep.slack;
        if (pass) *pass = rep.pass ? 1 : 0;
    });
}

CLE_EXPORT int cle_verify_duality(double a, double b, double c, size_t n_hulls,
                                  size_t n_steps, double horizon, double epsilon,
                                  int statistic, uint64_t seed, int threads, int retry,
                                  cle_duality_report* out) {
    return guarded_status([&] {
        if (!out) throw std::invalid_argument("cle_verify_duality: null output");
        if (statistic < 0 || statistic > 2)
            throw std::invalid_argument("cle_verify_duality: statistic must be 0..2");
        const auto stat = static_cast<cle::DualityStatistic>(statistic);
        const cle::Covariance sigma{a, b, c};
        const cle::DualityReport rep =
            retry ? cle::duality_with_retry(sigma, n_hulls, n_steps, horizon, epsilon, stat,
                                            seed, threads)
                  : cle::duality_test(sigma, n_hulls, n_steps, horizon, epsilon, stat, seed,
                                      threads);
        out->ks = rep.ks;
        out->p_value = rep.p_value;
        out->threshold = rep.threshold;
        out->retried = rep.retried ? 1 : 0;
        out->pass = rep.pass ? 1 : 0;
    });
}

CLE_EXPORT int cle_disconnect_probe(const cle_cloud* c, double cell, double dilation,
                                    cle_disconnection_report* out) {
    return guarded_status([&] {
        if (!c || !out) throw std::invalid_argument("cle_disconnect_probe: null argument");
        const cle::DisconnectionReport rep = cle::disconnection_probe(c->c, cell, dilation);
        out->cell = rep.cell;
        out->dilation = rep.dilation;
        out->covered_cells = rep.covered_cells;
        out->enclosed_cells = rep.enclosed_cells;
        out->enclosed_area = rep.enclosed_area;
    });
}
