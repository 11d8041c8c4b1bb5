#include "core/hull_cloud.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "core/io_util.hpp"
#include "core/slit_maps.hpp"

namespace cle {

const char* const kProbeLabels[5] = {"0", "1", "-1", "i", "-i"};

namespace {

// Working set for one backward sweep, struct-of-arrays so the pullback loop
// vectorizes.  flag[i] latches once probe i touches a slit.
struct Sweep {
    std::vector<double> re, im;
    std::vector<std::uint32_t> born_k;
    std::vector<std::uint8_t> probe;
    std::vector<std::uint8_t> flag;
    std::size_t dropped = 0;

    void reserve(std::size_t cap) {
        re.reserve(cap);
        im.reserve(cap);
        born_k.reserve(cap);
        probe.reserve(cap);
        flag.reserve(cap);
    }

    // Births the five probes for composition step k and applies that step's
    // inverse pair immediately.  Probes that land on a slit here (the center
    // probe always does, the axis probes do whenever epsilon is inside the
    // slit width) are counted and discarded instead of being dragged through
    // the rest of the sweep.
    void birth(std::uint32_t k, double epsilon, double x_k, double y_k, double fourt) {
        static constexpr double wr[5] = {0.0, 1.0, -1.0, 0.0, 0.0};
        static constexpr double wi[5] = {0.0, 0.0, 0.0, 1.0, -1.0};
        for (std::uint8_t p = 0; p < 5; ++p) {
            double vr = epsilon * wr[p], vi = epsilon * wi[p];
            bool hit1 = false, hit2 = false;
            branch_pullback(vr, vi, -fourt, on_slit_tolerance(vr, vi), vr, vi, hit1);
            vi += y_k;
            branch_pullback(vr, vi, -fourt, on_slit_tolerance(vr, vi), vr, vi, hit2);
            vr += x_k;
            if (hit1 | hit2) {
                ++dropped;
                continue;
            }
            re.push_back(vr);
            im.push_back(vi);
            born_k.push_back(k);
            probe.push_back(p);
            flag.push_back(0);
        }
    }
};

// Applies the inverse of composition step j (undo the imaginary slit, then
// the real slit) to every active probe.  Identical arithmetic to the scalar
// inverse_slit_* functions, minus the exceptions.
void pull_back_step(Sweep& s, double x_j, double y_j, double fourt) {
    const std::size_t m = s.re.size();
    double* __restrict pr = s.re.data();
    double* __restrict pi = s.im.data();
    std::uint8_t* __restrict pf = s.flag.data();
    for (std::size_t i = 0; i < m; ++i) {
        double vr = pr[i], vi = pi[i];
        bool hit1 = false, hit2 = false;
        branch_pullback(vr, vi, -fourt, on_slit_tolerance(vr, vi), vr, vi, hit1);
        vi += y_j;
        branch_pullback(vr, vi, -fourt, on_slit_tolerance(vr, vi), vr, vi, hit2);
        vr += x_j;
        pr[i] = vr;
        pi[i] = vi;
        pf[i] = static_cast<std::uint8_t>(pf[i] | hit1 | hit2);
    }
}

// Sweeps j = k_hi..1, activating probes for k in [k_lo, k_hi].
void sweep_range(const DrivingPath& path, double epsilon, std::uint32_t k_lo,
                 std::uint32_t k_hi, Sweep& s) {
    const double fourt = 2.0 * path.horizon / static_cast<double>(path.size());
    s.reserve(5 * static_cast<std::size_t>(k_hi - k_lo + 1));
    for (std::uint32_t j = k_hi; j >= k_lo; --j) {
        pull_back_step(s, path.x[j - 1], path.y[j - 1], fourt);
        s.birth(j, epsilon, path.x[j - 1], path.y[j - 1], fourt);
    }
    for (std::uint32_t j = k_lo - 1; j >= 1; --j)
        pull_back_step(s, path.x[j - 1], path.y[j - 1], fourt);
}

void harvest(const Sweep& s, double dt, std::vector<CloudPoint>& out, std::size_t& dropped) {
    dropped += s.dropped;
    for (std::size_t i = 0; i < s.re.size(); ++i) {
        if (s.flag[i] || !std::isfinite(s.re[i]) || !std::isfinite(s.im[i])) {
            ++dropped;
            continue;
        }
        out.push_back({s.re[i], s.im[i], static_cast<double>(s.born_k[i]) * dt, s.probe[i]});
    }
}

}  // namespace

HullPointCloud left_hull_cloud(const DrivingPath& path, double epsilon, int threads) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("left_hull_cloud: epsilon must be positive");
    const std::size_t n = path.size();
    const double dt = path.horizon / static_cast<double>(n);

    HullPointCloud cloud;
    cloud.side = HullSide::left;
    cloud.epsilon = epsilon;
    cloud.sigma = path.sigma;
    cloud.horizon = path.horizon;
    cloud.seed = path.seed;
    cloud.n = n;
    cloud.points.reserve(5 * n);

    const int nt = std::clamp<int>(threads, 1, static_cast<int>(n));
    if (nt == 1) {
        Sweep s;
        sweep_range(path, epsilon, 1, static_cast<std::uint32_t>(n), s);
        harvest(s, dt, cloud.points, cloud.dropped);
    } else {
        std::vector<Sweep> parts(nt);
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (int w = 0; w < nt; ++w) {
            const auto k_lo = static_cast<std::uint32_t>(1 + (n * w) / nt);
            const auto k_hi = static_cast<std::uint32_t>((n * (w + 1)) / nt);
            pool.emplace_back([&path, epsilon, k_lo, k_hi, &parts, w] {
                sweep_range(path, epsilon, k_lo, k_hi, parts[w]);
            });
        }
        for (auto& th : pool) th.join();
        for (const auto& s : parts) harvest(s, dt, cloud.points, cloud.dropped);
    }

    std::sort(cloud.points.begin(), cloud.points.end(), [](const CloudPoint& a, const CloudPoint& b) {
        return a.t_added != b.t_added ? a.t_added < b.t_added : a.probe < b.probe;
    });
    return cloud;
}

HullPointCloud right_hull_cloud(const DrivingPath& path, double epsilon, int threads) {
    HullPointCloud cloud = left_hull_cloud(transform_path(path, PathTransform::dual), epsilon, threads);
    for (auto& p : cloud.points) {
        const double re = p.re;
        p.re = -p.im;
        p.im = re;
    }
    cloud.side = HullSide::right;
    cloud.sigma = path.sigma;
    cloud.seed = path.seed;
    return cloud;
}

void write_cloud_csv(const HullPointCloud& cloud, std::ostream& os) {
    write_config_header(os, {{"side", cloud.side == HullSide::left ? "left" : "right"},
                             {"a", fmt_full(cloud.sigma.a)},
                             {"b", fmt_full(cloud.sigma.b)},
                             {"c", fmt_full(cloud.sigma.c)},
                             {"n", std::to_string(cloud.n)},
                             {"horizon", fmt_full(cloud.horizon)},
                             {"seed", std::to_string(cloud.seed)},
                             {"epsilon", fmt_full(cloud.epsilon)},
                             {"dropped", std::to_string(cloud.dropped)}});
    os << "re,im,t_added,probe\n";
    for (const auto& p : cloud.points) {
        os << fmt_full(p.re) << ',' << fmt_full(p.im) << ',' << fmt_full(p.t_added) << ','
           << kProbeLabels[p.probe] << '\n';
    }
    if (!os) throw std::runtime_error("write_cloud_csv: stream failure");
}

void write_cloud_csv(const HullPointCloud& cloud, const std::string& file) {
    std::ofstream os(file);
    if (!os) throw std::runtime_error("cannot open for writing: " + file);
    write_cloud_csv(cloud, os);
}

void write_cloud_svg(const HullPointCloud& cloud, const std::string& file) {
    std::vector<ScatterPoint> pts;
    pts.reserve(cloud.points.size());
    for (const auto& p : cloud.points) pts.push_back({p.re, p.im, p.t_added});
    write_svg_scatter(file, pts,
                      std::string(cloud.side == HullSide::left ? "left" : "right") +
                          " hull cloud, n = " + std::to_string(cloud.n));
}

}  // namespace cle
