#include "core/driving_path.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <tuple>

#include "core/io_util.hpp"
#include "core/rng.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary path format assumes a little-endian host");

namespace cle {

namespace {

void fill_cumulative(DrivingPath& p) {
    const std::size_t n = p.x.size();
    p.cum_re.assign(n + 1, 0.0);
    p.cum_im.assign(n + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        p.cum_re[j + 1] = p.cum_re[j] + p.x[j];
        p.cum_im[j + 1] = p.cum_im[j] + p.y[j];
    }
}

void validate(const DrivingPath& p) {
    if (p.x.size() != p.y.size()) throw std::invalid_argument("driving path: x/y size mismatch");
    if (p.x.empty()) throw std::invalid_argument("driving path: need at least one increment");
    if (!(p.horizon > 0.0) || !std::isfinite(p.horizon))
        throw std::invalid_argument("driving path: horizon must be positive and finite");
    for (std::size_t j = 0; j < p.x.size(); ++j) {
        if (!std::isfinite(p.x[j]) || !std::isfinite(p.y[j]))
            throw std::invalid_argument("driving path: non-finite increment");
    }
}

}  // namespace

DrivingPath sample_driving_path(const Covariance& sigma, std::size_t n,
                                double horizon, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("sample_driving_path: n must be positive");
    if (!(horizon > 0.0)) throw std::invalid_argument("sample_driving_path: horizon must be positive");
    DrivingPath p;
    p.sigma = make_covariance(sigma.a, sigma.b, sigma.c);
    p.horizon = horizon;
    p.seed = seed;
    p.x.resize(n);
    p.y.resize(n);
    const double dt = horizon / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
        // One stream per increment keeps the path stable under n-preserving
        // reorderings of the consumers.
        RandomStream rs(seed, j);
        std::tie(p.x[j], p.y[j]) = sample_increment(p.sigma, dt, rs);
    }
    fill_cumulative(p);
    return p;
}

DrivingPath make_path(const Covariance& sigma, double horizon,
                      std::vector<double> x, std::vector<double> y,
                      std::uint64_t seed) {
    DrivingPath p;
    p.sigma = make_covariance(sigma.a, sigma.b, sigma.c);
    p.horizon = horizon;
    p.seed = seed;
    p.x = std::move(x);
    p.y = std::move(y);
    validate(p);
    fill_cumulative(p);
    return p;
}

DrivingPath transform_path(const DrivingPath& p, PathTransform op, double r) {
    DrivingPath q;
    q.horizon = p.horizon;
    q.seed = p.seed;
    const std::size_t n = p.x.size();
    q.x.resize(n);
    q.y.resize(n);
    switch (op) {
        case PathTransform::conjugate:
            q.sigma = Covariance{p.sigma.a, p.sigma.b, -p.sigma.c};
            for (std::size_t j = 0; j < n; ++j) {
                q.x[j] = p.x[j];
                q.y[j] = -p.y[j];
            }
            break;
        case PathTransform::negate:
            q.sigma = p.sigma;
            for (std::size_t j = 0; j < n; ++j) {
                q.x[j] = -p.x[j];
                q.y[j] = -p.y[j];
            }
            break;
        case PathTransform::scale:
            if (!(r > 0.0) || !std::isfinite(r))
                throw std::invalid_argument("transform_path: scale factor must be positive");
            q.sigma = p.sigma;
            q.horizon = p.horizon * r * r;
            for (std::size_t j = 0; j < n; ++j) {
                q.x[j] = r * p.x[j];
                q.y[j] = r * p.y[j];
            }
            break;
        case PathTransform::dual:
            // Reversed driver multiplied by i; rotation by i swaps the
            // marginal variances and flips the cross covariance.
            q.sigma = Covariance{p.sigma.b, p.sigma.a, -p.sigma.c};
            for (std::size_t j = 0; j < n; ++j) {
                q.x[j] = p.y[n - 1 - j];
                q.y[j] = -p.x[n - 1 - j];
            }
            break;
    }
    fill_cumulative(q);
    return q;
}

void write_path_csv(const DrivingPath& p, std::ostream& os) {
    write_config_header(os, {{"a", fmt_full(p.sigma.a)},
                             {"b", fmt_full(p.sigma.b)},
                             {"c", fmt_full(p.sigma.c)},
                             {"n", std::to_string(p.x.size())},
                             {"horizon", fmt_full(p.horizon)},
                             {"seed", std::to_string(p.seed)}});
    os << "j,x,y,cum_re,cum_im\n";
    for (std::size_t j = 0; j < p.x.size(); ++j) {
        os << (j + 1) << ',' << fmt_full(p.x[j]) << ',' << fmt_full(p.y[j]) << ','
           << fmt_full(p.cum_re[j + 1]) << ',' << fmt_full(p.cum_im[j + 1]) << '\n';
    }
    if (!os) throw std::runtime_error("write_path_csv: stream failure");
}

void write_path_csv(const DrivingPath& p, const std::string& file) {
    std::ofstream os(file);
    if (!os) throw std::runtime_error("cannot open for writing: " + file);
    write_path_csv(p, os);
}

namespace {

constexpr char kPathMagic[8] = {'C', 'L', 'E', 'P', 'A', 'T', 'H', '1'};

void put_f64(std::ostream& os, double v) { os.write(reinterpret_cast<const char*>(&v), 8); }
void put_u64(std::ostream& os, std::uint64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); }

double get_f64(std::istream& is) {
    double v;
    is.read(reinterpret_cast<char*>(&v), 8);
    return v;
}
std::uint64_t get_u64(std::istream& is) {
    std::uint64_t v;
    is.read(reinterpret_cast<char*>(&v), 8);
    return v;
}

}  // namespace

void write_path_binary(const DrivingPath& p, const std::string& file) {
    std::ofstream os(file, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + file);
    os.write(kPathMagic, 8);
    put_f64(os, p.sigma.a);
    put_f64(os, p.sigma.b);
    put_f64(os, p.sigma.c);
    put_f64(os, p.horizon);
    put_u64(os, p.seed);
    put_u64(os, p.x.size());
    for (std::size_t j = 0; j < p.x.size(); ++j) {
        put_f64(os, p.x[j]);
        put_f64(os, p.y[j]);
    }
    if (!os) throw std::runtime_error("write failed: " + file);
}

DrivingPath read_path_binary(const std::string& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + file);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kPathMagic, 8) != 0)
        throw std::runtime_error("not a driving-path file: " + file);
    DrivingPath p;
    const double a = get_f64(is);
    const double b = get_f64(is);
    const double c = get_f64(is);
    p.horizon = get_f64(is);
    p.seed = get_u64(is);
    const std::uint64_t n = get_u64(is);
    if (!is || n == 0 || n > (1ull << 32))
        throw std::runtime_error("corrupt driving-path header: " + file);
    p.sigma = make_covariance(a, b, c);
    p.x.resize(n);
    p.y.resize(n);
    for (std::uint64_t j = 0; j < n; ++j) {
        p.x[j] = get_f64(is);
        p.y[j] = get_f64(is);
    }
    if (!is) throw std::runtime_error("truncated driving-path file: " + file);
    validate(p);
    fill_cumulative(p);
    return p;
}

}  // namespace cle
