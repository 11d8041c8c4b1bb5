#include "core/io_util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace cle {

std::string fmt_full(double v) {
    char buf[40];
    // 17 significant digits always round-trip; try shorter forms first so that
    // exact values like 0.5 stay readable.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_config_header(std::ostream& os,
                         const std::vector<std::pair<std::string, std::string>>& kv) {
    for (const auto& [key, value] : kv) os << "# " << key << " = " << value << "\n";
}

namespace {

// Perceptually ordered dark-blue -> teal -> yellow ramp, linear segments.
void colormap(double t, int& r, int& g, int& b) {
    t = std::clamp(t, 0.0, 1.0);
    static constexpr double stops[5][3] = {
        {0.267, 0.005, 0.329},
        {0.229, 0.322, 0.546},
        {0.128, 0.567, 0.551},
        {0.369, 0.789, 0.383},
        {0.993, 0.906, 0.144},
    };
    const double x = t * 4.0;
    const int i = std::min(3, static_cast<int>(x));
    const double f = x - i;
    r = static_cast<int>(std::lround(255.0 * (stops[i][0] + f * (stops[i + 1][0] - stops[i][0]))));
    g = static_cast<int>(std::lround(255.0 * (stops[i][1] + f * (stops[i + 1][1] - stops[i][1]))));
    b = static_cast<int>(std::lround(255.0 * (stops[i][2] + f * (stops[i + 1][2] - stops[i][2]))));
}

}  // namespace

void write_svg_scatter(const std::string& path,
                       const std::vector<ScatterPoint>& pts,
                       const std::string& title) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);

    double re_lo = 0.0, re_hi = 0.0, im_lo = 0.0, im_hi = 0.0, t_hi = 0.0;
    if (!pts.empty()) {
        re_lo = re_hi = pts[0].re;
        im_lo = im_hi = pts[0].im;
        for (const auto& p : pts) {
            re_lo = std::min(re_lo, p.re);
            re_hi = std::max(re_hi, p.re);
            im_lo = std::min(im_lo, p.im);
            im_hi = std::max(im_hi, p.im);
            t_hi = std::max(t_hi, p.t);
        }
    }
    const double span = std::max({re_hi - re_lo, im_hi - im_lo, 1e-12});
    const double pad = 0.05 * span;
    re_lo -= pad;
    re_hi += pad;
    im_lo -= pad;
    im_hi += pad;

    constexpr double W = 900.0;
    const double scale = W / (re_hi - re_lo);
    const double H = (im_hi - im_lo) * scale;
    const double radius = std::clamp(2.5 * std::sqrt(2e4 / std::max<size_t>(pts.size(), 1)), 0.6, 3.0);

    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H + 30
       << "\" viewBox=\"0 0 " << W << " " << H + 30 << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"8\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\">" << title
       << "</text>\n<g transform=\"translate(0,30)\">\n";
    for (const auto& p : pts) {
        const double cx = (p.re - re_lo) * scale;
        const double cy = (im_hi - p.im) * scale;  // flip so Im grows upward
        int r, g, b;
        colormap(t_hi > 0.0 ? p.t / t_hi : 0.0, r, g, b);
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.2f\" fill=\"rgb(%d,%d,%d)\" fill-opacity=\"0.8\"/>\n",
                      cx, cy, radius, r, g, b);
        os << buf;
    }
    os << "</g>\n</svg>\n";
    if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace cle
