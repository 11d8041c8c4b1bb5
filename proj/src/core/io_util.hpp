#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace cle {

// Shortest decimal string that round-trips a double (printf %.17g trimmed).
std::string fmt_full(double v);

// Writes "# key = value" lines.  Keys match the CLI option names so a saved
// header can be replayed as a config file.
void write_config_header(std::ostream& os,
                         const std::vector<std::pair<std::string, std::string>>& kv);

// Opens `path` for writing, throws std::runtime_error on failure.
// (Callers stream into the returned handle; destructor flushes.)
struct ScatterPoint {
    double re = 0.0;
    double im = 0.0;
    double t = 0.0;  // colour key, mapped over [0, t_max]
};

// Scatter plot in complex-plane orientation (im axis up), points coloured by
// t through a dark-blue -> yellow ramp.  Axes are padded 5% around the data.
void write_svg_scatter(const std::string& path,
                       const std::vector<ScatterPoint>& pts,
                       const std::string& title);

}  // namespace cle
