#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "core/driving_path.hpp"

namespace cle {

enum class HullSide { left, right };

// One hull sample: preimage of epsilon * w under the discrete chain at
// capacity time t_added, where w is indexed into {0, 1, -1, i, -i}.
struct CloudPoint {
    double re = 0.0;
    double im = 0.0;
    double t_added = 0.0;
    std::uint8_t probe = 0;
};

struct HullPointCloud {
    std::vector<CloudPoint> points;  // sorted by (t_added, probe)
    HullSide side = HullSide::left;
    double epsilon = 0.0;
    std::size_t dropped = 0;  // probes lost to on-slit contact during inversion
    // Generating path metadata, echoed into output headers.
    Covariance sigma{0.0, 0.0, 0.0};
    double horizon = 0.0;
    std::uint64_t seed = 0;
    std::size_t n = 0;
};

extern const char* const kProbeLabels[5];  // "0", "1", "-1", "i", "-i"

// Pulls epsilon * w back through the inverse slit maps for every composition
// step k = 1..n and every probe w.  Probes touching a slit anywhere along
// their inversion chain are dropped and counted.  `threads` splits the work
// over contiguous k-ranges; each probe's arithmetic is identical regardless,
// so the result does not depend on the split.
HullPointCloud left_hull_cloud(const DrivingPath& path, double epsilon, int threads = 1);

// Left cloud of the dual path (reversed driver times i) rotated by i.
HullPointCloud right_hull_cloud(const DrivingPath& path, double epsilon, int threads = 1);

// CSV columns: re, im, t_added, probe; '#' header carries the resolved
// configuration.  Output is byte-identical for identical inputs.
void write_cloud_csv(const HullPointCloud& cloud, std::ostream& os);
void write_cloud_csv(const HullPointCloud& cloud, const std::string& file);

// Scatter coloured by t_added.
void write_cloud_svg(const HullPointCloud& cloud, const std::string& file);

}  // namespace cle
