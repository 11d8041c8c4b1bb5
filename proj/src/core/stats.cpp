#include "core/stats.hpp"

#include <algorithm>
#include <cmath>

namespace cle {

double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 16) {
        double acc = 0.0;
        for (double v : xs) acc += v;
        return acc;
    }
    std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

MeanSe mean_and_se(std::span<const double> xs) {
    std::size_t n = xs.size();
    double mean = pairwise_sum(xs) / static_cast<double>(n);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d = xs[i] - mean;
        sq[i] = d * d;
    }
    double var = n > 1 ? pairwise_sum(sq) / static_cast<double>(n - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double F = cdf(samples[i]);
        d = std::max(d, std::fabs(F - static_cast<double>(i + 1) / n));
        d = std::max(d, std::fabs(F - static_cast<double>(i) / n));
    }
    return d;
}

double ks_two_sample(std::vector<double> xs, std::vector<double> ys) {
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    double nx = static_cast<double>(xs.size());
    double ny = static_cast<double>(ys.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < xs.size() && j < ys.size()) {
        if (xs[i] <= ys[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / nx -
                                  static_cast<double>(j) / ny));
    }
    return d;
}

double kolmogorov_tail(double lambda) {
    if (lambda <= 0.0) return 1.0;
    double acc = 0.0;
    for (int k = 1; k <= 101; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        acc += (k % 2 == 1) ? term : -term;
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * acc, 0.0, 1.0);
}

double ks_two_sample_pvalue(double d, std::size_t n, std::size_t m) {
    double en = std::sqrt(static_cast<double>(n) * static_cast<double>(m) /
                          static_cast<double>(n + m));
    // Stephens' finite-sample adjustment to the asymptotic law.
    return kolmogorov_tail((en + 0.12 + 0.11 / en) * d);
}

double ks_one_sample_critical(double alpha, std::size_t n) {
    return std::sqrt(-std::log(alpha / 2.0) / (2.0 * static_cast<double>(n)));
}

}  // namespace cle
