#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace cle {

// Pairwise (cascade) summation: the result is a fixed function of the value
// multiset, independent of accumulation order upstream.
double pairwise_sum(std::span<const double> xs);

struct MeanSe {
    double mean;
    double se;  // standard error of the mean
    std::size_t n;
};
MeanSe mean_and_se(std::span<const double> xs);

// One-sample Kolmogorov-Smirnov distance against a CDF. Sorts a copy.
double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf);

// Two-sample Kolmogorov-Smirnov distance. Sorts copies.
double ks_two_sample(std::vector<double> xs, std::vector<double> ys);

// Asymptotic Kolmogorov tail Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} e^{-2k^2 lambda^2}.
double kolmogorov_tail(double lambda);

// Approximate p-value for the two-sample statistic d with sample sizes n, m.
double ks_two_sample_pvalue(double d, std::size_t n, std::size_t m);

// One-sample critical value at level alpha: sqrt(-ln(alpha/2) / (2n)).
double ks_one_sample_critical(double alpha, std::size_t n);

}  // namespace cle
