#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <vector>

namespace sgtree::stats {

double normal_cdf(double x);
double poisson_pmf(std::size_t k, double mean);

/// Two-sided Kolmogorov-Smirnov distance between the empirical CDF of the
/// sample and a continuous reference CDF.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

/// KS distance for an integer-valued sample against a continuous cdf, with the
/// half-unit continuity correction: sup_k |F_n(k) - cdf(k + 1/2)|.
double lattice_ks_distance(std::vector<double> counts, const std::function<double(double)>& cdf);

/// Total variation between the empirical law of integer observations and a
/// reference pmf on the nonnegative integers. Reference mass beyond the largest
/// observation is accounted for through 1 - sum of the evaluated terms.
double tv_to_pmf(std::span<const std::size_t> observations, const std::function<double(std::size_t)>& pmf);

double mean(std::span<const double> xs);
double stddev(std::span<const double> xs);
double correlation(std::span<const double> xs, std::span<const double> ys);
/// Linear-interpolated quantile, q in [0, 1].
double quantile(std::vector<double> xs, double q);

}  // namespace sgtree::stats
