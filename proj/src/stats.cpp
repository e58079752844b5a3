#include "sgtree/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sgtree::stats {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double poisson_pmf(std::size_t k, double mean) {
  if (mean <= 0.0) return k == 0 ? 1.0 : 0.0;
  const double dk = static_cast<double>(k);
  return std::exp(dk * std::log(mean) - mean - std::lgamma(dk + 1.0));
}

double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("KS distance of an empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < sample.size()) {
    std::size_t j = i;
    while (j < sample.size() && sample[j] == sample[i]) ++j;
    const double f = cdf(sample[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(j) / n - f)});
    i = j;
  }
  return d;
}

double lattice_ks_distance(std::vector<double> counts, const std::function<double(double)>& cdf) {
  if (counts.empty()) throw std::invalid_argument("KS distance of an empty sample");
  std::sort(counts.begin(), counts.end());
  const double n = static_cast<double>(counts.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < counts.size()) {
    std::size_t j = i;
    while (j < counts.size() && counts[j] == counts[i]) ++j;
    d = std::max(d, std::abs(static_cast<double>(j) / n - cdf(counts[i] + 0.5)));
    i = j;
  }
  return d;
}

double tv_to_pmf(std::span<const std::size_t> observations, const std::function<double(std::size_t)>& pmf) {
  if (observations.empty()) throw std::invalid_argument("TV distance of an empty sample");
  std::map<std::size_t, double> freq;
  for (auto x : observations) freq[x] += 1.0;
  const std::size_t top = freq.rbegin()->first;
  const double n = static_cast<double>(observations.size());
  double sum = 0.0;
  double covered = 0.0;
  for (std::size_t k = 0; k <= top; ++k) {
    const double q = pmf(k);
    covered += q;
    const auto it = freq.find(k);
    sum += std::abs((it == freq.end() ? 0.0 : it->second / n) - q);
  }
  sum += std::max(0.0, 1.0 - covered);
  return 0.5 * sum;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

double correlation(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("correlation needs paired samples");
  const double mx = mean(xs);
  const double my = mean(ys);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

}  // namespace sgtree::stats
