#include "sgtree/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace sgtree {

std::vector<std::uint32_t> sample_composition(const ZTable& table, std::size_t N, std::size_t n, RandomSource& rng) {
  if (N > table.n_max() || n > table.n_max()) throw std::out_of_range("composition outside the Z-table");
  if (table.log_z(N, n).is_zero()) throw std::domain_error("no admissible composition: Z(N, n) = 0");
  const auto& ws = table.weights();
  std::vector<double> log_w(n + 1);
  for (std::size_t d = 0; d <= n; ++d) log_w[d] = ws.log_weight(d + 1).log();

  std::vector<std::uint32_t> parts;
  parts.reserve(N);
  std::size_t remaining = n;
  for (std::size_t parts_left = N; parts_left >= 1; --parts_left) {
    if (parts_left == 1) {
      parts.push_back(static_cast<std::uint32_t>(remaining));
      break;
    }
    // P(d) = w_{d+1} Z(parts_left-1, remaining-d) / Z(parts_left, remaining),
    // scanned upward; the expected scan length is E[d] + 1.
    const auto next_row = table.row(parts_left - 1);
    const double log_total = table.log_z(parts_left, remaining).log();
    const double u = rng.uniform();
    double cumulative = 0.0;
    std::size_t chosen = remaining + 1;
    std::size_t last_positive = 0;
    for (std::size_t d = 0; d <= remaining; ++d) {
      const double lt = log_w[d] + next_row[remaining - d];
      if (lt == kNegInf) continue;
      last_positive = d;
      cumulative += std::exp(lt - log_total);
      if (u < cumulative) {
        chosen = d;
        break;
      }
    }
    if (chosen > remaining) chosen = last_positive;  // rounding deficit in the tail
    parts.push_back(static_cast<std::uint32_t>(chosen));
    remaining -= chosen;
  }
  return parts;
}

PlaneTree rotate_to_tree(std::span<const std::uint32_t> d) {
  if (d.empty()) throw std::invalid_argument("cannot rotate an empty sequence");
  long long s = 0;
  long long best = 1;
  std::size_t argmin = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    s += static_cast<long long>(d[i]) - 1;
    if (s < best) {
      best = s;
      argmin = i;
    }
  }
  if (s != -1) throw std::invalid_argument("sequence must sum to its length minus one");
  std::vector<std::uint32_t> word(d.size());
  const std::size_t start = (argmin + 1) % d.size();
  for (std::size_t i = 0; i < d.size(); ++i) word[i] = d[(start + i) % d.size()];
  return PlaneTree::from_word(std::move(word));
}

PlaneTree sample_tree(const ZTable& table, std::size_t N, RandomSource& rng) {
  if (N < 1 || N > table.n_max()) throw std::out_of_range("tree size outside 1..N_max");
  if (z_n(table, N).is_zero()) throw std::domain_error("Z_N = 0: no tree of this size has positive weight");
  const auto d = sample_composition(table, N, N - 1, rng);
  return rotate_to_tree(d);
}

std::size_t sample_categorical(std::span<const double> weights, RandomSource& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw std::domain_error("categorical weights have no mass");
  const double u = rng.uniform() * total;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    cumulative += weights[i];
    if (u < cumulative) return i;
  }
  return last_positive;
}

std::uint32_t sample_sigma_s(const ZTable& table, std::size_t N, RandomSource& rng) {
  if (N < 2) throw std::invalid_argument("sigma(s) draw needs N >= 2");
  const auto pmf = root_degree_pmf(table, N);
  return static_cast<std::uint32_t>(sample_categorical(pmf.p, rng) + 1);
}

void sample_many(const ZTable& table, std::size_t N, std::size_t count, std::uint64_t seed, unsigned threads,
                 const std::function<void(std::size_t, const PlaneTree&)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  auto work = [&](unsigned worker) {
    for (std::size_t i = worker; i < count; i += threads) {
      RandomSource rng(seed, i);
      fn(i, sample_tree(table, N, rng));
    }
  };
  if (threads == 1) {
    work(0);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
}

}  // namespace sgtree
