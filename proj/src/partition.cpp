#include "sgtree/partition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <thread>

namespace sgtree {

namespace {

// Hard ceiling independent of the override flag: 2^31 doubles = 16 GiB.
constexpr std::size_t kHardEntryLimit = std::size_t{1} << 31;

double convolve_entry(std::span<const double> log_w, std::span<const double> prev, std::size_t n, bool truncate) {
  // log_w[d] = log w_{d+1}
  double hi = kNegInf;
  for (std::size_t d = 0; d <= n; ++d) hi = std::max(hi, log_w[d] + prev[n - d]);
  if (hi == kNegInf) return kNegInf;
  const double floor = truncate ? hi - kTruncationGap : kNegInf;
  double sum = 0.0;
  for (std::size_t d = 0; d <= n; ++d) {
    const double t = log_w[d] + prev[n - d];
    if (t >= floor) sum += std::exp(t - hi);
  }
  return hi + std::log(sum);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), 8)) throw std::runtime_error("truncated Z-table container");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

void require_exact(const ZTable& table, std::size_t N) {
  if (N > table.exact_upto()) throw std::out_of_range("N beyond the exact mirror of the Z-table");
}

}  // namespace

ZTable ZTable::build(const WeightSequence& ws, std::size_t n_max, const ZTableOptions& options) {
  if (n_max < 1) throw std::invalid_argument("Z-table bound must be >= 1");
  if (n_max > kDefaultNmaxLimit && !options.allow_large)
    throw ResourceLimitError("N_max = " + std::to_string(n_max) + " exceeds the default limit " +
                             std::to_string(kDefaultNmaxLimit) + "; pass the override to build it");
  const std::size_t width = n_max + 1;
  if (width > kHardEntryLimit / width) throw ResourceLimitError("Z-table does not fit in memory budget");

  ZTable table(ws, n_max);
  table.truncated_ = options.truncate;
  table.log_entries_.assign(width * width, kNegInf);
  table.log_entries_[0] = 0.0;  // Z(0,0) = 1

  std::vector<double> log_w(width);
  for (std::size_t d = 0; d < width; ++d) log_w[d] = ws.log_weight(d + 1).log();

  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, width));

  for (std::size_t N = 1; N <= n_max; ++N) {
    const std::span<const double> prev(table.log_entries_.data() + (N - 1) * width, width);
    double* cur = table.log_entries_.data() + N * width;
    auto fill = [&, cur](std::size_t first, std::size_t stride) {
      for (std::size_t n = first; n < width; n += stride) cur[n] = convolve_entry(log_w, prev, n, options.truncate);
    };
    if (threads <= 1 || N < 64) {
      fill(0, 1);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(fill, t, threads);
    }
  }

  if (options.exact_upto > 0) {
    if (!ws.has_exact()) throw std::invalid_argument("exact Z-table mirror requires rational weights");
    const std::size_t m = std::min(options.exact_upto, n_max);
    std::vector<Rational> w(m + 1);
    for (std::size_t d = 0; d <= m; ++d) w[d] = *ws.exact_weight(d + 1);
    table.exact_upto_ = m;
    table.exact_entries_.assign(m + 1, std::vector<Rational>(m + 1, Rational(0)));
    table.exact_entries_[0][0] = 1;
    for (std::size_t N = 1; N <= m; ++N) {
      for (std::size_t n = 0; n <= m; ++n) {
        Rational acc = 0;
        for (std::size_t d = 0; d <= n; ++d) acc += w[d] * table.exact_entries_[N - 1][n - d];
        table.exact_entries_[N][n] = acc;
      }
    }
  }
  return table;
}

LogNonNeg ZTable::log_z(std::size_t N, std::size_t n) const {
  if (N > n_max_ || n > n_max_) throw std::out_of_range("Z(N,n) outside the table");
  return LogNonNeg(log_entries_[N * (n_max_ + 1) + n]);
}

std::optional<Rational> ZTable::exact_z(std::size_t N, std::size_t n) const {
  if (exact_entries_.empty() || N > exact_upto_ || n > exact_upto_) return std::nullopt;
  return exact_entries_[N][n];
}

std::span<const double> ZTable::row(std::size_t N) const {
  if (N > n_max_) throw std::out_of_range("Z-table row outside the table");
  return {log_entries_.data() + N * (n_max_ + 1), n_max_ + 1};
}

void ZTable::save(std::ostream& out) const {
  out.write("SGTZ", 4);
  out.put(static_cast<char>(kZTableFormatVersion));
  const std::string descriptor = ws_.to_json().dump();
  const auto len = static_cast<std::uint32_t>(descriptor.size());
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>(len >> (8 * i)));
  out.write(descriptor.data(), static_cast<std::streamsize>(descriptor.size()));
  put_u64(out, n_max_);
  for (double v : log_entries_) put_u64(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw std::runtime_error("failed writing Z-table container");
}

ZTable ZTable::load(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "SGTZ", 4) != 0) throw std::runtime_error("not a Z-table container");
  const int version = in.get();
  if (version != kZTableFormatVersion) throw std::runtime_error("unsupported Z-table container version");
  std::uint32_t len = 0;
  for (int i = 0; i < 4; ++i) {
    const int c = in.get();
    if (c == EOF) throw std::runtime_error("truncated Z-table container");
    len |= static_cast<std::uint32_t>(c) << (8 * i);
  }
  std::string descriptor(len, '\0');
  if (!in.read(descriptor.data(), len)) throw std::runtime_error("truncated Z-table container");
  const auto n_max = get_u64(in);
  const std::size_t width = n_max + 1;
  if (width > kHardEntryLimit / width) throw ResourceLimitError("Z-table container too large");
  ZTable table(WeightSequence::from_json(nlohmann::json::parse(descriptor)), n_max);
  table.log_entries_.resize(width * width);
  for (auto& v : table.log_entries_) v = std::bit_cast<double>(get_u64(in));
  return table;
}

LogNonNeg z_n(const ZTable& table, std::size_t N) {
  if (N < 1 || N > table.n_max()) throw std::out_of_range("Z_N requested outside 1..N_max");
  return forest_z(table, N, 1);
}

std::optional<Rational> exact_z_n(const ZTable& table, std::size_t N) {
  if (N < 1) throw std::out_of_range("Z_N requested for N < 1");
  auto z = table.exact_z(N, N - 1);
  if (!z) return std::nullopt;
  return *z / N;
}

LogNonNeg forest_z(const ZTable& table, std::size_t N, std::size_t m) {
  if (m < 1 || m > N || N > table.n_max()) throw std::out_of_range("forest partition function needs 1 <= m <= N <= N_max");
  return table.log_z(N, N - m) * LogNonNeg::from_linear(static_cast<double>(m) / static_cast<double>(N));
}

RootDegreePmf root_degree_pmf(const ZTable& table, std::size_t N) {
  if (N < 2) throw std::invalid_argument("root degree law needs N >= 2");
  if (N > table.n_max()) throw std::out_of_range("N beyond the Z-table");
  const auto& ws = table.weights();
  const double denom = table.log_z(N, N - 1).log();
  const double prefactor = std::log(static_cast<double>(N) / static_cast<double>(N - 1));
  std::vector<double> logs(N, kNegInf);
  for (std::size_t k = 1; k <= N - 1; ++k) {
    logs[k] = prefactor + std::log(static_cast<double>(k)) + ws.log_weight(k + 1).log() +
              table.log_z(N - 1, N - k - 1).log();
  }
  RootDegreePmf out;
  out.p.assign(N, 0.0);
  const double hi = *std::max_element(logs.begin(), logs.end());
  double mass = 0.0;
  for (std::size_t k = 1; k < N; ++k) {
    out.p[k] = std::exp(logs[k] - hi);
    mass += out.p[k];
  }
  for (auto& v : out.p) v /= mass;
  out.raw_mass = std::exp(hi - denom) * mass;
  return out;
}

std::vector<Rational> exact_root_degree_pmf(const ZTable& table, std::size_t N) {
  if (N < 2) throw std::invalid_argument("root degree law needs N >= 2");
  require_exact(table, N);
  const auto& ws = table.weights();
  const Rational denom = *table.exact_z(N, N - 1);
  std::vector<Rational> p(N, Rational(0));
  for (std::size_t k = 1; k <= N - 1; ++k) {
    p[k] = Rational(N, N - 1) * k * *ws.exact_weight(k + 1) * *table.exact_z(N - 1, N - k - 1) / denom;
  }
  return p;
}

std::vector<std::vector<double>> joint_s_s1_pmf(const ZTable& table, std::size_t N) {
  if (N < 3) throw std::invalid_argument("joint (s, s_1) law needs N >= 3");
  if (N > table.n_max()) throw std::out_of_range("N beyond the Z-table");
  const auto& ws = table.weights();
  const double denom = table.log_z(N, N - 1).log();
  const double prefactor = std::log(static_cast<double>(N) / static_cast<double>(N - 2));
  std::vector<std::vector<double>> p(N, std::vector<double>(N, 0.0));
  for (std::size_t k = 1; k <= N - 1; ++k) {
    for (std::size_t l = 0; k + l <= N - 1; ++l) {
      const std::size_t trees = k + l - 1;
      if (trees == 0) continue;
      const double lg = prefactor + std::log(static_cast<double>(trees)) + ws.log_weight(k + 1).log() +
                        ws.log_weight(l + 1).log() + table.log_z(N - 2, N - 1 - k - l).log() - denom;
      p[k][l] = std::exp(lg);
    }
  }
  return p;
}

std::vector<std::vector<Rational>> exact_joint_s_s1_pmf(const ZTable& table, std::size_t N) {
  if (N < 3) throw std::invalid_argument("joint (s, s_1) law needs N >= 3");
  require_exact(table, N);
  const auto& ws = table.weights();
  const Rational denom = *table.exact_z(N, N - 1);
  std::vector<std::vector<Rational>> p(N, std::vector<Rational>(N, Rational(0)));
  for (std::size_t k = 1; k <= N - 1; ++k) {
    for (std::size_t l = 0; k + l <= N - 1; ++l) {
      const std::size_t trees = k + l - 1;
      p[k][l] = Rational(N * trees, N - 2) * *ws.exact_weight(k + 1) * *ws.exact_weight(l + 1) *
                *table.exact_z(N - 2, N - 1 - k - l) / denom;
    }
  }
  return p;
}

double check_lemma_lsum(const ZTable& table, std::size_t N, std::size_t n) {
  if (N < 1 || N > table.n_max() || n > table.n_max()) throw std::out_of_range("lemma check outside the table");
  const auto& ws = table.weights();
  // The sum runs over l = 0..n; l = 0 contributes nothing.
  std::vector<double> terms;
  terms.reserve(n);
  for (std::size_t l = 1; l <= n; ++l) {
    terms.push_back(std::log(static_cast<double>(l)) + ws.log_weight(l + 1).log() + table.log_z(N - 1, n - l).log());
  }
  const double lhs = log_sum_exp(terms);
  const double rhs = n == 0 ? kNegInf
                            : std::log(static_cast<double>(n) / static_cast<double>(N)) + table.log_z(N, n).log();
  return relative_gap(lhs, rhs);
}

Rational check_lemma_lsum_exact(const ZTable& table, std::size_t N, std::size_t n) {
  if (N < 1) throw std::out_of_range("lemma check needs N >= 1");
  require_exact(table, N);
  if (n > table.exact_upto()) throw std::out_of_range("n beyond the exact mirror of the Z-table");
  const auto& ws = table.weights();
  Rational lhs = 0;
  for (std::size_t l = 1; l <= n; ++l) lhs += l * *ws.exact_weight(l + 1) * *table.exact_z(N - 1, n - l);
  const Rational rhs = Rational(n, N) * *table.exact_z(N, n);
  return lhs - rhs;
}

L1Check check_lemma_l1(const ZTable& table, double eps, std::size_t N, std::size_t n) {
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const auto& ws = table.weights();
  const std::size_t top = table.n_max();
  // Scan downward: A is one past the last i <= top whose ratio fails.
  std::size_t a = 1;
  const double log_eps = std::log(eps);
  for (std::size_t i = top; i >= 1; --i) {
    const auto wi = ws.log_weight(i);
    const auto wn = ws.log_weight(i + 1);
    // Ties at the rounding level count as failures, which only enlarges A.
    const bool ok = !wn.is_zero() && (wi.is_zero() || wi.log() - wn.log() < log_eps - 1e-12);
    if (!ok) {
      a = i + 1;
      break;
    }
  }
  if (a > top) {
    throw std::runtime_error("no A_eps below N_max = " + std::to_string(top) +
                             ": weights not superexponential enough on the checked range");
  }
  L1Check out;
  out.a_eps = a;
  std::vector<double> ws_logs;
  for (std::size_t i = 0; i <= a; ++i) ws_logs.push_back(ws.log_weight(i + 1).log());
  out.log_c_eps = log_sum_exp(ws_logs);
  if (N > top || n + 1 > top) {
    out.verdict = L1Verdict::not_applicable;
    return out;
  }
  const auto lhs = table.log_z(N, n);
  const auto rhs = table.log_z(N, n + 1) * LogNonNeg::from_linear(eps) + LogNonNeg(static_cast<double>(N) * out.log_c_eps);
  // Allow for rounding in the log-domain table.
  constexpr double kSlack = 1e-12;
  out.verdict = lhs.log() <= rhs.log() + kSlack ? L1Verdict::holds : L1Verdict::violated;
  return out;
}

}  // namespace sgtree
