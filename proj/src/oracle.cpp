#include "sgtree/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sgtree {

namespace {

// Depth-first generation of Lukasiewicz words with prefix pruning: proper
// prefixes keep excess >= 0 and the excess must still be able to reach -1.
void extend(std::vector<std::uint32_t>& word, long long excess, std::size_t N, std::vector<PlaneTree>& out) {
  const std::size_t pos = word.size();
  if (pos + 1 == N) {
    word.push_back(static_cast<std::uint32_t>(-excess));
    out.push_back(PlaneTree::from_word(word));
    word.pop_back();
    return;
  }
  const long long slots_after = static_cast<long long>(N - pos - 1);
  for (long long d = std::max(0LL, 1 - excess); d <= slots_after - excess; ++d) {
    word.push_back(static_cast<std::uint32_t>(d));
    extend(word, excess + d - 1, N, out);
    word.pop_back();
  }
}

}  // namespace

std::vector<PlaneTree> enumerate_trees(std::size_t N, std::size_t cap) {
  if (N < 1 || N > cap) throw std::out_of_range("enumeration needs 1 <= N <= " + std::to_string(cap));
  std::vector<PlaneTree> out;
  std::vector<std::uint32_t> word;
  word.reserve(N);
  extend(word, 0, N, out);
  return out;
}

double EnumeratedMeasure::probability(std::size_t i) const {
  if (exact) return (exact_weights[i] / exact_total).convert_to<double>();
  return static_cast<double>(weights[i] / total);
}

Rational EnumeratedMeasure::exact_probability(std::size_t i) const {
  if (!exact) throw std::logic_error("measure has no exact weights");
  return exact_weights[i] / exact_total;
}

EnumeratedMeasure exact_nu(std::size_t N, const WeightSequence& ws) {
  EnumeratedMeasure m;
  m.N = N;
  m.trees = enumerate_trees(N);
  m.exact = ws.has_exact();
  std::vector<Rational> wq;
  std::vector<HighPrecision> wh;
  for (std::size_t d = 1; d <= N + 1; ++d) {
    if (m.exact) wq.push_back(*ws.exact_weight(d));
    wh.push_back(ws.high_precision_weight(d));
  }
  m.exact_total = 0;
  m.total = 0;
  for (const auto& t : m.trees) {
    Rational q = 1;
    HighPrecision h = 1;
    for (auto outdeg : t.word()) {
      if (m.exact) q *= wq[outdeg];  // w_{outdeg + 1}
      h *= wh[outdeg];
    }
    if (m.exact) {
      m.exact_weights.push_back(q);
      m.exact_total += q;
    }
    m.weights.push_back(h);
    m.total += h;
  }
  if (m.total == 0) throw std::domain_error("all trees of this size have zero weight");
  return m;
}

double tv_distance(const std::map<PlaneTree, double>& empirical, const EnumeratedMeasure& exact) {
  std::map<PlaneTree, double> reference;
  for (std::size_t i = 0; i < exact.trees.size(); ++i) reference[exact.trees[i]] += exact.probability(i);
  double sum = 0.0;
  for (const auto& [tree, q] : reference) {
    const auto it = empirical.find(tree);
    sum += std::abs((it == empirical.end() ? 0.0 : it->second) - q);
  }
  for (const auto& [tree, p] : empirical)
    if (!reference.contains(tree)) sum += p;
  return 0.5 * sum;
}

}  // namespace sgtree

#include "sgtree/partition.hpp"

namespace sgtree {

bool OracleAgreement::agree() const {
  const bool logs_ok = z_relative_gap < tolerance && root_degree_max_gap < tolerance;
  if (!exact_mode) return logs_ok;
  const bool joint_ok = N < 3 || N > 8 || joint_exact_equal;
  return logs_ok && z_exact_equal && (N < 2 || root_degree_exact_equal) && joint_ok;
}

nlohmann::json OracleAgreement::to_json() const {
  nlohmann::json j{{"N", N},
                   {"exact_mode", exact_mode},
                   {"z_relative_gap", z_relative_gap},
                   {"root_degree_max_gap", root_degree_max_gap},
                   {"tolerance", tolerance}};
  if (exact_mode) {
    j["z_exact_equal"] = z_exact_equal;
    j["root_degree_exact_equal"] = root_degree_exact_equal;
    if (N >= 3 && N <= 8) j["joint_exact_equal"] = joint_exact_equal;
  }
  j["agree"] = agree();
  return j;
}

OracleAgreement oracle_check(const WeightSequence& ws, std::size_t N) {
  OracleAgreement out;
  out.N = N;
  out.tolerance = kHighPrecisionTolerance;
  const auto measure = exact_nu(N, ws);
  ZTableOptions options;
  options.exact_upto = ws.has_exact() ? N : 0;
  options.threads = 1;
  const auto table = ZTable::build(ws, N, options);
  out.exact_mode = measure.exact;

  const HighPrecision dp_log(z_n(table, N).log());
  out.z_relative_gap = static_cast<double>(abs(expm1(dp_log - log(measure.total))));

  // Enumerated laws of sigma(s) and of (sigma(s), sigma(s_1)).
  std::vector<HighPrecision> sigma_hp(N + 1, HighPrecision(0));
  std::vector<Rational> sigma_q(N + 1, Rational(0));
  std::vector<std::vector<Rational>> joint_q(N + 1, std::vector<Rational>(N + 1, Rational(0)));
  for (std::size_t i = 0; i < measure.trees.size(); ++i) {
    const auto w = measure.trees[i].word();
    const std::size_t k = w[0];
    sigma_hp[k] += measure.weights[i] / measure.total;
    if (measure.exact) {
      const Rational p = measure.exact_probability(i);
      sigma_q[k] += p;
      if (k >= 1) joint_q[k][w[1]] += p;
    }
  }
  if (N >= 2) {
    const auto pmf = root_degree_pmf(table, N);
    for (std::size_t k = 1; k < N; ++k)
      out.root_degree_max_gap = std::max(out.root_degree_max_gap, std::abs(pmf.p[k] - static_cast<double>(sigma_hp[k])));
  }
  if (measure.exact) {
    out.z_exact_equal = *exact_z_n(table, N) == measure.exact_total;
    if (N >= 2) {
      const auto p = exact_root_degree_pmf(table, N);
      out.root_degree_exact_equal = true;
      for (std::size_t k = 1; k < N; ++k) out.root_degree_exact_equal &= p[k] == sigma_q[k];
    }
    if (N >= 3 && N <= 8) {
      const auto joint = exact_joint_s_s1_pmf(table, N);
      out.joint_exact_equal = true;
      for (std::size_t k = 1; k < N; ++k)
        for (std::size_t l = 0; l < N; ++l) out.joint_exact_equal &= joint[k][l] == joint_q[k][l];
    }
  }
  return out;
}

}  // namespace sgtree
