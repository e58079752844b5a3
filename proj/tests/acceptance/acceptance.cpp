// Acceptance suite: one line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sgtree/asymptotics.hpp"
#include "sgtree/harness.hpp"
#include "sgtree/oracle.hpp"
#include "sgtree/partition.hpp"
#include "sgtree/sampler.hpp"
#include "sgtree/trees.hpp"

using namespace sgtree;
using nlohmann::json;

namespace {

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int id, bool pass, const std::string& what) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void detail(const char* fmt, auto... args) {
  std::printf("       ");
  std::printf(fmt, args...);
  std::printf("\n");
  std::fflush(stdout);
}

bool verdicts(const ExperimentReport& r, const std::vector<std::string>& names) {
  bool ok = true;
  for (const auto& name : names) {
    const auto& v = r.verdict(name);
    if (v.comparison == "in")
      detail("%-32s %.6g in [%.6g, %.6g] %s", name.c_str(), v.value, v.threshold, v.upper, v.pass ? "ok" : "FAIL");
    else
      detail("%-32s %.6g %s %.6g %s", name.c_str(), v.value, v.comparison.c_str(), v.threshold, v.pass ? "ok" : "FAIL");
    ok = ok && v.pass;
  }
  return ok;
}

json alpha_weights(double a) { return {{"family", "factorial_alpha"}, {"alpha", a}}; }

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  double worst = 0.0;
  for (const auto& ws : {WeightSequence::uniform(), WeightSequence::theorem2(2.0), WeightSequence::theorem2(1.0),
                         WeightSequence::factorial_alpha(0.5)}) {
    for (std::size_t N = 1; N <= 9; ++N) {
      const auto o = oracle_check(ws, N);
      const bool row = (!ws.has_exact() || (o.exact_mode && o.z_exact_equal)) && o.z_relative_gap < 1e-12;
      worst = std::max(worst, o.z_relative_gap);
      if (!row) detail("mismatch: %s N=%zu gap=%.3g", ws.to_json().dump().c_str(), N, o.z_relative_gap);
      ok = ok && row;
    }
  }
  const double t = seconds_since(t0);
  detail("worst log-mode relative gap %.3g, %.2f s", worst, t);
  report(1, ok && t < 60.0, "DP Z_N equals the enumeration oracle for N <= 9 (exact, and within 1e-12 in log mode)");
}

void criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentSpec spec;
  spec.experiment = Experiment::identities;
  spec.weights = alpha_weights(0.5);
  spec.params = {{"lsum_bound", 300}, {"l1_bound", 50}, {"eps", {0.1, 0.5}}};
  const auto r = run_experiment(spec);
  bool ok = verdicts(r, {"lsum_worst_residual", "l1_eps_0.100000_violations", "l1_eps_0.500000_violations"});
  // Exact residuals on a rational family as well.
  spec.weights = {{"family", "theorem2"}, {"lambda", 2}};
  spec.params = {{"lsum_bound", 300}, {"exact_bound", 12}, {"l1_bound", 50}, {"eps", {0.1, 0.5}}};
  const auto q = run_experiment(spec);
  ok = verdicts(q, {"lsum_worst_residual", "lsum_exact_nonzero", "l1_eps_0.100000_violations",
                    "l1_eps_0.500000_violations"}) && ok;
  const double t = seconds_since(t0);
  detail("%.2f s", t);
  report(2, ok && t < 120.0, "summation identity residual < 1e-9 for N, n <= 300; inequality holds on the eps grid");
}

void criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto ws = WeightSequence::theorem2(1.0);
  const std::size_t N = 6, draws = 100000;
  const auto table = ZTable::build(ws, N);
  const auto exact = exact_nu(N, ws);
  std::map<PlaneTree, double> freq;
  sample_many(table, N, draws, 20240601, 1, [&](std::size_t, const PlaneTree& t) { freq[t] += 1.0 / draws; });
  const double tv = tv_distance(freq, exact);
  const double t = seconds_since(t0);
  detail("TV %.5f over %zu trees, %.2f s", tv, exact.trees.size(), t);
  report(3, tv < 0.02 && t < 60.0, "sampler TV to the enumerated measure < 0.02 (N = 6, theorem2(1), 1e5 samples)");
}

void criterion4() {
  ExperimentSpec spec;
  spec.experiment = Experiment::thm2_poisson;
  spec.weights = {{"family", "theorem2"}, {"lambda", 2}};
  spec.n = {400};
  spec.samples = 20000;
  spec.seed = 4;
  const auto r = run_experiment(spec);
  const bool ok = verdicts(r, {"z_ratio_gap@400", "tv_deficit_poisson@400", "branch_event_frequency@400"});
  report(4, ok, "lambda = 2, N = 400: Z ratio, Poisson deficit, branch structure");
}

void criterion5() {
  ExperimentSpec spec;
  spec.experiment = Experiment::thm3_profile;
  spec.weights = alpha_weights(0.4);
  spec.n = {1000};
  spec.samples = 1000;
  spec.seed = 5;
  const auto r = run_experiment(spec);
  bool ok = verdicts(r, {"max_degree_freq@1000", "max_branch_freq@1000", "ratio_band_freq_x2@1000"});
  detail("alpha = 0.4 scaled deficit %s", r.results["per_n"][0]["scaled_deficit"].dump().c_str());

  spec.weights = alpha_weights(0.5);
  spec.n = {1500};
  spec.samples = 10000;
  const auto p = run_experiment(spec);
  ok = verdicts(p, {"poisson_tv@1500"}) && ok;
  detail("alpha = 0.5 table + sampling %.1f s", p.wall_seconds);
  report(5, ok, "alpha = 0.4, N = 1000 degree and branch bounds, X_2 band; alpha = 0.5, N = 1500 X_3 Poisson TV");
}

void criterion6() {
  ExperimentSpec spec;
  spec.experiment = Experiment::thm4_gaussian;
  spec.weights = alpha_weights(0.5);
  spec.n = {1500};
  spec.samples = 10000;
  spec.seed = 6;
  const auto r = run_experiment(spec);
  const bool ok = verdicts(r, {"ks_x2@1500", "corr_x2_x3@1500"});
  const auto& x2 = r.results["per_n"][0]["x2"];
  detail("m-hat %.4f, sqrt(n_1) %.4f", x2["mhat"].get<double>(), x2["sqrt_n"].get<double>());
  detail("informational: continuity-corrected KS %.4f", x2["ks_continuity_corrected"].get<double>());
  detail("%.1f s", r.wall_seconds);
  report(6, ok && r.wall_seconds < 600.0, "alpha = 0.5, N = 1500: KS of standardized X_2 < 0.03, |corr(X_2, X_3)| < 0.05");
}

void criterion7() {
  ExperimentSpec spec;
  spec.experiment = Experiment::rz_expansion;
  spec.weights = alpha_weights(0.6);
  spec.n = {100, 200, 400, 800};
  const auto r = run_experiment(spec);
  bool ok = verdicts(r, {"residual_bound@100", "residual_bound@200", "residual_bound@400", "residual_bound@800",
                         "coarse_ratio@800"});

  spec.experiment = Experiment::rag1_trivial;
  spec.weights = alpha_weights(1.5);
  spec.n = {400};
  spec.samples = 1000;
  spec.seed = 7;
  const auto g = run_experiment(spec);
  ok = verdicts(g, {"z_ratio_gap@400", "star_frequency@400"}) && ok;
  // First correction: the (N-1)(N-2) weight-ratio term from one degree-2 vertex.
  const double first = static_cast<double>(400 - 2) / std::pow(399.0, 1.5);
  detail("first correction term (N-2)/(N-1)^alpha = %.4f", first);
  report(7, ok, "alpha = 0.6 residual bound and coarse ratio; alpha = 1.5, N = 400 Z ratio and star frequency");
}

void criterion8() {
  RandomSource rng(8);
  bool grad_ok = true;
  double worst = 0.0;
  const double alpha = 0.5, N = 1e4;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> m;
    for (std::size_t i = 1; i <= degree_bound(alpha); ++i) m.push_back(n_i_value(alpha, N, i) * (0.5 + rng.uniform()));
    const auto g = f_gradient(alpha, N, m);
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double h = 1e-5 * m[i];
      auto up = m, dn = m;
      up[i] += h;
      dn[i] -= h;
      const double fd = (f_value(alpha, N, up) - f_value(alpha, N, dn)) / (2 * h);
      const double rel = std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i]));
      worst = std::max(worst, rel);
      grad_ok = grad_ok && rel < 1e-6;
    }
  }
  detail("gradient vs central differences: worst relative error %.3g", worst);

  std::vector<double> scaled;
  for (double n : {1e2, 1e3, 1e4}) {
    const auto s = solve_mhat(alpha, n);
    const double r = (s.m[0] / s.n[0] - 1.0 + (1.0 - alpha) * std::pow(n, -alpha)) * std::pow(n, 2.0 * alpha);
    const double absolute = s.m[0] - s.n[0] * (1.0 - (1.0 - alpha) * std::pow(n, -alpha));
    detail("N = %.0e: scaled residual %.4f, m-hat minus first order %.4f", n, r, absolute);
    scaled.push_back(r);
  }
  const bool bounded = std::abs(scaled.back()) <= 2.0 * std::abs(scaled.front());
  detail("bounded means |r(1e4)| <= 2 |r(1e2)|: %s", bounded ? "yes" : "no");
  report(8, grad_ok && bounded, "gradient matches finite differences; scaled first-order residual stays bounded");
}

void criterion9() {
  const auto table = ZTable::build(WeightSequence::uniform(), 24);
  RandomSource rng(9);
  auto draw = [&] { return sample_tree(table, 1 + rng() % 24, rng); };
  std::size_t idem = 0, sym = 0, ultra = 0, mono = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto a = draw(), b = draw(), c = draw();
    const std::size_t R = 1 + rng() % 10;
    const auto lb = left_ball(a, R);
    idem += left_ball(lb, R) != lb;
    const auto ab = tree_distance(a, b), bc = tree_distance(b, c), ac = tree_distance(a, c);
    sym += !(ab == tree_distance(b, a));
    ultra += ac > std::max(ab, bc);
    for (std::size_t r = 1; r <= 12; ++r) {
      if (left_ball(a, r) != left_ball(b, r)) continue;
      for (std::size_t q = 1; q < r; ++q) mono += left_ball(a, q) != left_ball(b, q);
    }
  }
  detail("violations: idempotence %zu, symmetry %zu, ultrametric %zu, monotone %zu", idem, sym, ultra, mono);
  report(9, idem + sym + ultra + mono == 0, "left-ball idempotence, symmetry, ultrametric, radius monotonicity on 1e4 samples");
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> all = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                  criterion6, criterion7, criterion8, criterion9};
  for (std::size_t i = 0; i < all.size(); ++i) {
    try {
      all[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), false, std::string("threw: ") + e.what());
    }
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
