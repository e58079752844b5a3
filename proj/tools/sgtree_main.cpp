// sgtree: command-line harness for simply generated trees.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgtree/asymptotics.hpp"
#include "sgtree/harness.hpp"
#include "sgtree/oracle.hpp"
#include "sgtree/partition.hpp"
#include "sgtree/rng.hpp"
#include "sgtree/sampler.hpp"
#include "sgtree/trees.hpp"
#include "sgtree/weights.hpp"

namespace {

using nlohmann::json;
using namespace sgtree;

// Inline JSON when the argument starts with '{', otherwise a file path.
json read_json_arg(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return json::parse(arg);
  std::ifstream in(arg);
  if (!in) throw std::runtime_error("cannot open " + arg);
  return json::parse(in);
}

std::vector<PlaneTree> read_trees(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<PlaneTree> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(PlaneTree::parse(line));
  }
  return out;
}

std::string format_distance(const TreeDistance& d) {
  if (d.numerator == 0) return "0";
  return std::to_string(d.numerator) + "/" + std::to_string(d.denominator);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simply generated trees with superexponential weights"};
  app.require_subcommand(1);

  // ztable
  auto* ztable = app.add_subcommand("ztable", "Build the Z(N,n) table");
  std::string weights_arg;
  std::size_t nmax = 0;
  std::size_t exact_upto = 0;
  bool truncate = false, allow_large = false, dump_csv = false;
  std::string out_path;
  ztable->add_option("--weights", weights_arg, "Weight family JSON (inline or file)")->required();
  ztable->add_option("--nmax", nmax, "Largest N")->required();
  ztable->add_option("--exact-upto", exact_upto, "Build an exact rational mirror up to this N");
  ztable->add_flag("--truncate", truncate, "Drop convolution terms far below the entry maximum");
  ztable->add_flag("--allow-large", allow_large, "Permit N_max beyond the default limit");
  ztable->add_option("--out", out_path, "Binary table output path");
  ztable->add_flag("--dump-csv", dump_csv, "Write N,n,logZ triples to stdout");

  // sample
  auto* sample = app.add_subcommand("sample", "Draw exact samples from nu_N");
  std::size_t n = 0, count = 1;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  bool stats_only = false;
  sample->add_option("--weights", weights_arg, "Weight family JSON (inline or file)")->required();
  sample->add_option("--n", n, "Number of edges N")->required();
  sample->add_option("--count", count, "Number of samples");
  sample->add_option("--seed", seed, "RNG seed");
  sample->add_option("--threads", threads, "Worker threads (0 = all cores)");
  sample->add_option("--out", out_path, "Output file (default stdout)");
  sample->add_flag("--stats-only", stats_only, "Emit per-sample statistics as CSV");
  sample->add_flag("--allow-large", allow_large, "Permit N beyond the default table limit");

  // distance
  auto* distance = app.add_subcommand("distance", "Left-ball distance between trees, line by line");
  std::string file_a, file_b;
  distance->add_option("fileA", file_a)->required();
  distance->add_option("fileB", file_b)->required();

  // predict
  auto* predict = app.add_subcommand("predict", "Asymptotic predictions for w_n = ((n-1)!)^alpha");
  double alpha = 0.5;
  predict->add_option("--alpha", alpha, "Exponent alpha")->required();
  predict->add_option("--n", n, "Number of edges N")->required();

  // oracle-check
  auto* oracle = app.add_subcommand("oracle-check", "Compare the DP against brute-force enumeration");
  oracle->add_option("--weights", weights_arg, "Weight family JSON (inline or file)")->required();
  oracle->add_option("--n", n, "Number of edges N (<= 12)")->required();

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run an experiment spec; exit 0 iff all verdicts pass");
  std::string spec_path, csv_dir;
  experiment->add_option("--spec", spec_path, "Experiment spec JSON file")->required();
  experiment->add_option("--emit-csv", csv_dir, "Directory for per-sample CSV files");
  experiment->add_option("--out", out_path, "Report path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ztable) {
      if (out_path.empty() && !dump_csv) throw CLI::ValidationError("--out", "give --out and/or --dump-csv");
      ZTableOptions options;
      options.exact_upto = exact_upto;
      options.truncate = truncate;
      options.allow_large = allow_large;
      const auto table = ZTable::build(WeightSequence::from_json(read_json_arg(weights_arg)), nmax, options);
      if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        table.save(out);
      }
      if (dump_csv) {
        std::cout << "N,n,logZ\n";
        std::cout.precision(17);
        for (std::size_t N = 0; N <= nmax; ++N)
          for (std::size_t k = 0; k <= nmax; ++k) std::cout << N << ',' << k << ',' << table.log_z(N, k).log() << '\n';
      }
      return 0;
    }

    if (*sample) {
      const auto ws = WeightSequence::from_json(read_json_arg(weights_arg));
      ZTableOptions options;
      options.allow_large = allow_large;
      options.threads = threads;
      const auto table = ZTable::build(ws, n, options);
      std::ofstream file;
      if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw std::runtime_error("cannot write " + out_path);
      }
      std::ostream& out = out_path.empty() ? std::cout : file;
      std::vector<PlaneTree> trees(count);
      sample_many(table, n, count, seed, threads, [&](std::size_t i, const PlaneTree& t) { trees[i] = t; });
      if (!stats_only) {
        for (const auto& t : trees) out << t << '\n';
        return 0;
      }
      std::vector<TreeStats> stats;
      std::size_t top = 3;
      for (const auto& t : trees) {
        stats.push_back(TreeStats::of(t));
        top = std::max<std::size_t>(top, stats.back().max_non_s_degree);
      }
      out << "# weights: " << ws.to_json().dump() << "\n# seed: " << seed << "\n# rng: " << RandomSource::kAlgorithm
          << "\nsigma_s";
      for (std::size_t d = 2; d <= top; ++d) out << ",X_" << d;
      out << ",max_branch\n";
      for (const auto& s : stats) {
        out << s.sigma_s;
        for (std::size_t d = 2; d <= top; ++d) out << ',' << s.x(d);
        out << ',' << s.max_branch << '\n';
      }
      return 0;
    }

    if (*distance) {
      const auto a = read_trees(file_a);
      const auto b = read_trees(file_b);
      if (a.size() != b.size()) throw std::runtime_error("files hold different numbers of trees");
      for (std::size_t i = 0; i < a.size(); ++i) std::cout << format_distance(tree_distance(a[i], b[i])) << '\n';
      return 0;
    }

    if (*predict) {
      json j;
      const double dN = static_cast<double>(n);
      j["alpha"] = alpha;
      j["N"] = n;
      if (alpha > 0.0 && alpha < 1.0) {
        const std::size_t K = degree_bound(alpha);
        j["K"] = K;
        j["poisson_boundary"] = poisson_boundary(alpha);
        for (std::size_t i = 1; i <= K; ++i) j["n_i"].push_back(n_i_value(alpha, dN, i));
        try {
          const auto sol = solve_mhat(alpha, dN);
          j["mhat_i"] = sol.m;
          j["beta"] = sol.beta;
          j["gradient_norm"] = sol.gradient_norm;
        } catch (const SolverError& e) {
          j["mhat_error"] = e.what();
        }
        j["log_zn"] = predict_logzn(Regime::alpha_lt_1, alpha, n);
      } else if (alpha > 1.0) {
        j["log_zn"] = predict_logzn(Regime::alpha_gt_1, alpha, n);
      } else {
        j["log_zn"] = predict_logzn(Regime::theorem2, 1.0, n);  // alpha = 1 is theorem2 with lambda = 1
      }
      std::cout << j.dump(2) << '\n';
      return 0;
    }

    if (*oracle) {
      const auto result = oracle_check(WeightSequence::from_json(read_json_arg(weights_arg)), n);
      std::cout << result.to_json().dump(2) << '\n';
      return result.agree() ? 0 : 1;
    }

    if (*experiment) {
      auto spec = ExperimentSpec::from_json(read_json_arg(spec_path));
      if (!csv_dir.empty()) spec.csv_dir = csv_dir;
      const auto report = run_experiment(spec);
      const auto text = report.to_json().dump(2);
      if (out_path.empty()) {
        std::cout << text << '\n';
      } else {
        std::ofstream out(out_path);
        out << text << '\n';
      }
      return report.passed() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "sgtree: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
