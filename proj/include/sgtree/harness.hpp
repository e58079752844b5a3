#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sgtree/trees.hpp"
#include "sgtree/weights.hpp"

namespace sgtree {

enum class Experiment { thm1_star, thm2_poisson, thm3_profile, thm4_gaussian, rz_expansion, rag1_trivial, identities };

std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& name);

/// One experiment, as read from the JSON passed to `sgtree experiment --spec`.
///
///   {
///     "experiment": "thm2_poisson",
///     "weights": {"family": "theorem2", "lambda": 2},
///     "n": [400],
///     "samples": 20000,
///     "seed": 1,
///     "threads": 0,
///     "params": {"radius": 3},
///     "tolerances": {"tv_max": 0.05}
///   }
///
/// Missing tolerances take the documented defaults of each experiment; the
/// resolved values are echoed in the report.
struct ExperimentSpec {
  Experiment experiment = Experiment::identities;
  nlohmann::json weights;
  std::vector<std::size_t> n;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json tolerances = nlohmann::json::object();
  std::optional<std::string> csv_dir;

  static ExperimentSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  /// Throws std::invalid_argument on an invalid spec.
  void validate() const;
};

struct Verdict {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  /// "<", "<=", ">=" or "in" (value within [threshold, upper]).
  std::string comparison;
  double upper = 0.0;
  bool pass = false;
};

struct ExperimentReport {
  nlohmann::json spec;
  nlohmann::json results = nlohmann::json::object();
  std::vector<Verdict> verdicts;
  double wall_seconds = 0.0;

  bool passed() const;
  const Verdict& verdict(const std::string& name) const;
  nlohmann::json to_json() const;
};

/// Per-sample statistics; what `sample --stats-only` and `--emit-csv` write.
struct TreeStats {
  std::uint32_t sigma_s = 0;
  std::vector<std::size_t> degree_counts;  // X_i over all vertices for i = 2..max degree; entry 0 is X_2
  std::size_t max_branch = 0;
  std::uint32_t max_non_s_degree = 0;
  std::size_t size_two_branches = 0;
  bool branches_at_most_two = false;

  static TreeStats of(const PlaneTree& t);
  std::size_t x(std::size_t degree) const;
};

ExperimentReport run_thm1(const ExperimentSpec& spec);
ExperimentReport run_thm2(const ExperimentSpec& spec);
ExperimentReport run_thm3(const ExperimentSpec& spec);
ExperimentReport run_thm4(const ExperimentSpec& spec);
ExperimentReport run_rz(const ExperimentSpec& spec);
ExperimentReport run_rag1(const ExperimentSpec& spec);
ExperimentReport run_identities(const ExperimentSpec& spec);

ExperimentReport run_experiment(const ExperimentSpec& spec);

}  // namespace sgtree
