#include "sgtree/weights.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sgtree {

namespace {

constexpr std::size_t kLogFactorialTable = std::size_t{1} << 17;

const std::vector<double>& log_factorial_table() {
  static const std::vector<double> table = [] {
    // Extended-precision running sum, rounded once per entry.
    std::vector<double> t(kLogFactorialTable);
    long double acc = 0.0L;
    for (std::size_t j = 1; j < t.size(); ++j) {
      acc += std::log(static_cast<long double>(j));
      t[j] = static_cast<double>(acc);
    }
    return t;
  }();
  return table;
}

BigInt big_factorial(std::size_t n) {
  BigInt r = 1;
  for (std::size_t j = 2; j <= n; ++j) r *= j;
  return r;
}

bool is_nonnegative_integer(double x) { return x >= 0.0 && std::floor(x) == x && x < 1e6; }

}  // namespace

double log_factorial(std::size_t n) {
  const auto& t = log_factorial_table();
  if (n < t.size()) return t[n];
  long double acc = t.back();
  for (std::size_t j = t.size(); j <= n; ++j) acc += std::log(static_cast<long double>(j));
  return static_cast<double>(acc);
}

std::string to_string(WeightFamily family) {
  switch (family) {
    case WeightFamily::uniform: return "uniform";
    case WeightFamily::theorem2: return "theorem2";
    case WeightFamily::factorial_alpha: return "factorial_alpha";
    case WeightFamily::custom: return "custom";
  }
  return "unknown";
}

WeightSequence::WeightSequence(WeightFamily family, double param, std::vector<Rational> table)
    : family_(family), param_(param), table_(std::move(table)) {
  if (family_ == WeightFamily::theorem2 || family_ == WeightFamily::factorial_alpha) {
    if (!(param_ > 0.0) || !std::isfinite(param_))
      throw std::invalid_argument(to_string(family_) + " requires a positive finite parameter");
    exact_param_ = rational_from_double(param_);
  }
  if (family_ == WeightFamily::custom) {
    table_logs_.reserve(table_.size());
    for (const auto& w : table_) {
      if (w < 0) throw std::invalid_argument("custom weights must be nonnegative");
      table_logs_.push_back(w == 0 ? kNegInf : log_of(w));
    }
    if (table_.empty() || table_[0] == 0) throw std::invalid_argument("weights require w_1 > 0");
    const bool has_branching = std::any_of(table_.begin() + std::min<std::size_t>(2, table_.size()),
                                           table_.end(), [](const Rational& w) { return w > 0; });
    if (!has_branching) throw std::invalid_argument("weights require w_n > 0 for some n > 2");
  }
}

WeightSequence WeightSequence::uniform() { return {WeightFamily::uniform, 0.0, {}}; }

WeightSequence WeightSequence::theorem2(double lambda) { return {WeightFamily::theorem2, lambda, {}}; }

WeightSequence WeightSequence::factorial_alpha(double alpha) {
  return {WeightFamily::factorial_alpha, alpha, {}};
}

WeightSequence WeightSequence::custom(std::vector<Rational> table) {
  return {WeightFamily::custom, 0.0, std::move(table)};
}

WeightSequence WeightSequence::from_json(const nlohmann::json& j) {
  const auto family = j.at("family").get<std::string>();
  auto number = [&](const char* key) {
    const auto& v = j.at(key);
    if (v.is_string()) {
      return parse_rational(v.get<std::string>()).convert_to<double>();
    }
    return v.get<double>();
  };
  if (family == "uniform") return uniform();
  if (family == "theorem2") {
    auto ws = theorem2(number("lambda"));
    if (j.at("lambda").is_string()) ws.exact_param_ = parse_rational(j.at("lambda").get<std::string>());
    return ws;
  }
  if (family == "factorial_alpha") return factorial_alpha(number("alpha"));
  if (family == "custom") {
    std::vector<Rational> table;
    for (const auto& v : j.at("weights")) {
      table.push_back(v.is_string() ? parse_rational(v.get<std::string>()) : rational_from_double(v.get<double>()));
    }
    return custom(std::move(table));
  }
  throw std::invalid_argument("unknown weight family '" + family + "'");
}

nlohmann::json WeightSequence::to_json() const {
  nlohmann::json j;
  j["family"] = to_string(family_);
  switch (family_) {
    case WeightFamily::uniform: break;
    case WeightFamily::theorem2: j["lambda"] = param_; break;
    case WeightFamily::factorial_alpha: j["alpha"] = param_; break;
    case WeightFamily::custom: {
      auto arr = nlohmann::json::array();
      for (const auto& w : table_) arr.push_back(w.str());
      j["weights"] = arr;
      break;
    }
  }
  return j;
}

LogNonNeg WeightSequence::log_weight(std::size_t n) const {
  if (n == 0) throw std::domain_error("branching weight index must be >= 1");
  switch (family_) {
    case WeightFamily::uniform: return LogNonNeg::one();
    case WeightFamily::theorem2:
      return n == 2 ? LogNonNeg(std::log(param_)) : LogNonNeg(log_factorial(n - 1));
    case WeightFamily::factorial_alpha: return LogNonNeg(param_ * log_factorial(n - 1));
    case WeightFamily::custom: return n <= table_logs_.size() ? LogNonNeg(table_logs_[n - 1]) : LogNonNeg::zero();
  }
  return LogNonNeg::zero();
}

bool WeightSequence::has_exact() const {
  return family_ != WeightFamily::factorial_alpha || is_nonnegative_integer(param_);
}

std::optional<Rational> WeightSequence::exact_weight(std::size_t n) const {
  if (n == 0) throw std::domain_error("branching weight index must be >= 1");
  switch (family_) {
    case WeightFamily::uniform: return Rational(1);
    case WeightFamily::theorem2: return n == 2 ? exact_param_ : Rational(big_factorial(n - 1));
    case WeightFamily::factorial_alpha: {
      if (!has_exact()) return std::nullopt;
      return Rational(boost::multiprecision::pow(big_factorial(n - 1), static_cast<unsigned>(param_)));
    }
    case WeightFamily::custom: return n <= table_.size() ? table_[n - 1] : Rational(0);
  }
  return std::nullopt;
}

HighPrecision WeightSequence::high_precision_weight(std::size_t n) const {
  if (auto exact = exact_weight(n)) return HighPrecision(*exact);
  // factorial_alpha with non-integer alpha
  const HighPrecision fact(big_factorial(n - 1));
  return boost::multiprecision::pow(fact, HighPrecision(exact_param_));
}

std::optional<std::size_t> WeightSequence::support_end() const {
  if (family_ != WeightFamily::custom) return std::nullopt;
  std::size_t last = 0;
  for (std::size_t i = 0; i < table_.size(); ++i)
    if (table_[i] > 0) last = i + 1;
  return last;
}

SuperexponentialReport check_superexponential(const WeightSequence& ws, std::size_t n_max, double threshold) {
  SuperexponentialReport report;
  if (n_max < 3) n_max = 3;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const auto lo = ws.log_weight(n);
    const auto hi = ws.log_weight(n + 1);
    double r;
    if (hi.is_zero())
      r = kNegInf;
    else if (lo.is_zero())
      r = std::numeric_limits<double>::infinity();
    else
      r = hi.log() - lo.log();
    report.log_ratios.push_back(r);
  }
  const std::size_t start = report.log_ratios.size() / 2;
  report.eventually_increasing = true;
  for (std::size_t i = start + 1; i < report.log_ratios.size(); ++i) {
    if (!(report.log_ratios[i] > report.log_ratios[i - 1])) report.eventually_increasing = false;
  }
  report.exceeds_threshold = report.log_ratios.back() > std::log(threshold);
  if (!report.eventually_increasing || !report.exceeds_threshold) {
    report.warning = "ratio w_{n+1}/w_n does not look superexponential up to n = " + std::to_string(n_max);
  }
  return report;
}

}  // namespace sgtree
