#include "lhvsim/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <utility>

namespace lhvsim {

std::size_t LhvModel::count_up_a(const Lambda& lambda, const Direction& a, const Direction& b,
                                 std::span<const double> times) const {
  std::size_t up = 0;
  for (double t : times) up += outcome_a(lambda, a, b, t) == Outcome::up;
  return up;
}

std::size_t LhvModel::count_up_b(const Lambda& lambda, const Direction& b, const Direction& a,
                                 std::span<const double> times) const {
  std::size_t up = 0;
  for (double t : times) up += outcome_b(lambda, b, a, t) == Outcome::up;
  return up;
}

namespace {

// Shared by models whose outcomes ignore the time argument.
class TimeIndependentModel : public LhvModel {
 public:
  std::size_t count_up_a(const Lambda& lambda, const Direction& a, const Direction& b,
                         std::span<const double> times) const final {
    if (times.empty()) return 0;
    return outcome_a(lambda, a, b, times.front()) == Outcome::up ? times.size() : 0;
  }
  std::size_t count_up_b(const Lambda& lambda, const Direction& b, const Direction& a,
                         std::span<const double> times) const final {
    if (times.empty()) return 0;
    return outcome_b(lambda, b, a, times.front()) == Outcome::up ? times.size() : 0;
  }
};

class BellSphere final : public TimeIndependentModel {
 public:
  std::string_view name() const override { return "bell_sphere"; }
  Postulates postulates() const override { return {true, true, false, false}; }

  Lambda sample_lambda(Rng& rng) const override {
    const double z = rng.uniform(-1.0, 1.0);
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {0, {r * std::cos(phi), r * std::sin(phi), z}};
  }

  Outcome outcome_a(const Lambda& l, const Direction& a, const Direction&,
                    double) const override {
    return sign_outcome(project(l, a));
  }
  Outcome outcome_b(const Lambda& l, const Direction& b, const Direction&,
                    double) const override {
    return flip(sign_outcome(project(l, b)));
  }

 private:
  static double project(const Lambda& l, const Direction& d) {
    return l.values[0] * d.x() + l.values[1] * d.y() + l.values[2] * d.z();
  }
};

class TimeDrift final : public LhvModel {
 public:
  TimeDrift(double omega, bool symmetric) : omega_(omega), symmetric_(symmetric) {}

  std::string_view name() const override { return "time_drift"; }
  Postulates postulates() const override { return {true, true, true, false}; }

  Lambda sample_lambda(Rng& rng) const override {
    return {0, {rng.uniform(0.0, 2.0 * std::numbers::pi), 0.0, 0.0}};
  }

  Outcome outcome_a(const Lambda& l, const Direction&, const Direction&,
                    double t) const override {
    return sign_outcome(std::sin(omega_ * t + l.values[0]));
  }
  Outcome outcome_b(const Lambda& l, const Direction&, const Direction&,
                    double t) const override {
    const double lead = symmetric_ ? 0.0 : 0.5 * std::numbers::pi;
    return flip(sign_outcome(std::sin(omega_ * t + l.values[0] + lead)));
  }

 private:
  double omega_;
  bool symmetric_;
};

// Irrational rates for the equidistributed time keys of each station.
constexpr double kRateA = 1618033.9887498949;
constexpr double kRateB = 2718281.8284590452;
constexpr double kRateCoupling = 1414213.5623730950;

// frac(rate * t + offset) for non-negative arguments. For times drawn from
// any continuous law these keys are equidistributed and practically
// independent across distinct times.
inline double time_key(double t, double rate, double offset = 0.0) {
  const double v = rate * t + offset;
  return v - static_cast<double>(static_cast<std::int64_t>(v));
}

// Station outcome is +1 iff the lambda-shifted key falls below p_plus.
inline bool below(double phase, double t, double rate, double p_plus) {
  return time_key(t, rate, phase) < p_plus;
}

inline Outcome threshold(double phase, double t, double rate, double p_plus) {
  return below(phase, t, rate, p_plus) ? Outcome::up : Outcome::down;
}

class PaperConstrained final : public LhvModel {
 public:
  PaperConstrained(double p_plus_a, double p_plus_b, bool couple)
      : p_plus_a_(p_plus_a), p_plus_b_(p_plus_b), couple_(couple) {}

  std::string_view name() const override { return "paper_constrained"; }
  Postulates postulates() const override { return {true, true, true, false}; }

  Lambda sample_lambda(Rng& rng) const override {
    const double phase_a = rng.uniform();
    return {0, {phase_a, rng.uniform(), 0.0}};
  }

  Outcome outcome_a(const Lambda& l, const Direction&, const Direction&,
                    double t) const override {
    return threshold(l.values[0], t, kRateA, p_plus_a_);
  }
  Outcome outcome_b(const Lambda& l, const Direction&, const Direction&,
                    double t) const override {
    return threshold(l.values[1], t, kRateB, p_plus_b_);
  }

  bool has_general_b() const override { return couple_; }
  Outcome outcome_b_general(const Lambda& l, const Direction& b, const Direction& a,
                            double t_b, double t_a) const override {
    if (!couple_) return outcome_b(l, b, a, t_b);
    return threshold(l.values[1] + time_key(t_a, kRateCoupling), t_b, kRateB, p_plus_b_);
  }

  std::size_t count_up_a(const Lambda& l, const Direction&, const Direction&,
                         std::span<const double> times) const override {
    std::size_t up = 0;
    for (double t : times) up += below(l.values[0], t, kRateA, p_plus_a_);
    return up;
  }
  std::size_t count_up_b(const Lambda& l, const Direction&, const Direction&,
                         std::span<const double> times) const override {
    std::size_t up = 0;
    for (double t : times) up += below(l.values[1], t, kRateB, p_plus_b_);
    return up;
  }

 private:
  double p_plus_a_;
  double p_plus_b_;
  bool couple_;
};

class CheatingNonlocal final : public TimeIndependentModel {
 public:
  explicit CheatingNonlocal(PureState psi) : psi_(std::move(psi)) {}

  std::string_view name() const override { return "cheating_nonlocal"; }
  Postulates postulates() const override { return {true, false, false, true}; }

  Lambda sample_lambda(Rng& rng) const override {
    const double u1 = rng.uniform();
    return {0, {u1, rng.uniform(), 0.0}};
  }

  Outcome outcome_a(const Lambda& l, const Direction& a, const Direction& b,
                    double) const override {
    const auto p = joint_probabilities(psi_, a, b);
    return l.values[0] < p[0][0] + p[0][1] ? Outcome::up : Outcome::down;
  }

  Outcome outcome_b(const Lambda& l, const Direction& b, const Direction& a,
                    double t) const override {
    // Reads the partner's outcome, then samples the Born conditional law.
    const Outcome partner = outcome_a(l, a, b, t);
    const auto p = joint_probabilities(psi_, a, b);
    const auto& row = p[partner == Outcome::up ? 0 : 1];
    const double total = row[0] + row[1];
    const double p_up = total > 0.0 ? row[0] / total : 0.5;
    return l.values[1] < p_up ? Outcome::up : Outcome::down;
  }

 private:
  PureState psi_;
};

// Draws an index from cumulative weights ending at 1.
std::uint64_t draw_index(std::span<const double> cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  const auto k = static_cast<std::uint64_t>(it - cumulative.begin());
  return std::min<std::uint64_t>(k, cumulative.size() - 1);
}

class Constant final : public TimeIndependentModel {
 public:
  Constant(Outcome a, Outcome b, std::optional<Outcome> b_general)
      : a_(a), b_(b), b_general_(b_general) {}

  std::string_view name() const override { return "constant"; }
  Postulates postulates() const override { return {true, true, true, false}; }
  Lambda sample_lambda(Rng&) const override { return {}; }
  Outcome outcome_a(const Lambda&, const Direction&, const Direction&, double) const override {
    return a_;
  }
  Outcome outcome_b(const Lambda&, const Direction&, const Direction&, double) const override {
    return b_;
  }
  bool has_general_b() const override { return b_general_.has_value(); }
  Outcome outcome_b_general(const Lambda&, const Direction&, const Direction&, double,
                            double) const override {
    return b_general_.value_or(b_);
  }
  std::optional<std::vector<WeightedLambda>> discrete_support() const override {
    return std::vector<WeightedLambda>{{Lambda{}, 1.0}};
  }

 private:
  Outcome a_;
  Outcome b_;
  std::optional<Outcome> b_general_;
};

class DiscreteTable final : public LhvModel {
 public:
  DiscreteTable(std::vector<double> weights, std::vector<std::vector<Outcome>> table_a,
                std::vector<std::vector<Outcome>> table_b, double horizon)
      : weights_(std::move(weights)),
        table_a_(std::move(table_a)),
        table_b_(std::move(table_b)),
        horizon_(horizon) {
    if (weights_.empty()) throw std::invalid_argument("discrete model needs at least one lambda");
    if (!(horizon_ > 0.0)) throw std::invalid_argument("table horizon must be > 0");
    if (table_a_.size() != weights_.size() || table_b_.size() != weights_.size()) {
      throw std::invalid_argument("outcome tables need one row per lambda");
    }
    columns_ = table_a_.front().size();
    if (columns_ == 0) throw std::invalid_argument("outcome tables need at least one column");
    for (std::size_t k = 0; k < weights_.size(); ++k) {
      if (table_a_[k].size() != columns_ || table_b_[k].size() != columns_) {
        throw std::invalid_argument("outcome table rows differ in length");
      }
      if (!(weights_[k] > 0.0)) throw std::invalid_argument("lambda weights must be positive");
    }
    const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
    if (std::abs(total - 1.0) > kExactTol) {
      throw std::invalid_argument("lambda weights must sum to 1");
    }
    cumulative_.resize(weights_.size());
    std::partial_sum(weights_.begin(), weights_.end(), cumulative_.begin());
    cumulative_.back() = 1.0;
  }

  std::string_view name() const override { return "random_table"; }
  Postulates postulates() const override { return {true, true, false, false}; }

  Lambda sample_lambda(Rng& rng) const override {
    return {draw_index(cumulative_, rng.uniform()), {}};
  }
  Outcome outcome_a(const Lambda& l, const Direction&, const Direction&,
                    double t) const override {
    return table_a_[l.index][bucket(t)];
  }
  Outcome outcome_b(const Lambda& l, const Direction&, const Direction&,
                    double t) const override {
    return table_b_[l.index][bucket(t)];
  }
  std::optional<std::vector<WeightedLambda>> discrete_support() const override {
    std::vector<WeightedLambda> support;
    support.reserve(weights_.size());
    for (std::size_t k = 0; k < weights_.size(); ++k) support.push_back({Lambda{k, {}}, weights_[k]});
    return support;
  }

 private:
  std::size_t bucket(double t) const {
    const double cell = std::floor(std::max(0.0, t) / horizon_ * static_cast<double>(columns_));
    return std::min(static_cast<std::size_t>(cell), columns_ - 1);
  }

  std::vector<double> weights_;
  std::vector<double> cumulative_;
  std::vector<std::vector<Outcome>> table_a_;
  std::vector<std::vector<Outcome>> table_b_;
  double horizon_;
  std::size_t columns_ = 0;
};

}  // namespace

ModelPtr model_bell_sphere() { return std::make_shared<BellSphere>(); }

ModelPtr model_time_drift(double omega, bool symmetric) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw std::invalid_argument("time_drift: omega must be > 0");
  }
  return std::make_shared<TimeDrift>(omega, symmetric);
}

ModelPtr model_paper_constrained(double p_plus_a, double p_plus_b, bool couple_earlier_time) {
  if (!(p_plus_a >= 0.0 && p_plus_a <= 1.0)) {
    throw std::invalid_argument("paper_constrained: p_plus_a must lie in [0, 1]");
  }
  if (!(p_plus_b >= 0.0 && p_plus_b <= 1.0)) {
    throw std::invalid_argument("paper_constrained: p_plus_b must lie in [0, 1]");
  }
  return std::make_shared<PaperConstrained>(p_plus_a, p_plus_b, couple_earlier_time);
}

ModelPtr model_cheating_nonlocal(const PureState& psi) {
  return std::make_shared<CheatingNonlocal>(psi);
}

ModelPtr model_constant(Outcome a, Outcome b, std::optional<Outcome> b_general) {
  return std::make_shared<Constant>(a, b, b_general);
}

ModelPtr model_discrete_table(std::vector<double> weights,
                              std::vector<std::vector<Outcome>> table_a,
                              std::vector<std::vector<Outcome>> table_b, double horizon) {
  return std::make_shared<DiscreteTable>(std::move(weights), std::move(table_a),
                                         std::move(table_b), horizon);
}

ModelPtr model_random_table(std::size_t k, std::size_t columns, double horizon,
                            std::uint64_t table_seed) {
  if (k == 0 || columns == 0) throw std::invalid_argument("random_table: k and columns must be >= 1");
  Rng rng(table_seed, streams::kModel);
  auto draw_table = [&] {
    std::vector<std::vector<Outcome>> table(k, std::vector<Outcome>(columns));
    for (auto& row : table) {
      for (auto& cell : row) cell = rng.uniform() < 0.5 ? Outcome::up : Outcome::down;
    }
    return table;
  };
  auto table_a = draw_table();
  auto table_b = draw_table();
  return model_discrete_table(std::vector<double>(k, 1.0 / static_cast<double>(k)),
                              std::move(table_a), std::move(table_b), horizon);
}

const std::vector<std::string>& model_names() {
  static const std::vector<std::string> names = {
      "bell_sphere", "time_drift", "paper_constrained", "cheating_nonlocal", "constant",
      "random_table"};
  return names;
}

namespace {

class ParamReader {
 public:
  ParamReader(std::string_view model, const std::map<std::string, double>& params)
      : model_(model), params_(params) {}

  double get(const std::string& key, double fallback) {
    known_.insert(key);
    const auto it = params_.find(key);
    if (it == params_.end()) return fallback;
    if (!std::isfinite(it->second)) fail(key + " must be finite");
    return it->second;
  }

  bool has(const std::string& key) {
    known_.insert(key);
    return params_.contains(key);
  }

  Outcome outcome(const std::string& key, double fallback) {
    const double v = get(key, fallback);
    if (v != 1.0 && v != -1.0) fail(key + " must be +1 or -1");
    return v > 0 ? Outcome::up : Outcome::down;
  }

  std::size_t count(const std::string& key, double fallback, double min_value) {
    const double v = get(key, fallback);
    if (v != std::floor(v) || v < min_value || v > 1e9) {
      fail(key + " must be an integer >= " + std::to_string(static_cast<long long>(min_value)));
    }
    return static_cast<std::size_t>(v);
  }

  // Rejects keys that the model never asked for.
  void finish() const {
    for (const auto& [key, v] : params_) {
      if (!known_.contains(key)) fail("unknown parameter '" + key + "'");
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError("model " + std::string(model_) + ": " + what);
  }

 private:
  std::string_view model_;
  const std::map<std::string, double>& params_;
  std::set<std::string> known_;
};

}  // namespace

ModelPtr make_model(std::string_view name, const std::map<std::string, double>& params,
                    const PureState& psi, double horizon) {
  ParamReader p(name, params);
  ModelPtr model;
  try {
    if (name == "bell_sphere") {
      model = model_bell_sphere();
    } else if (name == "time_drift") {
      const double omega = p.get("omega", 2.0 * std::numbers::pi);
      const bool symmetric = p.get("symmetric", 1.0) != 0.0;
      model = model_time_drift(omega, symmetric);
    } else if (name == "paper_constrained") {
      const double pa = p.get("p_plus_a", 0.5);
      const double pb = p.get("p_plus_b", 0.5);
      const bool couple = p.get("couple_earlier_time", 0.0) != 0.0;
      model = model_paper_constrained(pa, pb, couple);
    } else if (name == "cheating_nonlocal") {
      model = model_cheating_nonlocal(psi);
    } else if (name == "constant") {
      const Outcome a = p.outcome("a", 1.0);
      const Outcome b = p.outcome("b", -1.0);
      std::optional<Outcome> b_general;
      if (p.has("b_general")) b_general = p.outcome("b_general", 1.0);
      model = model_constant(a, b, b_general);
    } else if (name == "random_table") {
      const std::size_t k = p.count("k", 8, 1);
      const std::size_t columns = p.count("columns", 16, 1);
      const std::size_t table_seed = p.count("table_seed", 0, 0);
      model = model_random_table(k, columns, horizon, table_seed);
    } else {
      throw ConfigError("unknown model '" + std::string(name) + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  p.finish();
  return model;
}

}  // namespace lhvsim
