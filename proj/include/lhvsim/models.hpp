#pragma once

// Realistic hidden-variable models with time-labelled outcome functions.
//
// A model owns the distribution of its hidden variable and two deterministic
// outcome functions. Station A sees its own direction, the partner's
// direction and its own measurement time; station B likewise. The partner's
// direction is admitted so that models correlated with the settings remain
// expressible, while the partner's time is withheld (locality in time). The
// general B function additionally receives the earlier A time.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lhvsim/errors.hpp"
#include "lhvsim/quantum.hpp"
#include "lhvsim/rng.hpp"

namespace lhvsim {

/// Hidden-variable value. Discrete models store an integer in `index`;
/// continuous models store a fixed-length real tuple in `values`. Each model
/// documents which fields it uses.
struct Lambda {
  std::uint64_t index = 0;
  std::array<double, 3> values{};

  friend bool operator==(const Lambda&, const Lambda&) = default;
};

struct WeightedLambda {
  Lambda lambda;
  double weight = 0.0;
};

/// Which assumptions a model claims to respect.
struct Postulates {
  bool time_local_a = true;
  bool time_local_b = true;
  /// Per-lambda time averages do not depend on lambda.
  bool lambda_independent_time_averages = false;
  /// Outcomes depend on the partner's direction.
  bool superdeterministic_directions = false;
};

class LhvModel {
 public:
  virtual ~LhvModel() = default;

  virtual std::string_view name() const = 0;
  virtual Postulates postulates() const = 0;

  /// Draws lambda from the model's density.
  virtual Lambda sample_lambda(Rng& rng) const = 0;

  virtual Outcome outcome_a(const Lambda& lambda, const Direction& a, const Direction& b,
                            double t_a) const = 0;
  virtual Outcome outcome_b(const Lambda& lambda, const Direction& b, const Direction& a,
                            double t_b) const = 0;

  /// True when outcome_b_general is overridden with a genuine dependence on
  /// the earlier time.
  virtual bool has_general_b() const { return false; }
  virtual Outcome outcome_b_general(const Lambda& lambda, const Direction& b,
                                    const Direction& a, double t_b, double t_a) const {
    (void)t_a;
    return outcome_b(lambda, b, a, t_b);
  }

  /// Finite support with positive weights summing to one, when the model has
  /// one. sample_lambda draws from exactly this distribution.
  virtual std::optional<std::vector<WeightedLambda>> discrete_support() const {
    return std::nullopt;
  }

  /// Number of times in `times` at which A (resp. B) returns +1. Models whose
  /// outcomes ignore time override these with a single evaluation.
  virtual std::size_t count_up_a(const Lambda& lambda, const Direction& a, const Direction& b,
                                 std::span<const double> times) const;
  virtual std::size_t count_up_b(const Lambda& lambda, const Direction& b, const Direction& a,
                                 std::span<const double> times) const;
};

using ModelPtr = std::shared_ptr<const LhvModel>;

/// lambda.values = unit vector uniform on the sphere.
/// A = sign(lambda.a), B = -sign(lambda.b); times ignored.
ModelPtr model_bell_sphere();

/// lambda.values[0] = phase uniform on [0, 2 pi).
/// A = sign(sin(omega t_a + phase)), B = -sign(sin(omega t_b + phase)).
/// Throws std::invalid_argument unless omega > 0.
/// With `symmetric` false, B runs a quarter period ahead of A.
ModelPtr model_time_drift(double omega, bool symmetric = true);

/// lambda.values[0..1] = phases keying two equidistributed +-1 sequences over
/// measurement times. A returns +1 with long-run frequency p_plus_a whatever
/// lambda is, B likewise with p_plus_b, so per-lambda time averages are
/// lambda-independent. With `couple_earlier_time` the general B function
/// keys its sequence on (t_b, t_a) instead of t_b alone.
ModelPtr model_paper_constrained(double p_plus_a, double p_plus_b,
                                 bool couple_earlier_time = false);

/// lambda.values[0..1] = two shared uniforms. A samples particle 1's Born
/// marginal; B recomputes A's outcome and samples the Born conditional law,
/// so the pair reproduces the quantum joint distribution of `psi` exactly.
/// B depends on the partner's outcome channel, which a time-local model
/// forbids.
ModelPtr model_cheating_nonlocal(const PureState& psi);

/// Single lambda (index 0); A and B are constants. `b_general`, when set,
/// overrides the general B function with another constant.
ModelPtr model_constant(Outcome a, Outcome b, std::optional<Outcome> b_general = std::nullopt);

/// Discrete model: lambda.index = k with probability weights[k]. Outcomes are
/// read from +-1 tables indexed [k][bucket], where bucket partitions
/// [0, horizon] into `columns` equal cells. Directions are ignored.
ModelPtr model_discrete_table(std::vector<double> weights,
                              std::vector<std::vector<Outcome>> table_a,
                              std::vector<std::vector<Outcome>> table_b, double horizon);

/// A discrete table model with `k` equally likely lambdas and random tables
/// of `columns` cells drawn from `table_seed`.
ModelPtr model_random_table(std::size_t k, std::size_t columns, double horizon,
                            std::uint64_t table_seed);

/// Names accepted by make_model.
const std::vector<std::string>& model_names();

/// Builds a catalog model from its name and numeric parameters. Unknown names,
/// unknown parameter keys and out-of-range values throw ConfigError. `psi` is
/// used by models that need the quantum state; `horizon` by time-tabled ones.
ModelPtr make_model(std::string_view name, const std::map<std::string, double>& params,
                    const PureState& psi, double horizon);

}  // namespace lhvsim
