#pragma once

// Skew products F(omega, x, t) = (sigma omega, T_{omega_0} x, t + phi_{omega_0}(x))
// over a shift of finite type, with circle rotations as fiber maps.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "skewlab/circle.hpp"
#include "skewlab/sft.hpp"

namespace skewlab::skew {

/// Theorem1: two-letter Bernoulli base, T_0 plain rotation, T_1 carries the roof.
/// Theorem2: as Theorem1 with T_0 = T_1 (t advances by omega_0 phi(x)).
/// General: any base, any fibers.
enum class Mode { Theorem1, Theorem2, General };

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& name);

/// Fiber automorphism attached to one letter: (x, t) -> (x + alpha, t + roof(x)).
struct FiberMap {
  circle::RotationNumber alpha;
  std::optional<circle::RoofFunction> roof;  // absent means roof 0
};

class SkewSystem {
 public:
  SkewSystem(sft::SftSpec base, std::vector<FiberMap> fibers, Mode mode);

  /// F(omega, x, t) = (sigma omega, x + alpha, t + omega_0 roof(x)) over Bernoulli(1-p1, p1).
  static SkewSystem theorem2(circle::RotationNumber alpha, circle::RoofFunction roof, double p1 = 0.5);
  static SkewSystem theorem1(circle::RotationNumber alpha0, circle::RotationNumber alpha1,
                             circle::RoofFunction roof, double p1 = 0.5);

  const sft::SftSpec& base() const noexcept { return base_; }
  const std::vector<FiberMap>& fibers() const noexcept { return fibers_; }
  Mode mode() const noexcept { return mode_; }

  /// Roof of letter 1 (Theorem1/Theorem2 modes).
  const circle::RoofFunction& roof() const;
  /// The common rotation (Theorem2 mode).
  const circle::RotationNumber& rotation() const;

  double roof_value(sft::Symbol s, double x) const;
  /// x <- frac(x + alpha_s) with `carry` holding the rounding error of x,
  /// so n steps agree with frac(x + n alpha) to ~1e-15.
  void rotate(sft::Symbol s, double& x, double& carry) const;

 private:
  sft::SftSpec base_;
  std::vector<FiberMap> fibers_;
  Mode mode_;
};

struct SkewState {
  sft::SymbolStream stream;  // the cursor is stream.position()
  double x = 0.0;
  double t = 0.0;
  double x_carry = 0.0;
};

SkewState make_state(const SkewSystem& sys, std::uint64_t seed, double x, double t);

/// Record of an orbit segment. symbols[i], xs[i], ts[i], weights[i] describe
/// the state before step i; ts has one more entry (the final height).
struct Trajectory {
  Mode mode = Mode::General;
  std::vector<sft::Symbol> symbols;
  std::vector<double> xs;
  std::vector<double> ts;
  std::vector<double> weights;  // phi(x_i) of the Theorem1/2 roof

  std::size_t steps() const { return symbols.size(); }
};

/// Applies F n times. When `record` is given, steps are appended to it.
SkewState iterate(const SkewSystem& sys, SkewState state, std::uint64_t n, Trajectory* record = nullptr);

/// Applies F along an explicitly supplied symbol word (the base letters
/// omega_0, omega_1, ...); returns the final (x, t).
std::pair<double, double> iterate_word(const SkewSystem& sys, double x, double t,
                                       std::span<const sft::Symbol> word, Trajectory* record = nullptr);

struct Decomposition {
  double martingale = 0.0;  // S_n = sum c_i (2 omega_i - 1)
  double drift = 0.0;       // s_n = sum c_i
  double residual = 0.0;    // |t_n - t_0 - S_n/2 - s_n/2|
};

/// Throws std::invalid_argument unless the trajectory came from Theorem2 mode.
Decomposition martingale_decompose(const Trajectory& tr);

/// #{1 <= i <= n : |t_i| <= 1/2} along F; Theorem2 mode, |t| <= 1/2.
std::uint64_t return_function(const SkewSystem& sys, SkewState state, std::uint64_t n);

/// The same count from a recorded trajectory through sum chi_[-1,1](S_i + s_i + 2 t_0).
std::uint64_t return_count_from_decomposition(const Trajectory& tr);

/// sum_i mu[omega_0 = i] * integral(phi_i).
double zero_mean_condition(const SkewSystem& sys);

enum class WalkLattice { Z1, Z3 };

struct RecurrenceResult {
  double frequency = 0.0;
  std::uint64_t returned = 0;
  std::uint64_t replicates = 0;
};

/// Fraction of replicates whose walk is back at the origin at some step
/// 1..steps. Z1: y += theta_0; Z3: coordinate omega_0 in {0,1,2} (uniform)
/// moves by theta_0.
RecurrenceResult recurrence_demo(WalkLattice lattice, std::uint64_t steps, std::uint64_t replicates,
                                 std::uint64_t seed, unsigned threads = 1);

/// Columns step,symbol,x,t,S,s (S, s running sums; Theorem1/2 roofs).
void write_trajectory_csv(std::ostream& os, const Trajectory& tr);

void to_json(nlohmann::json& j, const SkewSystem& sys);
SkewSystem system_from_json(const nlohmann::json& j);

}  // namespace skewlab::skew
