#pragma once

// The law of S_n = c_0 X_0 + ... + c_{n-1} X_{n-1}, X_i fair independent signs,
// by exact enumeration, by Fourier bracketing and by Monte Carlo, and the
// checks built on top of it (Gaussian sandwich of the characteristic
// function, exponential decay away from 0, local limit scans).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skewlab/window.hpp"

namespace skewlab::skew {
class SkewSystem;
}

namespace skewlab::dist {

class WeightedSignSum {
 public:
  explicit WeightedSignSum(std::vector<double> weights);

  std::span<const double> weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return weights_.size(); }
  /// C = max |c_i|.
  double sup_abs() const noexcept { return sup_abs_; }
  double sum() const;
  double sum_squares() const;

 private:
  std::vector<double> weights_;
  double sup_abs_ = 0.0;
};

/// The event S + shift in [lo, hi], i.e. S in [lo, hi] - shift (closed).
struct IntervalQuery {
  double lo = -1.0;
  double hi = 1.0;
  double shift = 0.0;
};

inline constexpr std::size_t kMaxEnumeratedWeights = 40;

/// Exact probability. n <= 40: meet-in-the-middle enumeration. Larger n is
/// accepted only for commensurable weights (integer-lattice dynamic
/// program); otherwise throws std::domain_error.
double exact_prob(const WeightedSignSum& w, const IntervalQuery& q);

/// Sort one half's 2^(n/2) sums, binary-search the other half against it.
double meet_in_middle_prob(const WeightedSignSum& w, const IntervalQuery& q);

/// Weights as integer multiples of a common step.
struct LatticeForm {
  double step = 1.0;
  std::vector<long long> multiples;

  long long span() const;  // sum |k_i|
};

/// Present when every weight lies within tol * max(1, C) of step * Z.
std::optional<LatticeForm> lattice_form(const WeightedSignSum& w, double tol = 1e-9);

/// Law of sum k_i X_i: entry j is P[sum = j - span()].
std::vector<double> lattice_pmf(const LatticeForm& form);
double lattice_prob(const LatticeForm& form, const IntervalQuery& q);

/// For the simple walk (all weights 1): P[S_i = 0] for i = 1..n.
std::vector<double> simple_walk_zero_probabilities(std::size_t n);

/// phi_S(t) = prod_i cos(c_i t).
double char_function(const WeightedSignSum& w, double t);

struct Bracket {
  double lower = 0.0;
  double upper = 0.0;
  bool resolution_failure = false;
};

/// Rescales the query to [-1,1] and evaluates E[g(Y)], E[h(Y)] as
/// int g^(t) phi_Y(t) dt with composite Simpson on `nodes` intervals
/// (a multiple of 4). Flags a resolution failure when halving the node
/// count moves either bound by more than 1e-6 or lower > upper.
Bracket fourier_bracket(const WeightedSignSum& w, const IntervalQuery& q,
                        const WindowPair& pair = WindowPair::fejer_default(), std::size_t nodes = 4096);

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

/// Frequency estimate with SE = sqrt(p(1-p)/samples).
Estimate monte_carlo_prob(const WeightedSignSum& w, const IntervalQuery& q, std::uint64_t samples,
                          std::uint64_t seed, unsigned threads = 1);

/// Monte Carlo engine for partial sums of sum c_i X_i. Signs come in bytes:
/// each 8-weight block has a 256-entry table of its signed sums, and
/// sample s draws the bytes of blocks 16g..16g+15 from one Philox call
/// keyed by the seed with counter (s, g). Outputs depend only on
/// (weights, seed, sample index).
class SignSumSampler {
 public:
  explicit SignSumSampler(std::span<const double> weights);

  std::size_t size() const noexcept { return n_; }

  /// result[h][s] = sum_{i < horizons[h]} c_i X_i^(s); horizons increasing, <= size().
  std::vector<std::vector<double>> partial_sums(std::span<const std::size_t> horizons,
                                                std::uint64_t samples, std::uint64_t seed,
                                                unsigned threads = 1) const;

  /// The sign X_i of sample s, for reference implementations.
  static int sign(std::uint64_t seed, std::uint64_t sample, std::size_t i);

 private:
  std::size_t n_;
  std::vector<double> weights_;
  std::vector<double> tables_;  // blocks x 256
};

/// Weights c_i = phi(T^i x), i < n, of a Theorem1/Theorem2 system.
std::vector<double> orbit_weights(const skew::SkewSystem& sys, double x, std::size_t n);

/// x_j = j / count.
std::vector<double> uniform_grid(std::size_t count);

// --- Gaussian sandwich of the characteristic function ---------------------

/// Number of points of the even t-grid (t_points points on [-delta sqrt n,
/// delta sqrt n]) where exp(-a t^2) <= phi_S(t/sqrt n) <= exp(-b t^2) fails.
std::size_t gaussian_bracket_violations(std::span<const double> weights, double delta, double a,
                                        double b, std::size_t t_points = 1000);

struct GaussianBracketReport {
  struct Row {
    double x;
    std::uint64_t n;
    std::size_t violations;  // at delta_used
  };
  double a = 0.0;  // 4 int phi^2
  double b = 0.0;  // int phi^2 / 16
  double delta_requested = 0.0;
  double delta_used = 0.0;  // requested delta, or the bisected one if it failed
  bool bisected = false;
  std::vector<Row> rows;
  std::size_t violations_at_requested = 0;
  std::size_t total_violations = 0;
  std::uint64_t n0 = 0;  // smallest listed n from which the requested delta passes
  bool pass = false;
};

GaussianBracketReport verify_gaussian_bracket(const skew::SkewSystem& sys, std::span<const double> x_grid,
                                              std::span<const std::uint64_t> n_list, double delta,
                                              std::size_t t_points = 1000, unsigned threads = 1);

// --- Exponential decay on a band delta < |t| < Delta ----------------------

/// max over the band grid of |phi_S(t)|^(1/n).
double decay_rate(std::span<const double> weights, double delta, double Delta, std::size_t t_points = 1000);

struct DecayBandReport {
  struct Row {
    double x;
    std::uint64_t n;
    double lambda_hat;
  };
  double delta = 0.0;
  double Delta = 0.0;
  double threshold = 0.0;
  std::vector<Row> rows;
  std::vector<double> max_by_n;  // per listed n
  double lambda_star = 0.0;       // max lambda_hat over n >= n0
  std::uint64_t n0 = 0;
  bool decreasing = false;        // max_by_n strictly decreasing
  bool lattice_period_in_band = false;
  bool pass = false;
};

DecayBandReport verify_decay_band(const skew::SkewSystem& sys, std::span<const double> x_grid,
                                  std::span<const std::uint64_t> n_list, double delta = 0.5,
                                  double Delta = 3.0, double threshold = 0.999,
                                  std::size_t t_points = 1000, unsigned threads = 1);

/// True when commensurable weights have a full period pi/step inside (delta, Delta).
bool lattice_period_in_band(std::span<const double> weights, double delta, double Delta);

// --- Local limit scans ----------------------------------------------------

struct LltScanOptions {
  double half_width = 1.0;
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::uint64_t stable_from = 4096;  // spread is measured over n >= stable_from
  double spread_limit = 2.0;
  double sublinearity_tolerance = 0.05;
};

struct LltScanReport {
  struct Row {
    double x;
    std::uint64_t n;
    double scaled;  // sqrt(n) * P^[S_n in [-t,t] - s_n]
    double se;
    double drift;   // s_n^x
  };
  std::vector<Row> rows;
  double k_min = 0.0;
  double k_max = 0.0;
  double k_hat = 0.0;       // max(k_max, 1/k_min)
  double max_spread = 0.0;  // max over x of max/min over n >= stable_from
  bool pass = false;
  std::optional<std::string> warning;
};

LltScanReport llt_constant_scan(const skew::SkewSystem& sys, std::span<const double> x_grid,
                                std::span<const std::uint64_t> n_list, const LltScanOptions& opts = {});

struct WeakLltReport {
  struct Row {
    std::uint64_t n;
    double value;  // sqrt(2 pi n) * sigma_n * P^[S_n in [a,b] - s_n]
    double se;
    double sigma_bar;  // sqrt(mean c_i^2)
  };
  std::vector<Row> rows;
  double target = 0.0;  // b - a
  double relative_gap = 0.0;
  bool lattice = false;  // limit formula inapplicable pointwise
};

/// `drifts[h]` is the moving target s_n for n = n_list[h] (empty: none).
WeakLltReport weak_llt_check(std::span<const double> weights, std::span<const double> drifts,
                             std::span<const std::uint64_t> n_list, double a, double b,
                             std::uint64_t samples, std::uint64_t seed, unsigned threads = 1);

/// Weights along the orbit of x with the Birkhoff sum s_n^x as moving target.
WeakLltReport weak_llt_check(const skew::SkewSystem& sys, double x, std::span<const std::uint64_t> n_list,
                             double a, double b, std::uint64_t samples, std::uint64_t seed,
                             unsigned threads = 1);

}  // namespace skewlab::dist
