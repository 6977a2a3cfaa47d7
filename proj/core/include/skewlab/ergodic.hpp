#pragma once

// Return statistics of the height coordinate and limit-law checks for the
// martingale part of the Birkhoff sums.
//
// A WalkModel describes the height process seen along one base point x:
//   t_{i+1} = t_i + c_i (drift + spread X_i),  X_i = 2 omega_i - 1,
// with c_i = phi(T^i x). A Theorem2 system has drift = spread = 1/2; the
// simple-walk surrogate has c_i = 1, drift 0, spread 1. Replicate r uses the
// letter stream seeded by derive_seed(seed, r) and draws (x, t) from stream 1
// of the same seed, so results do not depend on the worker count.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skewlab/skew.hpp"

namespace skewlab::ergodic {

class WalkModel {
 public:
  /// Requires a Theorem2-mode system.
  static WalkModel theorem2(const skew::SkewSystem& sys);
  static WalkModel simple_walk();

  /// c_i for i < out.size() along the orbit of x.
  void weights(double x, std::span<double> out) const;
  /// Base point after i fiber steps.
  double advance(double x, std::uint64_t i) const;

  double drift() const noexcept { return drift_; }
  double spread() const noexcept { return spread_; }
  /// spread * sqrt(mean of c^2); 1/(2 sqrt 2) for phi = cos 2 pi x.
  double sigma_eff() const;
  const sft::SftSpec& base() const noexcept { return base_; }
  bool is_simple_walk() const noexcept { return !system_.has_value(); }
  std::string name() const;

 private:
  WalkModel(sft::SftSpec base, std::optional<skew::SkewSystem> sys, double drift, double spread);

  sft::SftSpec base_;
  std::optional<skew::SkewSystem> system_;
  double drift_;
  double spread_;
};

struct ReturnStats {
  std::uint64_t n = 0;
  double mean_R = 0.0;
  double se_R = 0.0;
  double mean_R2 = 0.0;
  double se_R2 = 0.0;
  double renyi = 0.0;  // mean_R2 / mean_R^2
};

/// R_n = #{1 <= i <= n : |t_i| <= 1/2} with x uniform and t uniform on
/// [-1/2, 1/2]; one simulated path per replicate serves every horizon.
std::vector<ReturnStats> estimate_return_stats(const WalkModel& model, std::span<const std::uint64_t> horizons,
                                               std::uint64_t replicates, std::uint64_t seed,
                                               unsigned threads = 1);

struct ReturnSequence {
  struct Row {
    std::uint64_t n;
    double a;
    double se;
  };
  std::vector<Row> rows;
  bool fitted = false;  // needs three horizons >= fit_from
  std::uint64_t fit_from = 0;
  double exponent = 0.0;
  double constant = 0.0;  // a_n ~ constant * n^exponent
};

/// a_n = mean of R_n (the return set has measure 1), with a log-log fit
/// over horizons n >= min_fit_n.
ReturnSequence return_sequence(const WalkModel& model, std::span<const std::uint64_t> horizons,
                               std::uint64_t replicates, std::uint64_t seed, unsigned threads = 1,
                               std::uint64_t min_fit_n = 1024);

/// Second estimator of a_n: sum over i of P[|t_i| <= 1/2], where each step's
/// hit probability is integrated over t exactly, (1 - |H_i|)^+ for height
/// increment H_i, and averaged over replicates. Same fit rule.
ReturnSequence hit_probability_sequence(const WalkModel& model, std::span<const std::uint64_t> horizons,
                                        std::uint64_t replicates, std::uint64_t seed, unsigned threads = 1,
                                        std::uint64_t min_fit_n = 1024);

/// Fits an existing table (used by both estimators).
void fit_return_sequence(ReturnSequence& seq, std::uint64_t min_fit_n);

/// Exact a_n for the simple-walk surrogate: sum_{i <= n} P[S_i = 0].
ReturnSequence simple_walk_return_sequence(std::span<const std::uint64_t> horizons,
                                           std::uint64_t min_fit_n = 1024);

struct CltReport {
  std::uint64_t n = 0;
  std::uint64_t samples = 0;
  double sigma_eff = 0.0;
  double ks = 0.0;
  double mean_drift_ratio = 0.0;  // mean |s_n| / sqrt(n) over the samples
};

/// Kolmogorov-Smirnov distance of spread * S_n / (sigma_eff sqrt n) to N(0,1).
CltReport clt_check(const WalkModel& model, std::uint64_t n, std::uint64_t samples, std::uint64_t seed,
                    unsigned threads = 1);

struct FcltReport {
  std::uint64_t n = 0;
  std::uint64_t paths = 0;
  std::vector<double> mesh;
  std::vector<std::vector<double>> covariance;  // empirical, mesh x mesh
  double max_error = 0.0;                       // max |cov(s,u) - min(s,u)|
};

/// W_n(s) = (H_{floor(sn)} - drift * s_n * s) / (sigma_eff sqrt n), H the height increment.
FcltReport fclt_check(const WalkModel& model, std::uint64_t n, std::uint64_t paths, std::span<const double> mesh,
                      std::uint64_t seed, unsigned threads = 1);

struct IndependenceReport {
  std::uint64_t i = 0;
  std::uint64_t j = 0;
  std::uint64_t samples = 0;
  double max_residual = 0.0;  // |S_j - S_i - S_{j-i}(shifted)| over samples
  double correlation = 0.0;
  double bound = 0.0;         // 4 / sqrt(samples)
  bool pass = false;
};

/// Splits S_j at i: the head uses letters 0..i-1 from x, the tail is
/// recomputed from the shifted base point with letters i..j-1.
IndependenceReport independence_decomposition_check(const WalkModel& model, std::uint64_t i, std::uint64_t j,
                                                    std::uint64_t samples, std::uint64_t seed,
                                                    unsigned threads = 1);

}  // namespace skewlab::ergodic
