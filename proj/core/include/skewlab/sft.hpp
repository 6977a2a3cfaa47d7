#pragma once

// Shifts of finite type with Markov probabilities.
//
// Coordinates are signed integers; a word always carries the index of its
// first letter. Measures follow the product formulas
//
//   mu[w_n..w_m]        = pi(w_n) p(w_n,w_{n+1}) ... p(w_{m-1},w_m)
//   mu^s[w_i, i>=n-k]   = pi(w_{n-k}) p(...) ... p(w_{n-1},w_n)
//   mu^u[w_i, i<=n+k]   = p(w_n,w_{n+1}) ... p(w_{n+k-1},w_{n+k})

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "skewlab/rng.hpp"

namespace skewlab::sft {

using Symbol = int;
using Word = std::vector<Symbol>;
using Matrix = std::vector<std::vector<double>>;

/// Raised when a word contains a forbidden transition.
class InadmissibleWord : public std::invalid_argument {
 public:
  InadmissibleWord(Symbol from, Symbol to, std::size_t position);

  Symbol from() const noexcept { return from_; }
  Symbol to() const noexcept { return to_; }
  /// Offset of `from` inside the word.
  std::size_t position() const noexcept { return position_; }

 private:
  Symbol from_;
  Symbol to_;
  std::size_t position_;
};

/// Stationary vector of an irreducible stochastic matrix, by power iteration
/// on the lazy chain (P + I)/2 until successive iterates differ by < 1e-14.
std::vector<double> stationary_vector(const Matrix& transitions);

/// Alphabet, irreducible row-stochastic transition matrix and its stationary
/// vector. Construction validates all three.
class SftSpec {
 public:
  SftSpec(Matrix transitions, std::vector<double> pi);

  /// pi computed with stationary_vector().
  static SftSpec from_transitions(Matrix transitions);
  /// Full shift with i.i.d. letters of the given law.
  static SftSpec bernoulli(std::vector<double> probabilities);
  /// Golden-mean shift P = [[1/2,1/2],[1,0]], pi = (2/3,1/3).
  static SftSpec golden_mean();

  int alphabet_size() const noexcept { return static_cast<int>(pi_.size()); }
  double p(Symbol from, Symbol to) const { return transitions_[from][to]; }
  double pi(Symbol s) const { return pi_[s]; }
  const Matrix& transitions() const noexcept { return transitions_; }
  const std::vector<double>& stationary() const noexcept { return pi_; }

  bool allowed(Symbol from, Symbol to) const { return transitions_[from][to] > 0.0; }
  /// True when every row of P equals pi (i.i.d. letters).
  bool is_bernoulli(double tol = 1e-12) const;

  /// Throws InadmissibleWord (or std::out_of_range for unknown letters).
  void check_word(std::span<const Symbol> word) const;
  bool admissible(std::span<const Symbol> word) const;

  friend bool operator==(const SftSpec&, const SftSpec&) = default;

 private:
  Matrix transitions_;
  std::vector<double> pi_;
};

/// [omega_start = symbols[0], ..., omega_{start+L-1} = symbols[L-1]].
struct Cylinder {
  long start = 0;
  Word symbols;

  long end() const { return start + static_cast<long>(symbols.size()) - 1; }
  bool contains(long index, Symbol s) const;
};

/// s-cylinder of length k of the s-set anchored at `anchor`: fixes every
/// coordinate >= anchor - k. Only coordinates anchor-k .. anchor enter the
/// measure, so `word` holds those k+1 letters, oldest first.
struct SCylinder {
  long anchor = 0;
  Word word;

  std::size_t length() const { return word.empty() ? 0 : word.size() - 1; }
  Symbol at(long index) const { return word[static_cast<std::size_t>(index - anchor) + length()]; }
};

/// u-cylinder of length k of the u-set anchored at `anchor`: `word` holds the
/// letters at coordinates anchor .. anchor + k.
struct UCylinder {
  long anchor = 0;
  Word word;

  std::size_t length() const { return word.empty() ? 0 : word.size() - 1; }
};

double cylinder_measure(const SftSpec& spec, const Cylinder& c);
double side_cylinder_measure(const SftSpec& spec, const SCylinder& c);
double side_cylinder_measure(const SftSpec& spec, const UCylinder& c);

/// sigma^{-k} A as an s-cylinder of the s-set anchored at A.anchor: drops
/// the k most recent letters, so the length decreases by k.
SCylinder shift_preimage(const SCylinder& a, std::size_t k);

/// |[mu^s(s^-k A)/mu^s(s^-k B)] / [mu^s(A)/mu^s(B)] - 1| for A, B inside a
/// common s-cylinder of length k. Throws std::invalid_argument otherwise.
double verify_ratio_preservation(const SftSpec& spec, const SCylinder& a, const SCylinder& b,
                                 std::size_t k);

struct RatioPair {
  SCylinder a;
  SCylinder b;
  std::size_t k = 0;
};

/// Random admissible A, B inside one s-cylinder of length k <= k_max: a
/// shared Markov path on anchor-k..anchor, each extended into the past by up
/// to `extra_max` admissible letters. Anchor drawn from -10..10.
RatioPair sample_ratio_pair(const SftSpec& spec, CounterRng& rng, std::size_t k_max, std::size_t extra_max);

/// Lazy forward realization of omega in Omega(P): letter i is drawn from
/// uniform i of a counter-based stream keyed by the seed, so any prefix is
/// reproducible. Holds O(1) state.
class SymbolStream {
 public:
  SymbolStream(SftSpec spec, std::uint64_t seed);

  Symbol next();
  std::size_t position() const noexcept { return position_; }
  std::uint64_t seed() const noexcept { return rng_.seed(); }
  const SftSpec& spec() const noexcept { return spec_; }

  /// First n letters of the stream, regenerated from the seed.
  Word prefix(std::size_t n) const;

 private:
  Symbol draw(const std::vector<double>& law);

  SftSpec spec_;
  CounterRng rng_;
  std::size_t position_ = 0;
  Symbol last_ = -1;
  std::vector<std::vector<double>> row_cdf_;
  std::vector<double> pi_cdf_;
};

/// Next n letters of the stream.
Word sample_symbols(SymbolStream& stream, std::size_t n);

struct DensityDemo {
  std::vector<double> ratios;  // index k = 0..k_max
  bool point_in_target = false;
};

/// mu^s(A ∩ C_k) / mu^s(C_k), C_k the s-cylinder of length k around `point`
/// in the s-set anchored at `anchor`, for A a finite union of cylinders.
/// `point` must cover every coordinate from min(target starts) to
/// max(anchor, target ends); once C_k fixes every target coordinate the
/// ratio is frozen at 0 or 1.
DensityDemo density_convergence_demo(const SftSpec& spec, std::span<const Cylinder> target,
                                     const Cylinder& point, long anchor, std::size_t k_max);

void to_json(nlohmann::json& j, const SftSpec& spec);
SftSpec spec_from_json(const nlohmann::json& j);

}  // namespace skewlab::sft
