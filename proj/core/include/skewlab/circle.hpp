#pragma once

// Circle rotations, zero-mean trigonometric roof functions and their
// Birkhoff sums along rotation orbits.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace skewlab::circle {

/// (p + q sqrt(D)) / r with integer coefficients.
struct QuadraticSurd {
  long long p = 0;
  long long q = 0;
  long long D = 0;
  long long r = 1;

  long double value() const;
  /// True iff q != 0 and D > 0 is not a perfect square.
  bool irrational() const;

  friend bool operator==(const QuadraticSurd&, const QuadraticSurd&) = default;
};

/// A rotation number reduced to [0,1), stored as an unevaluated sum hi + lo of
/// doubles so that frac(n * alpha) stays accurate to ~1e-13 for n <= 1e6.
class RotationNumber {
 public:
  static RotationNumber from_surd(const QuadraticSurd& surd);
  /// Raw floats cannot certify irrationality; see certified_irrational().
  static RotationNumber from_float(double value);
  static RotationNumber golden_mean();    // (sqrt 5 - 1) / 2
  static RotationNumber sqrt2_minus_1();  // sqrt 2 - 1

  double value() const noexcept { return hi_; }
  /// Correction term: alpha = value() + low() to ~1e-19.
  double low() const noexcept { return lo_; }
  bool certified_irrational() const noexcept { return surd_ && surd_->irrational(); }
  /// Set when the number was given as a float (irrationality unverifiable).
  bool float_warning() const noexcept { return !surd_.has_value(); }
  const std::optional<QuadraticSurd>& surd() const noexcept { return surd_; }

  /// frac(n * alpha) with a compensated reduction.
  double frac_multiple(std::uint64_t n) const noexcept;

  friend bool operator==(const RotationNumber& a, const RotationNumber& b) {
    return a.hi_ == b.hi_ && a.lo_ == b.lo_;
  }

 private:
  RotationNumber(double hi, double lo, std::optional<QuadraticSurd> surd)
      : hi_(hi), lo_(lo), surd_(surd) {}

  double hi_;
  double lo_;
  std::optional<QuadraticSurd> surd_;
};

/// x -> frac(x + alpha).
class RotationMap {
 public:
  explicit RotationMap(RotationNumber alpha) : alpha_(alpha) {}

  double operator()(double x) const noexcept;
  /// T^n x, computed as frac(x + frac(n alpha)) rather than by repeated steps.
  double iterate(double x, std::uint64_t n) const noexcept;
  const RotationNumber& alpha() const noexcept { return alpha_; }

 private:
  RotationNumber alpha_;
};

double frac(double x) noexcept;

/// sum_k a_k cos(2 pi k x) + b_k sin(2 pi k x), k = 1..K, plus `offset`.
/// The offset is zero for every roof the theory admits; it exists only to
/// build drifting (non-conservative) configurations on purpose.
struct TrigPoly {
  std::vector<double> a;
  std::vector<double> b;
  double offset = 0.0;

  std::size_t degree() const { return std::max(a.size(), b.size()); }
  double coefficient_a(std::size_t k) const { return k <= a.size() ? a[k - 1] : 0.0; }
  double coefficient_b(std::size_t k) const { return k <= b.size() ? b[k - 1] : 0.0; }
  double operator()(double x) const;
  /// sum_k sqrt(a_k^2 + b_k^2) + |offset|, an upper bound for sup |f|.
  double sup_bound() const;
  /// Integral of f^2 over the circle.
  double square_mean() const;

  friend bool operator==(const TrigPoly&, const TrigPoly&) = default;
};

/// psi(x + alpha) - psi(x).
struct Coboundary {
  TrigPoly psi;
  RotationNumber alpha;
};

class RoofFunction {
 public:
  RoofFunction() = default;
  explicit RoofFunction(TrigPoly poly);
  explicit RoofFunction(Coboundary cob);

  static RoofFunction zero();
  static RoofFunction cosine(double amplitude = 1.0);  // amplitude * cos(2 pi x)

  double operator()(double x) const { return expanded_(x); }
  /// Integral over the circle (structurally 0 unless an offset was set).
  double mean() const noexcept { return expanded_.offset; }
  double square_mean() const { return expanded_.square_mean(); }
  double sup_bound() const { return expanded_.sup_bound(); }
  bool is_zero() const;

  bool is_coboundary() const noexcept { return std::holds_alternative<Coboundary>(repr_); }
  const Coboundary* coboundary() const noexcept { return std::get_if<Coboundary>(&repr_); }
  /// The roof as a trigonometric polynomial (coboundaries expanded).
  const TrigPoly& expanded() const noexcept { return expanded_; }

  /// out[i] = phi(T^i x) for the rotation by alpha; harmonics advance by
  /// complex multiplication and are resynchronised exactly every 64 steps.
  void weights_along_orbit(double x, const RotationNumber& alpha, std::span<double> out) const;

 private:
  std::variant<TrigPoly, Coboundary> repr_{TrigPoly{}};
  TrigPoly expanded_;
};

struct BirkhoffRecord {
  double x = 0.0;
  std::uint64_t n = 0;
  double s = 0.0;
  std::vector<double> weights;  // c_i = phi(T^i x), when requested
};

/// s_n^x = sum_{i<n} phi(T^i x) by direct evaluation.
BirkhoffRecord birkhoff_sum(const RoofFunction& roof, const RotationMap& T, double x,
                            std::uint64_t n, bool keep_weights = false);

/// psi(T^n x) - psi(x).
double telescoped_sum(const Coboundary& cob, double x, std::uint64_t n);

struct SublinearityReport {
  struct Row {
    std::uint64_t n;
    double max_ratio;  // max_x |s_n^x| / sqrt(n)
  };
  std::vector<Row> rows;
  double tolerance = 0.0;
  /// Last ratio below tolerance and not above the first one.
  bool pass = false;
};

SublinearityReport check_sublinearity(const RoofFunction& roof, const RotationMap& T,
                                      std::span<const double> x_grid,
                                      std::span<const std::uint64_t> horizons, double tolerance);

struct SubgroupClass {
  enum class Kind { Trivial, Lattice, FullLine };
  Kind kind = Kind::Trivial;
  double step = 0.0;  // generator d of dZ when kind == Lattice
};

std::string to_string(SubgroupClass::Kind kind);

/// Closed subgroup generated by a finite sample, decided at resolution tol:
/// Trivial if every |v| <= tol, Lattice(d) if a real gcd d > tol (Euclid,
/// stopped once the remainder drops to tol) puts every value within tol of
/// dZ, FullLine otherwise. Steps finer than sqrt(tol * max|v|) count as
/// FullLine.
SubgroupClass classify_subgroup(std::span<const double> values, double tol);

void to_json(nlohmann::json& j, const RotationNumber& alpha);
RotationNumber rotation_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const TrigPoly& poly);
TrigPoly trig_from_json(const nlohmann::json& j);
void to_json(nlohmann::json& j, const RoofFunction& roof);
RoofFunction roof_from_json(const nlohmann::json& j);

}  // namespace skewlab::circle
