#include "skewlab/circle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace skewlab::circle {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kResyncInterval = 64;

bool is_perfect_square(long long d) {
  if (d < 0) return false;
  auto root = static_cast<long long>(std::llround(std::sqrt(static_cast<long double>(d))));
  for (long long c = std::max(0LL, root - 2); c <= root + 2; ++c)
    if (c * c == d) return true;
  return false;
}

TrigPoly expand_coboundary(const Coboundary& cob) {
  TrigPoly out;
  const std::size_t degree = cob.psi.degree();
  out.a.resize(degree);
  out.b.resize(degree);
  for (std::size_t k = 1; k <= degree; ++k) {
    const double beta = kTwoPi * cob.alpha.frac_multiple(k);
    const double a = cob.psi.coefficient_a(k);
    const double b = cob.psi.coefficient_b(k);
    const double c = std::cos(beta);
    const double s = std::sin(beta);
    out.a[k - 1] = a * c + b * s - a;
    out.b[k - 1] = b * c - a * s - b;
  }
  return out;
}

}  // namespace

double frac(double x) noexcept {
  double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

long double QuadraticSurd::value() const {
  if (r == 0) throw std::invalid_argument("QuadraticSurd: r must be non-zero");
  if (D < 0) throw std::invalid_argument("QuadraticSurd: D must be non-negative");
  return (static_cast<long double>(p) + static_cast<long double>(q) * std::sqrt(static_cast<long double>(D))) /
         static_cast<long double>(r);
}

bool QuadraticSurd::irrational() const { return q != 0 && D > 0 && !is_perfect_square(D); }

RotationNumber RotationNumber::from_surd(const QuadraticSurd& surd) {
  long double v = surd.value();
  v -= std::floor(v);
  const double hi = static_cast<double>(v);
  const double lo = static_cast<double>(v - static_cast<long double>(hi));
  return RotationNumber(hi, lo, surd);
}

RotationNumber RotationNumber::from_float(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("RotationNumber: non-finite value");
  return RotationNumber(frac(value), 0.0, std::nullopt);
}

RotationNumber RotationNumber::golden_mean() { return from_surd({-1, 1, 5, 2}); }

RotationNumber RotationNumber::sqrt2_minus_1() { return from_surd({-1, 1, 2, 1}); }

double RotationNumber::frac_multiple(std::uint64_t n) const noexcept {
  const double dn = static_cast<double>(n);
  const double p = dn * hi_;
  const double err = std::fma(dn, hi_, -p);
  double f = p - std::floor(p);
  f += err + dn * lo_;
  return frac(f);
}

double RotationMap::operator()(double x) const noexcept { return frac(x + alpha_.value()); }

double RotationMap::iterate(double x, std::uint64_t n) const noexcept {
  return frac(x + alpha_.frac_multiple(n));
}

double TrigPoly::operator()(double x) const {
  double acc = offset;
  for (std::size_t k = 1; k <= degree(); ++k) {
    const double theta = kTwoPi * frac(static_cast<double>(k) * x);
    acc += coefficient_a(k) * std::cos(theta) + coefficient_b(k) * std::sin(theta);
  }
  return acc;
}

double TrigPoly::sup_bound() const {
  double acc = std::abs(offset);
  for (std::size_t k = 1; k <= degree(); ++k) acc += std::hypot(coefficient_a(k), coefficient_b(k));
  return acc;
}

double TrigPoly::square_mean() const {
  double acc = offset * offset;
  for (std::size_t k = 1; k <= degree(); ++k) {
    const double a = coefficient_a(k);
    const double b = coefficient_b(k);
    acc += 0.5 * (a * a + b * b);
  }
  return acc;
}

RoofFunction::RoofFunction(TrigPoly poly) : repr_(poly), expanded_(std::move(poly)) {}

RoofFunction::RoofFunction(Coboundary cob) : repr_(cob), expanded_(expand_coboundary(cob)) {
  if (cob.psi.offset != 0.0) expanded_.offset = 0.0;  // constants cancel in psi∘T - psi
}

RoofFunction RoofFunction::zero() { return RoofFunction(TrigPoly{}); }

RoofFunction RoofFunction::cosine(double amplitude) { return RoofFunction(TrigPoly{{amplitude}, {}, 0.0}); }

bool RoofFunction::is_zero() const {
  if (expanded_.offset != 0.0) return false;
  for (double v : expanded_.a)
    if (v != 0.0) return false;
  for (double v : expanded_.b)
    if (v != 0.0) return false;
  return true;
}

void RoofFunction::weights_along_orbit(double x, const RotationNumber& alpha,
                                       std::span<double> out) const {
  const std::size_t degree = expanded_.degree();
  if (degree == 0) {
    std::fill(out.begin(), out.end(), expanded_.offset);
    return;
  }
  std::vector<std::complex<double>> z(degree), step(degree);
  for (std::size_t k = 1; k <= degree; ++k)
    step[k - 1] = std::polar(1.0, kTwoPi * alpha.frac_multiple(k));

  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i % kResyncInterval == 0) {
      const double xi = frac(x + alpha.frac_multiple(i));
      for (std::size_t k = 1; k <= degree; ++k)
        z[k - 1] = std::polar(1.0, kTwoPi * frac(static_cast<double>(k) * xi));
    }
    double acc = expanded_.offset;
    for (std::size_t k = 1; k <= degree; ++k) {
      acc += expanded_.coefficient_a(k) * z[k - 1].real() + expanded_.coefficient_b(k) * z[k - 1].imag();
      z[k - 1] *= step[k - 1];
    }
    out[i] = acc;
  }
}

BirkhoffRecord birkhoff_sum(const RoofFunction& roof, const RotationMap& T, double x,
                            std::uint64_t n, bool keep_weights) {
  BirkhoffRecord rec{x, n, 0.0, {}};
  if (keep_weights) rec.weights.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double c = roof(T.iterate(x, i));
    rec.s += c;
    if (keep_weights) rec.weights.push_back(c);
  }
  return rec;
}

double telescoped_sum(const Coboundary& cob, double x, std::uint64_t n) {
  return cob.psi(frac(x + cob.alpha.frac_multiple(n))) - cob.psi(x);
}

SublinearityReport check_sublinearity(const RoofFunction& roof, const RotationMap& T,
                                      std::span<const double> x_grid,
                                      std::span<const std::uint64_t> horizons, double tolerance) {
  if (x_grid.empty()) throw std::invalid_argument("check_sublinearity: empty grid");
  if (horizons.empty()) throw std::invalid_argument("check_sublinearity: no horizons");
  for (std::size_t i = 1; i < horizons.size(); ++i)
    if (horizons[i] <= horizons[i - 1])
      throw std::invalid_argument("check_sublinearity: horizons must increase");

  SublinearityReport report;
  report.tolerance = tolerance;
  std::vector<double> max_abs(horizons.size(), 0.0);
  std::vector<double> weights(horizons.back());
  for (double x : x_grid) {
    roof.weights_along_orbit(x, T.alpha(), weights);
    double s = 0.0;
    std::size_t h = 0;
    for (std::uint64_t i = 0; i < horizons.back(); ++i) {
      s += weights[i];
      if (i + 1 == horizons[h]) {
        max_abs[h] = std::max(max_abs[h], std::abs(s));
        ++h;
      }
    }
  }
  for (std::size_t h = 0; h < horizons.size(); ++h)
    report.rows.push_back({horizons[h], max_abs[h] / std::sqrt(static_cast<double>(horizons[h]))});
  const double first = report.rows.front().max_ratio;
  const double last = report.rows.back().max_ratio;
  report.pass = last <= tolerance && last <= first;
  return report;
}

std::string to_string(SubgroupClass::Kind kind) {
  switch (kind) {
    case SubgroupClass::Kind::Trivial: return "Trivial";
    case SubgroupClass::Kind::Lattice: return "Lattice";
    case SubgroupClass::Kind::FullLine: return "FullLine";
  }
  return "?";
}

SubgroupClass classify_subgroup(std::span<const double> values, double tol) {
  if (values.empty()) throw std::invalid_argument("classify_subgroup: empty sample");
  if (!(tol > 0.0)) throw std::invalid_argument("classify_subgroup: tol must be positive");

  std::vector<double> mags;
  for (double v : values)
    if (std::abs(v) > tol) mags.push_back(std::abs(v));
  if (mags.empty()) return {SubgroupClass::Kind::Trivial, 0.0};

  // Real Euclid with remainders snapped to zero within tol.
  auto rgcd = [tol](double a, double b) {
    if (a < b) std::swap(a, b);
    while (b > tol) {
      double r = std::fmod(a, b);
      if (r < tol || b - r < tol) r = 0.0;
      a = b;
      b = r;
    }
    return a;
  };
  double d = mags.front();
  for (std::size_t i = 1; i < mags.size() && d > tol; ++i) d = rgcd(d, mags[i]);
  // Steps below sqrt(tol * max|v|) cannot be told apart from a dense subgroup.
  const double scale = *std::max_element(mags.begin(), mags.end());
  if (d <= tol || d < std::sqrt(tol * scale)) return {SubgroupClass::Kind::FullLine, 0.0};

  // Refit the step against all multiples, then verify membership in dZ.
  double num = 0.0;
  double den = 0.0;
  for (double v : values) {
    const double m = std::round(v / d);
    num += m * v;
    den += m * m;
  }
  if (den > 0.0) d = num / den;
  for (double v : values)
    if (std::abs(v - std::round(v / d) * d) > tol) return {SubgroupClass::Kind::FullLine, 0.0};
  return {SubgroupClass::Kind::Lattice, d};
}

void to_json(nlohmann::json& j, const RotationNumber& alpha) {
  if (alpha.surd())
    j = nlohmann::json{{"p", alpha.surd()->p}, {"q", alpha.surd()->q}, {"D", alpha.surd()->D}, {"r", alpha.surd()->r}};
  else
    j = nlohmann::json{{"float", alpha.value()}};
}

RotationNumber rotation_from_json(const nlohmann::json& j) {
  if (j.contains("float")) return RotationNumber::from_float(j.at("float").get<double>());
  QuadraticSurd s;
  s.p = j.value("p", 0LL);
  s.q = j.value("q", 0LL);
  s.D = j.value("D", 0LL);
  s.r = j.value("r", 1LL);
  return RotationNumber::from_surd(s);
}

void to_json(nlohmann::json& j, const TrigPoly& poly) {
  j = nlohmann::json{{"type", "trig"}, {"a", poly.a}, {"b", poly.b}};
  if (poly.offset != 0.0) j["offset"] = poly.offset;
}

TrigPoly trig_from_json(const nlohmann::json& j) {
  TrigPoly p;
  p.a = j.value("a", std::vector<double>{});
  p.b = j.value("b", std::vector<double>{});
  p.offset = j.value("offset", 0.0);
  return p;
}

void to_json(nlohmann::json& j, const RoofFunction& roof) {
  if (const auto* cob = roof.coboundary()) {
    j = nlohmann::json{{"type", "coboundary"}, {"psi", cob->psi}, {"alpha", cob->alpha}};
  } else {
    j = roof.expanded();
  }
}

RoofFunction roof_from_json(const nlohmann::json& j) {
  const auto type = j.at("type").get<std::string>();
  if (type == "trig") return RoofFunction(trig_from_json(j));
  if (type == "coboundary")
    return RoofFunction(Coboundary{trig_from_json(j.at("psi")), rotation_from_json(j.at("alpha"))});
  throw std::invalid_argument("roof type must be \"trig\" or \"coboundary\", got \"" + type + "\"");
}

}  // namespace skewlab::circle
