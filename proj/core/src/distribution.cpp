#include "skewlab/distribution.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "skewlab/circle.hpp"
#include "skewlab/parallel.hpp"
#include "skewlab/rng.hpp"
#include "skewlab/skew.hpp"

namespace skewlab::dist {
namespace {

constexpr std::size_t kBlockBits = 8;
constexpr std::size_t kBlockTable = 256;
constexpr std::size_t kBlocksPerDraw = 16;  // 16 bytes per Philox block
constexpr std::uint32_t kSignStreamTag = 0x5157u;
constexpr long long kMaxLatticeSpan = 50'000'000;

// Enumerates all 2^m signed sums of the weights.
std::vector<double> signed_sums(std::span<const double> weights) {
  std::vector<double> sums{0.0};
  sums.reserve(std::size_t{1} << weights.size());
  for (double c : weights) {
    const std::size_t m = sums.size();
    for (std::size_t i = 0; i < m; ++i) {
      sums.push_back(sums[i] + c);
      sums[i] -= c;
    }
  }
  return sums;
}

// log|prod cos(c_i u)| and its sign, with periodic renormalisation.
struct LogCos {
  double log_abs;
  int sign;
};

LogCos log_cos_product(std::span<const double> weights, double u) {
  double prod = 1.0;
  double log_acc = 0.0;
  for (double c : weights) {
    prod *= std::cos(c * u);
    if (std::abs(prod) < 1e-150) {
      if (prod == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
      log_acc += std::log(std::abs(prod));
      prod = prod < 0.0 ? -1.0 : 1.0;
    }
  }
  return {log_acc + std::log(std::abs(prod)), prod < 0.0 ? -1 : 1};
}

std::size_t sandwich_violations(std::span<const double> weights, double delta, double a, double b,
                                std::size_t t_points, bool stop_at_first) {
  const double root_n = std::sqrt(static_cast<double>(weights.size()));
  const double half = delta * root_n;
  constexpr double kLogTol = 1e-12;
  std::size_t count = 0;
  // The grid and both bounds are even in t; visit each mirrored pair once.
  for (std::size_t j = t_points / 2; j < t_points; ++j) {
    const double t = t_points == 1 ? 0.0 : -half + 2.0 * half * static_cast<double>(j) / static_cast<double>(t_points - 1);
    const LogCos phi = log_cos_product(weights, t / root_n);
    const bool lower_fails = phi.sign <= 0 || phi.log_abs < -a * t * t - kLogTol;
    const bool upper_fails = phi.sign > 0 && phi.log_abs > -b * t * t + kLogTol;
    if (lower_fails || upper_fails) {
      const std::size_t mult = (t_points % 2 == 1 && j == t_points / 2) ? 1 : 2;
      count += mult;
      if (stop_at_first) return count;
    }
  }
  return count;
}

void require_increasing(std::span<const std::uint64_t> n_list, const char* what) {
  if (n_list.empty()) throw std::invalid_argument(std::string(what) + ": empty horizon list");
  if (n_list.front() == 0) throw std::invalid_argument(std::string(what) + ": horizons must be positive");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw std::invalid_argument(std::string(what) + ": horizons must increase");
}

}  // namespace

WeightedSignSum::WeightedSignSum(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw std::invalid_argument("WeightedSignSum: need at least one weight");
  for (double c : weights_) {
    if (!std::isfinite(c)) throw std::invalid_argument("WeightedSignSum: non-finite weight");
    sup_abs_ = std::max(sup_abs_, std::abs(c));
  }
}

double WeightedSignSum::sum() const {
  double acc = 0.0;
  for (double c : weights_) acc += c;
  return acc;
}

double WeightedSignSum::sum_squares() const {
  double acc = 0.0;
  for (double c : weights_) acc += c * c;
  return acc;
}

double meet_in_middle_prob(const WeightedSignSum& w, const IntervalQuery& q) {
  if (w.size() > kMaxEnumeratedWeights)
    throw std::domain_error("meet_in_middle_prob: more than 40 weights");
  if (q.lo > q.hi) return 0.0;
  const auto all = w.weights();
  const std::size_t half = all.size() / 2;
  std::vector<double> left = signed_sums(all.first(half));
  const std::vector<double> right = signed_sums(all.subspan(half));
  std::sort(left.begin(), left.end());
  const double lo = q.lo - q.shift;
  const double hi = q.hi - q.shift;
  std::uint64_t hits = 0;
  for (double r : right) {
    const auto first = std::lower_bound(left.begin(), left.end(), lo - r);
    const auto last = std::upper_bound(first, left.end(), hi - r);
    hits += static_cast<std::uint64_t>(last - first);
  }
  return std::ldexp(static_cast<double>(hits), -static_cast<int>(all.size()));
}

long long LatticeForm::span() const {
  long long s = 0;
  for (long long k : multiples) s += k < 0 ? -k : k;
  return s;
}

std::optional<LatticeForm> lattice_form(const WeightedSignSum& w, double tol) {
  const double scaled_tol = tol * std::max(1.0, w.sup_abs());
  const auto cls = circle::classify_subgroup(w.weights(), scaled_tol);
  if (cls.kind == circle::SubgroupClass::Kind::FullLine) return std::nullopt;
  LatticeForm form;
  if (cls.kind == circle::SubgroupClass::Kind::Trivial) {
    form.step = 1.0;
    form.multiples.assign(w.size(), 0);
    return form;
  }
  form.step = cls.step;
  form.multiples.reserve(w.size());
  for (double c : w.weights()) form.multiples.push_back(std::llround(c / cls.step));
  if (form.span() > kMaxLatticeSpan) return std::nullopt;
  return form;
}

std::vector<double> lattice_pmf(const LatticeForm& form) {
  const long long span = form.span();
  if (span > kMaxLatticeSpan) throw std::domain_error("lattice_pmf: lattice span too large");
  std::vector<double> pmf(static_cast<std::size_t>(2 * span + 1), 0.0);
  std::vector<double> next(pmf.size(), 0.0);
  const long long center = span;
  pmf[static_cast<std::size_t>(center)] = 1.0;
  long long reach = 0;  // support is within center +- reach
  for (long long k : form.multiples) {
    k = k < 0 ? -k : k;
    if (k == 0) continue;
    const long long new_reach = reach + k;
    std::fill(next.begin() + (center - new_reach), next.begin() + (center + new_reach + 1), 0.0);
    for (long long j = center - reach; j <= center + reach; ++j) {
      const double p = 0.5 * pmf[static_cast<std::size_t>(j)];
      if (p == 0.0) continue;
      next[static_cast<std::size_t>(j - k)] += p;
      next[static_cast<std::size_t>(j + k)] += p;
    }
    pmf.swap(next);
    reach = new_reach;
  }
  return pmf;
}

double lattice_prob(const LatticeForm& form, const IntervalQuery& q) {
  if (q.lo > q.hi) return 0.0;
  const auto pmf = lattice_pmf(form);
  const long long span = form.span();
  double acc = 0.0;
  for (long long j = -span; j <= span; ++j) {
    const double v = static_cast<double>(j) * form.step + q.shift;
    if (v >= q.lo && v <= q.hi) acc += pmf[static_cast<std::size_t>(j + span)];
  }
  return acc;
}

std::vector<double> simple_walk_zero_probabilities(std::size_t n) {
  // pmf over positions -n..n, advanced one +-1 step at a time.
  std::vector<double> pmf(2 * n + 3, 0.0), next(pmf.size(), 0.0);
  const std::size_t center = n + 1;
  pmf[center] = 1.0;
  std::vector<double> zero(n, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = center - i; j <= center + i; ++j) next[j] = 0.5 * (pmf[j - 1] + pmf[j + 1]);
    next[center - i - 1] = 0.0;
    pmf.swap(next);
    zero[i - 1] = pmf[center];
  }
  return zero;
}

double exact_prob(const WeightedSignSum& w, const IntervalQuery& q) {
  if (w.size() <= kMaxEnumeratedWeights) return meet_in_middle_prob(w, q);
  if (auto form = lattice_form(w)) return lattice_prob(*form, q);
  throw std::domain_error(
      "exact_prob: more than 40 incommensurable weights; use fourier_bracket or monte_carlo_prob");
}

double char_function(const WeightedSignSum& w, double t) {
  double prod = 1.0;
  for (double c : w.weights()) prod *= std::cos(c * t);
  return prod;
}

Bracket fourier_bracket(const WeightedSignSum& w, const IntervalQuery& q, const WindowPair& pair,
                        std::size_t nodes) {
  if (!(q.hi > q.lo)) throw std::invalid_argument("fourier_bracket: need a non-degenerate interval");
  if (nodes < 8 || nodes % 4 != 0) throw std::invalid_argument("fourier_bracket: nodes must be a multiple of 4");
  const double center = 0.5 * (q.lo + q.hi);
  const double radius = 0.5 * (q.hi - q.lo);
  const double offset = (q.shift - center) / radius;
  std::vector<double> scaled(w.weights().begin(), w.weights().end());
  for (double& c : scaled) c /= radius;

  auto phi = [&](double t) {
    double prod = std::cos(offset * t);
    for (double c : scaled) prod *= std::cos(c * t);
    return prod;
  };
  // 2 * int_0^L f(t) phi(t) dt for even integrands, composite Simpson.
  auto integrate = [&](auto&& transform, double support, std::size_t intervals) {
    const double h = support / static_cast<double>(intervals);
    double acc = transform(0.0) * phi(0.0);
    for (std::size_t i = 1; i < intervals; ++i) {
      const double t = h * static_cast<double>(i);
      acc += (i % 2 == 1 ? 4.0 : 2.0) * transform(t) * phi(t);
    }
    return 2.0 * h / 3.0 * acc;  // transform vanishes at the support end
  };
  auto g_hat = [&](double t) { return pair.lower_transform(t); };
  auto h_hat = [&](double t) { return pair.upper_transform(t); };

  Bracket out;
  out.lower = integrate(g_hat, pair.lower_support(), nodes / 2);
  out.upper = integrate(h_hat, pair.upper_support(), nodes / 2);
  const double coarse_lower = integrate(g_hat, pair.lower_support(), nodes / 4);
  const double coarse_upper = integrate(h_hat, pair.upper_support(), nodes / 4);
  out.resolution_failure = out.lower > out.upper + 1e-12 || std::abs(out.lower - coarse_lower) > 1e-6 ||
                           std::abs(out.upper - coarse_upper) > 1e-6;
  return out;
}

SignSumSampler::SignSumSampler(std::span<const double> weights)
    : n_(weights.size()), weights_(weights.begin(), weights.end()) {
  if (n_ == 0) throw std::invalid_argument("SignSumSampler: need at least one weight");
  const std::size_t blocks = (n_ + kBlockBits - 1) / kBlockBits;
  tables_.assign(blocks * kBlockTable, 0.0);
  for (std::size_t b = 0; b < blocks; ++b) {
    double* table = tables_.data() + b * kBlockTable;
    double base = 0.0;
    for (std::size_t j = 0; j < kBlockBits && b * kBlockBits + j < n_; ++j) base -= weights_[b * kBlockBits + j];
    table[0] = base;
    for (std::size_t m = 1; m < kBlockTable; ++m) {
      const std::size_t low = static_cast<std::size_t>(std::countr_zero(static_cast<unsigned>(m)));
      const std::size_t i = b * kBlockBits + low;
      table[m] = table[m & (m - 1)] + (i < n_ ? 2.0 * weights_[i] : 0.0);
    }
  }
}

int SignSumSampler::sign(std::uint64_t seed, std::uint64_t sample, std::size_t i) {
  const std::size_t block = i / kBlockBits;
  const std::size_t group = block / kBlocksPerDraw;
  const Counter4 r = philox4x32({static_cast<std::uint32_t>(sample), static_cast<std::uint32_t>(sample >> 32),
                                 static_cast<std::uint32_t>(group), kSignStreamTag},
                                key_from_seed(seed));
  const std::size_t byte_index = block % kBlocksPerDraw;
  const std::uint32_t byte = (r[byte_index / 4] >> (8 * (byte_index % 4))) & 0xFFu;
  return ((byte >> (i % kBlockBits)) & 1u) ? 1 : -1;
}

std::vector<std::vector<double>> SignSumSampler::partial_sums(std::span<const std::size_t> horizons,
                                                              std::uint64_t samples, std::uint64_t seed,
                                                              unsigned threads) const {
  for (std::size_t h = 0; h < horizons.size(); ++h) {
    if (horizons[h] == 0 || horizons[h] > n_)
      throw std::invalid_argument("SignSumSampler: horizon outside 1..size()");
    if (h > 0 && horizons[h] <= horizons[h - 1])
      throw std::invalid_argument("SignSumSampler: horizons must increase");
  }
  const std::size_t last = horizons.empty() ? 0 : horizons.back();
  const std::size_t blocks = (last + kBlockBits - 1) / kBlockBits;
  const std::size_t groups = (blocks + kBlocksPerDraw - 1) / kBlocksPerDraw;

  // Horizons ending inside a block read a table over its first r weights.
  struct Event {
    std::size_t horizon;
    const double* partial;  // null: read the accumulator after the full block
  };
  std::vector<std::vector<Event>> before(blocks), after(blocks);
  std::vector<std::vector<double>> partial_tables;
  partial_tables.reserve(horizons.size());
  for (std::size_t h = 0; h < horizons.size(); ++h) {
    const std::size_t b = (horizons[h] - 1) / kBlockBits;
    const std::size_t r = horizons[h] - b * kBlockBits;
    if (r == kBlockBits) {
      after[b].push_back({h, nullptr});
      continue;
    }
    std::vector<double> table(kBlockTable);
    for (std::size_t m = 0; m < kBlockTable; ++m) {
      double acc = 0.0;
      for (std::size_t j = 0; j < r; ++j) acc += ((m >> j) & 1u) ? weights_[b * kBlockBits + j] : -weights_[b * kBlockBits + j];
      table[m] = acc;
    }
    partial_tables.push_back(std::move(table));
    before[b].push_back({h, partial_tables.back().data()});
  }

  std::vector<std::vector<double>> out(horizons.size(), std::vector<double>(samples, 0.0));
  const Key2 key = key_from_seed(seed);
  parallel_for(samples, threads, [&](std::size_t s0, std::size_t s1) {
    std::vector<double> acc(s1 - s0, 0.0);
    for (std::size_t g = 0; g < groups; ++g) {
      const std::size_t b0 = g * kBlocksPerDraw;
      const std::size_t b1 = std::min(blocks, b0 + kBlocksPerDraw);
      for (std::size_t s = s0; s < s1; ++s) {
        const Counter4 r = philox4x32({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(std::uint64_t{s} >> 32),
                                       static_cast<std::uint32_t>(g), kSignStreamTag},
                                      key);
        double a = acc[s - s0];
        for (std::size_t b = b0; b < b1; ++b) {
          const std::size_t byte_index = b - b0;
          const std::uint32_t byte = (r[byte_index / 4] >> (8 * (byte_index % 4))) & 0xFFu;
          for (const Event& e : before[b]) out[e.horizon][s] = a + e.partial[byte];
          a += tables_[b * kBlockTable + byte];
          for (const Event& e : after[b]) out[e.horizon][s] = a;
        }
        acc[s - s0] = a;
      }
    }
  });
  return out;
}

Estimate monte_carlo_prob(const WeightedSignSum& w, const IntervalQuery& q, std::uint64_t samples,
                          std::uint64_t seed, unsigned threads) {
  if (samples == 0) throw std::invalid_argument("monte_carlo_prob: samples must be positive");
  const SignSumSampler sampler(w.weights());
  const std::size_t horizon = w.size();
  const auto sums = sampler.partial_sums(std::span(&horizon, 1), samples, seed, threads);
  std::uint64_t hits = 0;
  for (double s : sums[0]) {
    const double v = s + q.shift;
    if (v >= q.lo && v <= q.hi) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(samples);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

std::vector<double> orbit_weights(const skew::SkewSystem& sys, double x, std::size_t n) {
  std::vector<double> out(n);
  sys.roof().weights_along_orbit(x, sys.rotation(), out);
  return out;
}

std::vector<double> uniform_grid(std::size_t count) {
  std::vector<double> grid(count);
  for (std::size_t j = 0; j < count; ++j) grid[j] = static_cast<double>(j) / static_cast<double>(count);
  return grid;
}

std::size_t gaussian_bracket_violations(std::span<const double> weights, double delta, double a, double b,
                                        std::size_t t_points) {
  return sandwich_violations(weights, delta, a, b, t_points, false);
}

GaussianBracketReport verify_gaussian_bracket(const skew::SkewSystem& sys, std::span<const double> x_grid,
                                              std::span<const std::uint64_t> n_list, double delta,
                                              std::size_t t_points, unsigned threads) {
  if (!(delta > 0.0)) throw std::invalid_argument("verify_gaussian_bracket: delta must be positive");
  require_increasing(n_list, "verify_gaussian_bracket");
  if (x_grid.empty()) throw std::invalid_argument("verify_gaussian_bracket: empty x grid");

  GaussianBracketReport rep;
  const double l2 = sys.roof().square_mean();
  rep.a = 4.0 * l2;
  rep.b = l2 / 16.0;
  rep.delta_requested = delta;

  std::vector<std::vector<double>> weights(x_grid.size());
  for (std::size_t j = 0; j < x_grid.size(); ++j) weights[j] = orbit_weights(sys, x_grid[j], n_list.back());

  auto count_grid = [&](double d, bool stop_at_first) {
    std::vector<std::size_t> counts(x_grid.size() * n_list.size(), 0);
    parallel_for(x_grid.size(), threads, [&](std::size_t j0, std::size_t j1) {
      for (std::size_t j = j0; j < j1; ++j)
        for (std::size_t h = 0; h < n_list.size(); ++h)
          counts[j * n_list.size() + h] = sandwich_violations(
              std::span(weights[j]).first(n_list[h]), d, rep.a, rep.b, t_points, stop_at_first);
    });
    return counts;
  };

  const auto requested = count_grid(delta, false);
  for (std::size_t c : requested) rep.violations_at_requested += c;
  // n0: smallest listed n such that every larger listed n passes at delta.
  rep.n0 = 0;
  for (std::size_t h = n_list.size(); h-- > 0;) {
    bool clean = true;
    for (std::size_t j = 0; j < x_grid.size(); ++j) clean = clean && requested[j * n_list.size() + h] == 0;
    if (!clean) break;
    rep.n0 = n_list[h];
  }

  std::vector<std::size_t> used = requested;
  rep.delta_used = delta;
  if (rep.violations_at_requested > 0) {
    rep.bisected = true;
    double lo = 0.0;
    double hi = delta;
    while (hi - lo > 1e-3 * delta) {
      const double mid = 0.5 * (lo + hi);
      const auto c = count_grid(mid, true);
      const bool clean = std::all_of(c.begin(), c.end(), [](std::size_t v) { return v == 0; });
      (clean ? lo : hi) = mid;
    }
    rep.delta_used = lo;
    used = lo > 0.0 ? count_grid(lo, false) : std::vector<std::size_t>(requested.size(), 0);
  }
  for (std::size_t j = 0; j < x_grid.size(); ++j)
    for (std::size_t h = 0; h < n_list.size(); ++h) {
      const std::size_t v = used[j * n_list.size() + h];
      rep.rows.push_back({x_grid[j], n_list[h], v});
      rep.total_violations += v;
    }
  rep.pass = rep.delta_used > 0.0 && rep.total_violations == 0;
  return rep;
}

double decay_rate(std::span<const double> weights, double delta, double Delta, std::size_t t_points) {
  if (!(delta > 0.0 && Delta > delta)) throw std::invalid_argument("decay_rate: need 0 < delta < Delta");
  const double n = static_cast<double>(weights.size());
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < t_points; ++j) {
    const double t = delta + (static_cast<double>(j) + 0.5) * (Delta - delta) / static_cast<double>(t_points);
    best = std::max(best, log_cos_product(weights, t).log_abs);
  }
  return std::exp(best / n);
}

bool lattice_period_in_band(std::span<const double> weights, double delta, double Delta) {
  const auto form = lattice_form(WeightedSignSum(std::vector<double>(weights.begin(), weights.end())));
  if (!form || form->span() == 0) return form.has_value();
  const double period = std::numbers::pi / std::abs(form->step);
  const double first = (std::floor(delta / period) + 1.0) * period;
  return first < Delta;
}

DecayBandReport verify_decay_band(const skew::SkewSystem& sys, std::span<const double> x_grid,
                                  std::span<const std::uint64_t> n_list, double delta, double Delta,
                                  double threshold, std::size_t t_points, unsigned threads) {
  require_increasing(n_list, "verify_decay_band");
  if (x_grid.empty()) throw std::invalid_argument("verify_decay_band: empty x grid");
  DecayBandReport rep;
  rep.delta = delta;
  rep.Delta = Delta;
  rep.threshold = threshold;
  std::vector<double> lambda(x_grid.size() * n_list.size());
  std::vector<char> lattice(x_grid.size(), 0);
  parallel_for(x_grid.size(), threads, [&](std::size_t j0, std::size_t j1) {
    for (std::size_t j = j0; j < j1; ++j) {
      const auto w = orbit_weights(sys, x_grid[j], n_list.back());
      lattice[j] = lattice_period_in_band(w, delta, Delta) ? 1 : 0;
      for (std::size_t h = 0; h < n_list.size(); ++h)
        lambda[j * n_list.size() + h] = decay_rate(std::span(w).first(n_list[h]), delta, Delta, t_points);
    }
  });
  rep.max_by_n.assign(n_list.size(), 0.0);
  for (std::size_t j = 0; j < x_grid.size(); ++j) {
    rep.lattice_period_in_band = rep.lattice_period_in_band || lattice[j];
    for (std::size_t h = 0; h < n_list.size(); ++h) {
      const double v = lambda[j * n_list.size() + h];
      rep.rows.push_back({x_grid[j], n_list[h], v});
      rep.max_by_n[h] = std::max(rep.max_by_n[h], v);
    }
  }
  rep.decreasing = true;
  for (std::size_t h = 1; h < n_list.size(); ++h) rep.decreasing = rep.decreasing && rep.max_by_n[h] < rep.max_by_n[h - 1];
  std::size_t first_ok = n_list.size();
  for (std::size_t h = n_list.size(); h-- > 0;) {
    if (!(rep.max_by_n[h] < threshold)) break;
    first_ok = h;
  }
  if (first_ok < n_list.size()) {
    rep.n0 = n_list[first_ok];
    rep.lambda_star = *std::max_element(rep.max_by_n.begin() + static_cast<long>(first_ok), rep.max_by_n.end());
  } else {
    rep.lambda_star = rep.max_by_n.back();
  }
  rep.pass = first_ok == 0 && rep.lambda_star < threshold;
  return rep;
}

LltScanReport llt_constant_scan(const skew::SkewSystem& sys, std::span<const double> x_grid,
                                std::span<const std::uint64_t> n_list, const LltScanOptions& opts) {
  require_increasing(n_list, "llt_constant_scan");
  if (x_grid.empty()) throw std::invalid_argument("llt_constant_scan: empty x grid");
  if (!(opts.half_width > 0.0)) throw std::invalid_argument("llt_constant_scan: half width must be positive");
  if (opts.samples == 0) throw std::invalid_argument("llt_constant_scan: samples must be positive");

  LltScanReport rep;
  const circle::RotationMap T(sys.rotation());
  const auto sub = circle::check_sublinearity(sys.roof(), T, x_grid, n_list, opts.sublinearity_tolerance);
  if (!sub.pass)
    rep.warning = "sublinearity of the roof's Birkhoff sums not verified at tolerance " +
                  std::to_string(opts.sublinearity_tolerance);

  const std::vector<std::size_t> horizons(n_list.begin(), n_list.end());
  const double samples = static_cast<double>(opts.samples);
  rep.k_min = std::numeric_limits<double>::infinity();
  rep.k_max = 0.0;
  for (std::size_t j = 0; j < x_grid.size(); ++j) {
    const auto w = orbit_weights(sys, x_grid[j], horizons.back());
    const SignSumSampler sampler(w);
    const auto sums = sampler.partial_sums(horizons, opts.samples, derive_seed(opts.seed, j), opts.threads);
    double drift = 0.0;
    std::size_t filled = 0;
    double lo_val = std::numeric_limits<double>::infinity();
    double hi_val = 0.0;
    for (std::size_t h = 0; h < horizons.size(); ++h) {
      for (; filled < horizons[h]; ++filled) drift += w[filled];
      std::uint64_t hits = 0;
      for (double s : sums[h])
        if (std::abs(s + drift) <= opts.half_width) ++hits;
      const double p = static_cast<double>(hits) / samples;
      const double root_n = std::sqrt(static_cast<double>(horizons[h]));
      const LltScanReport::Row row{x_grid[j], n_list[h], root_n * p, root_n * std::sqrt(p * (1.0 - p) / samples), drift};
      rep.rows.push_back(row);
      rep.k_min = std::min(rep.k_min, row.scaled);
      rep.k_max = std::max(rep.k_max, row.scaled);
      if (n_list[h] >= opts.stable_from) {
        lo_val = std::min(lo_val, row.scaled);
        hi_val = std::max(hi_val, row.scaled);
      }
    }
    if (hi_val > 0.0) {
      const double spread = lo_val > 0.0 ? hi_val / lo_val : std::numeric_limits<double>::infinity();
      rep.max_spread = std::max(rep.max_spread, spread);
    }
  }
  rep.k_hat = rep.k_min > 0.0 ? std::max(rep.k_max, 1.0 / rep.k_min) : std::numeric_limits<double>::infinity();
  rep.pass = std::isfinite(rep.k_hat) && rep.max_spread <= opts.spread_limit;
  return rep;
}

WeakLltReport weak_llt_check(std::span<const double> weights, std::span<const double> drifts,
                             std::span<const std::uint64_t> n_list, double a, double b,
                             std::uint64_t samples, std::uint64_t seed, unsigned threads) {
  require_increasing(n_list, "weak_llt_check");
  if (n_list.back() > weights.size()) throw std::invalid_argument("weak_llt_check: not enough weights");
  if (!drifts.empty() && drifts.size() != n_list.size())
    throw std::invalid_argument("weak_llt_check: one drift per horizon required");
  if (a > b) throw std::invalid_argument("weak_llt_check: need a <= b");
  if (samples == 0) throw std::invalid_argument("weak_llt_check: samples must be positive");

  WeakLltReport rep;
  rep.target = b - a;
  const auto prefix = weights.first(n_list.back());
  rep.lattice = lattice_form(WeightedSignSum(std::vector<double>(prefix.begin(), prefix.end()))).has_value();

  const std::vector<std::size_t> horizons(n_list.begin(), n_list.end());
  const SignSumSampler sampler(prefix);
  const auto sums = sampler.partial_sums(horizons, samples, seed, threads);
  double sq = 0.0;
  std::size_t filled = 0;
  for (std::size_t h = 0; h < horizons.size(); ++h) {
    for (; filled < horizons[h]; ++filled) sq += weights[filled] * weights[filled];
    const double drift = drifts.empty() ? 0.0 : drifts[h];
    std::uint64_t hits = 0;
    for (double s : sums[h]) {
      const double v = s + drift;
      if (v >= a && v <= b) ++hits;
    }
    const double n = static_cast<double>(horizons[h]);
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    const double sigma = std::sqrt(sq / n);
    const double scale = std::sqrt(2.0 * std::numbers::pi * n) * sigma;
    rep.rows.push_back({n_list[h], scale * p, scale * std::sqrt(p * (1.0 - p) / static_cast<double>(samples)), sigma});
  }
  const double last = rep.rows.back().value;
  rep.relative_gap = rep.target > 0.0 ? std::abs(last - rep.target) / rep.target : std::abs(last);
  return rep;
}

WeakLltReport weak_llt_check(const skew::SkewSystem& sys, double x, std::span<const std::uint64_t> n_list,
                             double a, double b, std::uint64_t samples, std::uint64_t seed, unsigned threads) {
  require_increasing(n_list, "weak_llt_check");
  const auto w = orbit_weights(sys, x, n_list.back());
  std::vector<double> drifts;
  double s = 0.0;
  std::size_t filled = 0;
  for (std::uint64_t n : n_list) {
    for (; filled < n; ++filled) s += w[filled];
    drifts.push_back(s);
  }
  return weak_llt_check(w, drifts, n_list, a, b, samples, seed, threads);
}

}  // namespace skewlab::dist
