#include "skewlab/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "skewlab/distribution.hpp"
#include "skewlab/parallel.hpp"
#include "skewlab/rng.hpp"
#include "skewlab/stats.hpp"

namespace skewlab::ergodic {
namespace {

struct Start {
  sft::SymbolStream stream;
  double x;
  double t;
};

Start start_replicate(const WalkModel& model, std::uint64_t seed, std::uint64_t r) {
  const std::uint64_t s = derive_seed(seed, r);
  CounterRng fiber(s, 1);
  const double x = fiber.uniform();
  const double t = fiber.uniform() - 0.5;
  return {sft::SymbolStream(model.base(), s), x, t};
}

inline double next_sign(sft::SymbolStream& stream) { return stream.next() == 1 ? 1.0 : -1.0; }

void require_horizons(std::span<const std::uint64_t> horizons, const char* what) {
  if (horizons.empty()) throw std::invalid_argument(std::string(what) + ": empty horizon list");
  if (horizons.front() == 0) throw std::invalid_argument(std::string(what) + ": horizons must be positive");
  for (std::size_t h = 1; h < horizons.size(); ++h)
    if (horizons[h] <= horizons[h - 1]) throw std::invalid_argument(std::string(what) + ": horizons must increase");
}

// Per horizon and replicate: the hit count R_n and the t-integrated count.
struct ReturnSamples {
  std::vector<std::vector<double>> count;
  std::vector<std::vector<double>> smooth;
};

ReturnSamples simulate_returns(const WalkModel& model, std::span<const std::uint64_t> horizons,
                               std::uint64_t replicates, std::uint64_t seed, unsigned threads) {
  require_horizons(horizons, "return statistics");
  if (replicates == 0) throw std::invalid_argument("return statistics: replicates must be positive");
  const std::size_t n_max = horizons.back();
  ReturnSamples out{std::vector<std::vector<double>>(horizons.size(), std::vector<double>(replicates)),
                    std::vector<std::vector<double>>(horizons.size(), std::vector<double>(replicates))};
  const double drift = model.drift();
  const double spread = model.spread();
  parallel_for(replicates, threads, [&](std::size_t r0, std::size_t r1) {
    std::vector<double> c(n_max);
    for (std::size_t r = r0; r < r1; ++r) {
      Start st = start_replicate(model, seed, r);
      model.weights(st.x, c);
      double height = 0.0;
      std::uint64_t hits = 0;
      double smooth = 0.0;
      std::size_t h = 0;
      for (std::size_t i = 0; i < n_max; ++i) {
        height += c[i] * (drift + spread * next_sign(st.stream));
        if (std::abs(st.t + height) <= 0.5) ++hits;
        smooth += std::max(0.0, 1.0 - std::abs(height));
        if (i + 1 == horizons[h]) {
          out.count[h][r] = static_cast<double>(hits);
          out.smooth[h][r] = smooth;
          ++h;
        }
      }
    }
  });
  return out;
}

ReturnSequence sequence_from(const std::vector<std::vector<double>>& per_horizon,
                             std::span<const std::uint64_t> horizons, std::uint64_t min_fit_n) {
  ReturnSequence seq;
  for (std::size_t h = 0; h < horizons.size(); ++h) {
    const auto m = stats::mean_se(per_horizon[h]);
    seq.rows.push_back({horizons[h], m.mean, m.se});
  }
  fit_return_sequence(seq, min_fit_n);
  return seq;
}

}  // namespace

WalkModel::WalkModel(sft::SftSpec base, std::optional<skew::SkewSystem> sys, double drift, double spread)
    : base_(std::move(base)), system_(std::move(sys)), drift_(drift), spread_(spread) {}

WalkModel WalkModel::theorem2(const skew::SkewSystem& sys) {
  if (sys.mode() != skew::Mode::Theorem2) throw std::invalid_argument("WalkModel: system must be in theorem2 mode");
  return WalkModel(sys.base(), sys, 0.5, 0.5);
}

WalkModel WalkModel::simple_walk() { return WalkModel(sft::SftSpec::bernoulli({0.5, 0.5}), std::nullopt, 0.0, 1.0); }

void WalkModel::weights(double x, std::span<double> out) const {
  if (!system_) {
    std::fill(out.begin(), out.end(), 1.0);
    return;
  }
  system_->roof().weights_along_orbit(x, system_->rotation(), out);
}

double WalkModel::advance(double x, std::uint64_t i) const {
  if (!system_) return x;
  return circle::RotationMap(system_->rotation()).iterate(x, i);
}

double WalkModel::sigma_eff() const {
  const double second_moment = system_ ? system_->roof().square_mean() : 1.0;
  return spread_ * std::sqrt(second_moment);
}

std::string WalkModel::name() const { return system_ ? "theorem2" : "simple_walk"; }

std::vector<ReturnStats> estimate_return_stats(const WalkModel& model, std::span<const std::uint64_t> horizons,
                                               std::uint64_t replicates, std::uint64_t seed, unsigned threads) {
  const auto samples = simulate_returns(model, horizons, replicates, seed, threads);
  std::vector<ReturnStats> out;
  std::vector<double> squares(replicates);
  for (std::size_t h = 0; h < horizons.size(); ++h) {
    const auto& R = samples.count[h];
    for (std::size_t r = 0; r < replicates; ++r) squares[r] = R[r] * R[r];
    const auto m1 = stats::mean_se(R);
    const auto m2 = stats::mean_se(squares);
    ReturnStats rs;
    rs.n = horizons[h];
    rs.mean_R = m1.mean;
    rs.se_R = m1.se;
    rs.mean_R2 = m2.mean;
    rs.se_R2 = m2.se;
    rs.renyi = m1.mean > 0.0 ? m2.mean / (m1.mean * m1.mean) : 0.0;
    out.push_back(rs);
  }
  return out;
}

void fit_return_sequence(ReturnSequence& seq, std::uint64_t min_fit_n) {
  std::vector<double> lx, ly;
  seq.fitted = false;
  seq.fit_from = min_fit_n;
  for (const auto& row : seq.rows) {
    if (row.n < min_fit_n || !(row.a > 0.0)) continue;
    lx.push_back(std::log(static_cast<double>(row.n)));
    ly.push_back(std::log(row.a));
  }
  if (lx.size() < 3) return;
  const auto fit = stats::least_squares(lx, ly);
  seq.fitted = true;
  seq.exponent = fit.slope;
  seq.constant = std::exp(fit.intercept);
}

ReturnSequence return_sequence(const WalkModel& model, std::span<const std::uint64_t> horizons,
                               std::uint64_t replicates, std::uint64_t seed, unsigned threads,
                               std::uint64_t min_fit_n) {
  return sequence_from(simulate_returns(model, horizons, replicates, seed, threads).count, horizons, min_fit_n);
}

ReturnSequence hit_probability_sequence(const WalkModel& model, std::span<const std::uint64_t> horizons,
                                        std::uint64_t replicates, std::uint64_t seed, unsigned threads,
                                        std::uint64_t min_fit_n) {
  return sequence_from(simulate_returns(model, horizons, replicates, seed, threads).smooth, horizons, min_fit_n);
}

ReturnSequence simple_walk_return_sequence(std::span<const std::uint64_t> horizons, std::uint64_t min_fit_n) {
  require_horizons(horizons, "simple_walk_return_sequence");
  const auto zero = dist::simple_walk_zero_probabilities(horizons.back());
  ReturnSequence seq;
  double acc = 0.0;
  std::size_t i = 0;
  for (std::uint64_t n : horizons) {
    for (; i < n; ++i) acc += zero[i];
    seq.rows.push_back({n, acc, 0.0});
  }
  fit_return_sequence(seq, min_fit_n);
  return seq;
}

CltReport clt_check(const WalkModel& model, std::uint64_t n, std::uint64_t samples, std::uint64_t seed,
                    unsigned threads) {
  if (n == 0 || samples == 0) throw std::invalid_argument("clt_check: n and samples must be positive");
  CltReport rep;
  rep.n = n;
  rep.samples = samples;
  rep.sigma_eff = model.sigma_eff();
  if (!(rep.sigma_eff > 0.0)) throw std::invalid_argument("clt_check: degenerate roof (sigma_eff = 0)");
  std::vector<double> z(samples), drift_ratio(samples);
  const double root_n = std::sqrt(static_cast<double>(n));
  parallel_for(samples, threads, [&](std::size_t s0, std::size_t s1) {
    std::vector<double> c(n);
    for (std::size_t s = s0; s < s1; ++s) {
      Start st = start_replicate(model, seed, s);
      model.weights(st.x, c);
      double mart = 0.0, drift = 0.0;
      for (double ci : c) {
        mart += ci * next_sign(st.stream);
        drift += ci;
      }
      z[s] = model.spread() * mart / (rep.sigma_eff * root_n);
      drift_ratio[s] = std::abs(drift) / root_n;
    }
  });
  rep.ks = stats::ks_distance_normal(z);
  rep.mean_drift_ratio = stats::mean_se(drift_ratio).mean;
  return rep;
}

FcltReport fclt_check(const WalkModel& model, std::uint64_t n, std::uint64_t paths, std::span<const double> mesh,
                      std::uint64_t seed, unsigned threads) {
  if (n == 0 || paths < 2) throw std::invalid_argument("fclt_check: need n > 0 and at least two paths");
  if (mesh.empty()) throw std::invalid_argument("fclt_check: empty mesh");
  for (std::size_t m = 0; m < mesh.size(); ++m) {
    if (!(mesh[m] > 0.0 && mesh[m] <= 1.0)) throw std::invalid_argument("fclt_check: mesh must lie in (0, 1]");
    if (m > 0 && mesh[m] <= mesh[m - 1]) throw std::invalid_argument("fclt_check: mesh must increase");
  }
  FcltReport rep;
  rep.n = n;
  rep.paths = paths;
  rep.mesh.assign(mesh.begin(), mesh.end());
  const double sigma = model.sigma_eff();
  if (!(sigma > 0.0)) throw std::invalid_argument("fclt_check: degenerate roof (sigma_eff = 0)");
  const double norm = sigma * std::sqrt(static_cast<double>(n));
  std::vector<std::size_t> cut(mesh.size());
  for (std::size_t m = 0; m < mesh.size(); ++m)
    cut[m] = static_cast<std::size_t>(std::floor(mesh[m] * static_cast<double>(n)));

  std::vector<std::vector<double>> W(mesh.size(), std::vector<double>(paths));
  parallel_for(paths, threads, [&](std::size_t p0, std::size_t p1) {
    std::vector<double> c(n), partial(mesh.size());
    for (std::size_t p = p0; p < p1; ++p) {
      Start st = start_replicate(model, seed, p);
      model.weights(st.x, c);
      double height = 0.0, drift_total = 0.0;
      std::size_t m = 0;
      for (std::size_t i = 0; i <= n; ++i) {
        while (m < cut.size() && cut[m] == i) partial[m++] = height;
        if (i == n) break;
        height += c[i] * (model.drift() + model.spread() * next_sign(st.stream));
        drift_total += c[i];
      }
      for (std::size_t k = 0; k < mesh.size(); ++k)
        W[k][p] = (partial[k] - model.drift() * drift_total * mesh[k]) / norm;
    }
  });

  std::vector<double> mean(mesh.size(), 0.0);
  for (std::size_t k = 0; k < mesh.size(); ++k) mean[k] = stats::mean_se(W[k]).mean;
  rep.covariance.assign(mesh.size(), std::vector<double>(mesh.size(), 0.0));
  for (std::size_t a = 0; a < mesh.size(); ++a)
    for (std::size_t b = a; b < mesh.size(); ++b) {
      double acc = 0.0;
      for (std::size_t p = 0; p < paths; ++p) acc += (W[a][p] - mean[a]) * (W[b][p] - mean[b]);
      const double cov = acc / static_cast<double>(paths - 1);
      rep.covariance[a][b] = rep.covariance[b][a] = cov;
      rep.max_error = std::max(rep.max_error, std::abs(cov - std::min(mesh[a], mesh[b])));
    }
  return rep;
}

IndependenceReport independence_decomposition_check(const WalkModel& model, std::uint64_t i, std::uint64_t j,
                                                    std::uint64_t samples, std::uint64_t seed,
                                                    unsigned threads) {
  if (!(0 < i && i < j)) throw std::invalid_argument("independence_decomposition_check: need 0 < i < j");
  if (samples < 2) throw std::invalid_argument("independence_decomposition_check: need at least two samples");
  IndependenceReport rep;
  rep.i = i;
  rep.j = j;
  rep.samples = samples;
  std::vector<double> head(samples), tail(samples), residual(samples);
  parallel_for(samples, threads, [&](std::size_t s0, std::size_t s1) {
    std::vector<double> c(j), c_shift(j - i), signs(j);
    for (std::size_t s = s0; s < s1; ++s) {
      Start st = start_replicate(model, seed, s);
      model.weights(st.x, c);
      model.weights(model.advance(st.x, i), c_shift);
      for (auto& x : signs) x = next_sign(st.stream);
      double full = 0.0, a = 0.0, b = 0.0;
      for (std::size_t k = 0; k < j; ++k) full += c[k] * signs[k];
      for (std::size_t k = 0; k < i; ++k) a += c[k] * signs[k];
      for (std::size_t k = 0; k < j - i; ++k) b += c_shift[k] * signs[i + k];
      head[s] = a;
      tail[s] = b;
      residual[s] = std::abs(full - a - b);
    }
  });
  rep.max_residual = *std::max_element(residual.begin(), residual.end());
  rep.correlation = stats::correlation(head, tail);
  rep.bound = 4.0 / std::sqrt(static_cast<double>(samples));
  rep.pass = rep.max_residual <= 1e-9 && std::abs(rep.correlation) <= rep.bound;
  return rep;
}

}  // namespace skewlab::ergodic
