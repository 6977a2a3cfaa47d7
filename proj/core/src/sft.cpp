#include "skewlab/sft.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

#include <nlohmann/json.hpp>

namespace skewlab::sft {
namespace {

constexpr double kStochasticTol = 1e-12;
// Words longer than this are measured through accumulated log-probabilities.
constexpr std::size_t kPlainProductLimit = 64;

std::string pair_message(Symbol from, Symbol to, std::size_t position) {
  std::ostringstream os;
  os << "inadmissible transition " << from << " -> " << to << " at offset " << position;
  return os.str();
}

bool strongly_connected(const Matrix& p) {
  const std::size_t k = p.size();
  auto reaches_all = [&](bool transpose) {
    std::vector<char> seen(k, 0);
    std::queue<std::size_t> frontier;
    frontier.push(0);
    seen[0] = 1;
    while (!frontier.empty()) {
      const std::size_t i = frontier.front();
      frontier.pop();
      for (std::size_t j = 0; j < k; ++j) {
        const double w = transpose ? p[j][i] : p[i][j];
        if (w > 0.0 && !seen[j]) {
          seen[j] = 1;
          frontier.push(j);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  return reaches_all(false) && reaches_all(true);
}

// Product of pi(word[0]) (if with_pi) and the transition probabilities.
double product_measure(const SftSpec& spec, std::span<const Symbol> word, bool with_pi) {
  spec.check_word(word);
  if (word.size() <= kPlainProductLimit) {
    double m = with_pi ? spec.pi(word[0]) : 1.0;
    for (std::size_t i = 0; i + 1 < word.size(); ++i) m *= spec.p(word[i], word[i + 1]);
    return m;
  }
  long double log_m = with_pi ? std::log(static_cast<long double>(spec.pi(word[0]))) : 0.0L;
  for (std::size_t i = 0; i + 1 < word.size(); ++i)
    log_m += std::log(static_cast<long double>(spec.p(word[i], word[i + 1])));
  return static_cast<double>(std::exp(log_m));
}

void check_square(const Matrix& p) {
  if (p.size() < 2) throw std::invalid_argument("SftSpec: alphabet size must be at least 2");
  for (const auto& row : p)
    if (row.size() != p.size()) throw std::invalid_argument("SftSpec: P must be square");
}

}  // namespace

InadmissibleWord::InadmissibleWord(Symbol from, Symbol to, std::size_t position)
    : std::invalid_argument(pair_message(from, to, position)),
      from_(from),
      to_(to),
      position_(position) {}

std::vector<double> stationary_vector(const Matrix& transitions) {
  check_square(transitions);
  const std::size_t k = transitions.size();
  std::vector<double> v(k, 1.0 / static_cast<double>(k));
  std::vector<double> next(k);
  for (int iter = 0; iter < 1'000'000; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      next[i] += 0.5 * v[i];
      for (std::size_t j = 0; j < k; ++j) next[j] += 0.5 * v[i] * transitions[i][j];
    }
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    double diff = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      next[i] /= total;
      diff = std::max(diff, std::abs(next[i] - v[i]));
    }
    v.swap(next);
    if (diff < 1e-14) break;
  }
  return v;
}

SftSpec::SftSpec(Matrix transitions, std::vector<double> pi)
    : transitions_(std::move(transitions)), pi_(std::move(pi)) {
  check_square(transitions_);
  const std::size_t k = transitions_.size();
  if (pi_.size() != k) throw std::invalid_argument("SftSpec: pi must have length k");
  for (std::size_t i = 0; i < k; ++i) {
    double row_sum = 0.0;
    for (double v : transitions_[i]) {
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("SftSpec: transition probabilities must lie in [0,1]");
      row_sum += v;
    }
    if (std::abs(row_sum - 1.0) > kStochasticTol)
      throw std::invalid_argument("SftSpec: row " + std::to_string(i) + " of P does not sum to 1");
  }
  double pi_sum = 0.0;
  for (double v : pi_) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("SftSpec: pi entries must lie in [0,1]");
    pi_sum += v;
  }
  if (std::abs(pi_sum - 1.0) > kStochasticTol)
    throw std::invalid_argument("SftSpec: pi does not sum to 1");
  for (std::size_t j = 0; j < k; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) acc += pi_[i] * transitions_[i][j];
    if (std::abs(acc - pi_[j]) > kStochasticTol)
      throw std::invalid_argument("SftSpec: pi is not stationary for P (pi P != pi)");
  }
  if (!strongly_connected(transitions_))
    throw std::invalid_argument("SftSpec: P is reducible");
}

SftSpec SftSpec::from_transitions(Matrix transitions) {
  auto pi = stationary_vector(transitions);
  return SftSpec(std::move(transitions), std::move(pi));
}

SftSpec SftSpec::bernoulli(std::vector<double> probabilities) {
  Matrix p(probabilities.size(), probabilities);
  return SftSpec(std::move(p), std::move(probabilities));
}

SftSpec SftSpec::golden_mean() {
  return SftSpec({{0.5, 0.5}, {1.0, 0.0}}, {2.0 / 3.0, 1.0 / 3.0});
}

bool SftSpec::is_bernoulli(double tol) const {
  for (const auto& row : transitions_)
    for (std::size_t j = 0; j < row.size(); ++j)
      if (std::abs(row[j] - pi_[j]) > tol) return false;
  return true;
}

void SftSpec::check_word(std::span<const Symbol> word) const {
  if (word.empty()) throw std::invalid_argument("empty word");
  for (Symbol s : word)
    if (s < 0 || s >= alphabet_size())
      throw std::out_of_range("symbol " + std::to_string(s) + " outside the alphabet");
  for (std::size_t i = 0; i + 1 < word.size(); ++i)
    if (!allowed(word[i], word[i + 1])) throw InadmissibleWord(word[i], word[i + 1], i);
}

bool SftSpec::admissible(std::span<const Symbol> word) const {
  if (word.empty()) return false;
  for (Symbol s : word)
    if (s < 0 || s >= alphabet_size()) return false;
  for (std::size_t i = 0; i + 1 < word.size(); ++i)
    if (!allowed(word[i], word[i + 1])) return false;
  return true;
}

bool Cylinder::contains(long index, Symbol s) const {
  if (index < start || index > end()) return true;
  return symbols[static_cast<std::size_t>(index - start)] == s;
}

double cylinder_measure(const SftSpec& spec, const Cylinder& c) {
  return product_measure(spec, c.symbols, true);
}

double side_cylinder_measure(const SftSpec& spec, const SCylinder& c) {
  return product_measure(spec, c.word, true);
}

double side_cylinder_measure(const SftSpec& spec, const UCylinder& c) {
  return product_measure(spec, c.word, false);
}

SCylinder shift_preimage(const SCylinder& a, std::size_t k) {
  if (k > a.length()) throw std::invalid_argument("shift_preimage: k exceeds the cylinder length");
  return SCylinder{a.anchor, Word(a.word.begin(), a.word.end() - static_cast<long>(k))};
}

double verify_ratio_preservation(const SftSpec& spec, const SCylinder& a, const SCylinder& b,
                                 std::size_t k) {
  if (a.anchor != b.anchor)
    throw std::invalid_argument("verify_ratio_preservation: cylinders belong to different s-sets");
  if (a.length() < k || b.length() < k)
    throw std::invalid_argument("verify_ratio_preservation: cylinders shorter than k");
  for (long i = a.anchor - static_cast<long>(k); i <= a.anchor; ++i)
    if (a.at(i) != b.at(i))
      throw std::invalid_argument(
          "verify_ratio_preservation: A and B are not in a common s-cylinder of length k");
  spec.check_word(a.word);
  spec.check_word(b.word);

  const double lhs = side_cylinder_measure(spec, shift_preimage(a, k)) /
                     side_cylinder_measure(spec, shift_preimage(b, k));
  const double rhs = side_cylinder_measure(spec, a) / side_cylinder_measure(spec, b);
  return std::abs(lhs / rhs - 1.0);
}

SymbolStream::SymbolStream(SftSpec spec, std::uint64_t seed)
    : spec_(std::move(spec)), rng_(seed, /*stream=*/0x5f) {
  auto cdf = [](const std::vector<double>& law) {
    std::vector<double> out(law.size());
    std::partial_sum(law.begin(), law.end(), out.begin());
    out.back() = 1.0;
    return out;
  };
  pi_cdf_ = cdf(spec_.stationary());
  for (const auto& row : spec_.transitions()) row_cdf_.push_back(cdf(row));
}

Symbol SymbolStream::draw(const std::vector<double>& cdf) {
  const double u = (static_cast<double>(rng_.next_u32()) + 0.5) * 0x1.0p-32;
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return static_cast<Symbol>(std::min<std::ptrdiff_t>(it - cdf.begin(),
                                                      static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

Symbol SymbolStream::next() {
  last_ = position_ == 0 ? draw(pi_cdf_) : draw(row_cdf_[last_]);
  ++position_;
  return last_;
}

Word SymbolStream::prefix(std::size_t n) const {
  SymbolStream fresh(spec_, rng_.seed());
  return sample_symbols(fresh, n);
}

Word sample_symbols(SymbolStream& stream, std::size_t n) {
  Word out(n);
  for (auto& s : out) s = stream.next();
  return out;
}

DensityDemo density_convergence_demo(const SftSpec& spec, std::span<const Cylinder> target,
                                      const Cylinder& point, long anchor, std::size_t k_max) {
  if (target.empty()) throw std::invalid_argument("density_convergence_demo: empty target");
  long lo = anchor;
  long hi = anchor;
  for (const auto& c : target) {
    spec.check_word(c.symbols);
    lo = std::min(lo, c.start);
    hi = std::max(hi, c.end());
  }
  if (point.start > lo || point.end() < hi)
    throw std::invalid_argument(
        "density_convergence_demo: point must cover coordinates " + std::to_string(lo) + ".." +
        std::to_string(hi));
  spec.check_word(point.symbols);

  const int alphabet = spec.alphabet_size();
  auto in_target = [&](long first, std::span<const Symbol> config) {
    return std::any_of(target.begin(), target.end(), [&](const Cylinder& c) {
      for (long i = c.start; i <= c.end(); ++i)
        if (config[static_cast<std::size_t>(i - first)] != c.symbols[static_cast<std::size_t>(i - c.start)])
          return false;
      return true;
    });
  };
  auto point_at = [&](long i) { return point.symbols[static_cast<std::size_t>(i - point.start)]; };

  // The configuration on lo..hi; only letters at lo..anchor enter mu^s.
  Word config(static_cast<std::size_t>(hi - lo + 1));
  for (long i = lo; i <= hi; ++i) config[static_cast<std::size_t>(i - lo)] = point_at(i);
  const bool inside = in_target(lo, config);

  DensityDemo demo;
  demo.point_in_target = inside;
  for (std::size_t k = 0; k <= k_max; ++k) {
    const long fixed_from = anchor - static_cast<long>(k);
    if (fixed_from <= lo) {
      demo.ratios.push_back(inside ? 1.0 : 0.0);
      continue;
    }
    // Enumerate the free letters on lo .. fixed_from-1.
    const std::size_t free = static_cast<std::size_t>(fixed_from - lo);
    if (std::pow(static_cast<double>(alphabet), static_cast<double>(free)) > 4.2e6)
      throw std::invalid_argument("density_convergence_demo: free window too large to enumerate");
    Word trial = config;
    std::vector<Symbol> digits(free, 0);
    double total = 0.0;
    double hit = 0.0;
    for (;;) {
      for (std::size_t d = 0; d < free; ++d) trial[d] = digits[d];
      const std::span<const Symbol> measured(trial.data(), static_cast<std::size_t>(anchor - lo + 1));
      if (spec.admissible(measured)) {
        const double m = product_measure(spec, measured, true);
        total += m;
        if (in_target(lo, trial)) hit += m;
      }
      std::size_t d = free;
      while (d > 0 && ++digits[d - 1] == alphabet) digits[--d] = 0;
      if (d == 0) break;
    }
    demo.ratios.push_back(total > 0.0 ? hit / total : 0.0);
  }
  return demo;
}

void to_json(nlohmann::json& j, const SftSpec& spec) {
  j = nlohmann::json{{"k", spec.alphabet_size()}, {"P", spec.transitions()}, {"pi", spec.stationary()}};
}

SftSpec spec_from_json(const nlohmann::json& j) {
  auto p = j.at("P").get<Matrix>();
  if (j.contains("k") && j.at("k").get<int>() != static_cast<int>(p.size()))
    throw std::invalid_argument("SftSpec: k does not match the size of P");
  if (!j.contains("pi")) return SftSpec::from_transitions(std::move(p));
  return SftSpec(std::move(p), j.at("pi").get<std::vector<double>>());
}

RatioPair sample_ratio_pair(const SftSpec& spec, CounterRng& rng, std::size_t k_max, std::size_t extra_max) {
  const int letters = spec.alphabet_size();
  auto pick = [&](const std::vector<Symbol>& choices) {
    return choices[static_cast<std::size_t>(rng() % choices.size())];
  };
  auto successors = [&](Symbol from) {
    std::vector<Symbol> out;
    for (Symbol to = 0; to < letters; ++to)
      if (spec.allowed(from, to)) out.push_back(to);
    return out;
  };
  auto predecessors = [&](Symbol to) {
    std::vector<Symbol> out;
    for (Symbol from = 0; from < letters; ++from)
      if (spec.allowed(from, to)) out.push_back(from);
    return out;
  };

  RatioPair pair;
  pair.k = static_cast<std::size_t>(rng() % (k_max + 1));
  const long anchor = static_cast<long>(rng() % 21) - 10;
  Word common{static_cast<Symbol>(rng() % static_cast<std::uint64_t>(letters))};
  while (common.size() < pair.k + 1) common.push_back(pick(successors(common.back())));

  auto extend = [&]() {
    Word w = common;
    const std::size_t extra = static_cast<std::size_t>(rng() % (extra_max + 1));
    for (std::size_t i = 0; i < extra; ++i) w.insert(w.begin(), pick(predecessors(w.front())));
    return SCylinder{anchor, std::move(w)};
  };
  pair.a = extend();
  pair.b = extend();
  return pair;
}

}  // namespace skewlab::sft
