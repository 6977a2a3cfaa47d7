#include "skewlab/skew.hpp"

#include <array>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "skewlab/parallel.hpp"
#include "skewlab/rng.hpp"

namespace skewlab::skew {

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::Theorem1: return "theorem1";
    case Mode::Theorem2: return "theorem2";
    case Mode::General: return "general";
  }
  return "general";
}

Mode mode_from_string(const std::string& name) {
  if (name == "theorem1") return Mode::Theorem1;
  if (name == "theorem2") return Mode::Theorem2;
  if (name == "general") return Mode::General;
  throw std::invalid_argument("unknown mode \"" + name + "\"");
}

SkewSystem::SkewSystem(sft::SftSpec base, std::vector<FiberMap> fibers, Mode mode)
    : base_(std::move(base)), fibers_(std::move(fibers)), mode_(mode) {
  if (static_cast<int>(fibers_.size()) != base_.alphabet_size())
    throw std::invalid_argument("SkewSystem: need one fiber map per letter");
  if (mode_ == Mode::General) return;
  if (base_.alphabet_size() != 2 || !base_.is_bernoulli())
    throw std::invalid_argument("SkewSystem: this mode needs a two-letter Bernoulli base");
  if (fibers_[0].roof && !fibers_[0].roof->is_zero())
    throw std::invalid_argument("SkewSystem: letter 0 must act without a roof");
  if (!fibers_[1].roof) fibers_[1].roof = circle::RoofFunction::zero();
  if (mode_ == Mode::Theorem2 && !(fibers_[0].alpha == fibers_[1].alpha))
    throw std::invalid_argument("SkewSystem: theorem2 mode needs one common rotation");
}

SkewSystem SkewSystem::theorem2(circle::RotationNumber alpha, circle::RoofFunction roof, double p1) {
  return SkewSystem(sft::SftSpec::bernoulli({1.0 - p1, p1}),
                    {FiberMap{alpha, std::nullopt}, FiberMap{alpha, std::move(roof)}}, Mode::Theorem2);
}

SkewSystem SkewSystem::theorem1(circle::RotationNumber alpha0, circle::RotationNumber alpha1,
                                circle::RoofFunction roof, double p1) {
  return SkewSystem(sft::SftSpec::bernoulli({1.0 - p1, p1}),
                    {FiberMap{alpha0, std::nullopt}, FiberMap{alpha1, std::move(roof)}}, Mode::Theorem1);
}

const circle::RoofFunction& SkewSystem::roof() const {
  if (mode_ == Mode::General) throw std::logic_error("SkewSystem::roof: general mode has no single roof");
  return *fibers_[1].roof;
}

const circle::RotationNumber& SkewSystem::rotation() const {
  if (mode_ != Mode::Theorem2) throw std::logic_error("SkewSystem::rotation: needs theorem2 mode");
  return fibers_[0].alpha;
}

double SkewSystem::roof_value(sft::Symbol s, double x) const {
  const auto& roof = fibers_[s].roof;
  return roof ? (*roof)(x) : 0.0;
}

void SkewSystem::rotate(sft::Symbol s, double& x, double& carry) const {
  const auto& alpha = fibers_[s].alpha;
  // Double-double step: (x, carry) += (alpha.hi, alpha.lo).
  const double y = alpha.value();
  const double sum = x + y;
  const double bp = sum - x;
  const double err = (x - (sum - bp)) + (y - bp);
  const double low = carry + err + alpha.low();
  x = sum + low;
  carry = low - (x - sum);
  if (x >= 1.0) x -= 1.0;
  if (x < 0.0) x += 1.0;
}

SkewState make_state(const SkewSystem& sys, std::uint64_t seed, double x, double t) {
  return SkewState{sft::SymbolStream(sys.base(), seed), x, t};
}

namespace {

// Theorem1/2 weights are phi(x_i) of the letter-1 roof regardless of omega_i.
double record_weight(const SkewSystem& sys, double x) {
  return sys.mode() == Mode::General ? 0.0 : sys.roof()(x);
}

void record_step(const SkewSystem& sys, Trajectory& tr, sft::Symbol s, double x, double t) {
  tr.symbols.push_back(s);
  tr.xs.push_back(x);
  tr.ts.push_back(t);
  tr.weights.push_back(record_weight(sys, x));
}

void open_record(const SkewSystem& sys, Trajectory* tr, double t) {
  if (!tr) return;
  if (tr->symbols.empty()) {
    tr->mode = sys.mode();
    tr->ts.clear();
  } else {
    tr->ts.pop_back();  // continue an earlier segment
  }
  (void)t;
}

}  // namespace

SkewState iterate(const SkewSystem& sys, SkewState state, std::uint64_t n, Trajectory* record) {
  open_record(sys, record, state.t);
  for (std::uint64_t i = 0; i < n; ++i) {
    const sft::Symbol s = state.stream.next();
    if (record) record_step(sys, *record, s, state.x, state.t);
    state.t += sys.roof_value(s, state.x);
    sys.rotate(s, state.x, state.x_carry);
  }
  if (record) record->ts.push_back(state.t);
  return state;
}

std::pair<double, double> iterate_word(const SkewSystem& sys, double x, double t,
                                       std::span<const sft::Symbol> word, Trajectory* record) {
  for (sft::Symbol s : word)
    if (s < 0 || s >= sys.base().alphabet_size())
      throw std::out_of_range("iterate_word: symbol outside the alphabet");
  open_record(sys, record, t);
  double carry = 0.0;
  for (sft::Symbol s : word) {
    if (record) record_step(sys, *record, s, x, t);
    t += sys.roof_value(s, x);
    sys.rotate(s, x, carry);
  }
  if (record) record->ts.push_back(t);
  return {x, t};
}

Decomposition martingale_decompose(const Trajectory& tr) {
  if (tr.mode != Mode::Theorem2)
    throw std::invalid_argument("martingale_decompose: trajectory not recorded in theorem2 mode");
  Decomposition d;
  for (std::size_t i = 0; i < tr.steps(); ++i) {
    const double sign = 2.0 * tr.symbols[i] - 1.0;
    d.martingale += tr.weights[i] * sign;
    d.drift += tr.weights[i];
  }
  const double t0 = tr.ts.front();
  const double tn = tr.ts.back();
  d.residual = std::abs(tn - t0 - 0.5 * d.martingale - 0.5 * d.drift);
  return d;
}

std::uint64_t return_function(const SkewSystem& sys, SkewState state, std::uint64_t n) {
  if (sys.mode() != Mode::Theorem2) throw std::invalid_argument("return_function: needs theorem2 mode");
  if (!(std::abs(state.t) <= 0.5))
    throw std::invalid_argument("return_function: start height must lie in [-1/2, 1/2]");
  std::uint64_t visits = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const sft::Symbol s = state.stream.next();
    state.t += sys.roof_value(s, state.x);
    sys.rotate(s, state.x, state.x_carry);
    if (std::abs(state.t) <= 0.5) ++visits;
  }
  return visits;
}

std::uint64_t return_count_from_decomposition(const Trajectory& tr) {
  if (tr.mode != Mode::Theorem2)
    throw std::invalid_argument("return_count_from_decomposition: needs a theorem2 trajectory");
  const double t0 = tr.ts.front();
  double S = 0.0;
  double s = 0.0;
  std::uint64_t visits = 0;
  for (std::size_t i = 0; i < tr.steps(); ++i) {
    S += tr.weights[i] * (2.0 * tr.symbols[i] - 1.0);
    s += tr.weights[i];
    if (std::abs(S + s + 2.0 * t0) <= 1.0) ++visits;
  }
  return visits;
}

double zero_mean_condition(const SkewSystem& sys) {
  double acc = 0.0;
  for (int i = 0; i < sys.base().alphabet_size(); ++i) {
    const auto& roof = sys.fibers()[i].roof;
    if (roof) acc += sys.base().pi(i) * roof->mean();
  }
  return acc;
}

RecurrenceResult recurrence_demo(WalkLattice lattice, std::uint64_t steps, std::uint64_t replicates,
                                 std::uint64_t seed, unsigned threads) {
  if (steps == 0 || replicates == 0)
    throw std::invalid_argument("recurrence_demo: steps and replicates must be positive");
  std::vector<char> returned(replicates, 0);
  parallel_for(replicates, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      CounterRng rng(derive_seed(seed, r));
      std::array<long long, 3> y{0, 0, 0};
      bool back = false;
      if (lattice == WalkLattice::Z1) {
        std::uint64_t bits = 0;
        for (std::uint64_t i = 0; i < steps && !back; ++i) {
          if (i % 64 == 0) bits = rng();
          y[0] += (bits & 1u) ? 1 : -1;
          bits >>= 1;
          back = y[0] == 0;
        }
      } else {
        for (std::uint64_t i = 0; i < steps && !back; ++i) {
          // omega_0 uniform in {0,1,2}, theta_0 uniform in {-1,+1}.
          const std::uint64_t outcome = (static_cast<std::uint64_t>(rng.next_u32()) * 6u) >> 32;
          y[outcome >> 1] += (outcome & 1u) ? 1 : -1;
          back = y[0] == 0 && y[1] == 0 && y[2] == 0;
        }
      }
      returned[r] = back ? 1 : 0;
    }
  });
  RecurrenceResult res;
  res.replicates = replicates;
  for (char c : returned) res.returned += static_cast<std::uint64_t>(c);
  res.frequency = static_cast<double>(res.returned) / static_cast<double>(replicates);
  return res;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  os << "step,symbol,x,t,S,s\n";
  double S = 0.0;
  double s = 0.0;
  char buf[160];
  for (std::size_t i = 0; i <= tr.steps(); ++i) {
    const int symbol = i < tr.steps() ? tr.symbols[i] : -1;
    const double x = i < tr.steps() ? tr.xs[i] : std::nan("");
    std::snprintf(buf, sizeof buf, "%zu,%d,%.17g,%.17g,%.17g,%.17g\n", i, symbol, x, tr.ts[i], S, s);
    os << buf;
    if (i < tr.steps()) {
      S += tr.weights[i] * (2.0 * tr.symbols[i] - 1.0);
      s += tr.weights[i];
    }
  }
}

void to_json(nlohmann::json& j, const SkewSystem& sys) {
  nlohmann::json fibers = nlohmann::json::array();
  for (const auto& f : sys.fibers()) {
    nlohmann::json fj{{"alpha", f.alpha}};
    if (f.roof) fj["roof"] = *f.roof;
    fibers.push_back(std::move(fj));
  }
  j = nlohmann::json{{"base", sys.base()}, {"fibers", std::move(fibers)}, {"mode", to_string(sys.mode())}};
}

SkewSystem system_from_json(const nlohmann::json& j) {
  const Mode mode = mode_from_string(j.value("mode", std::string("general")));
  // Shorthand: {"mode":"theorem2","alpha":{...},"roof":{...}} with p1 optional.
  if (!j.contains("fibers")) {
    if (mode != Mode::Theorem2)
      throw std::invalid_argument("system: \"fibers\" required unless mode is theorem2");
    return SkewSystem::theorem2(circle::rotation_from_json(j.at("alpha")),
                                circle::roof_from_json(j.at("roof")), j.value("p1", 0.5));
  }
  sft::SftSpec base = sft::spec_from_json(j.at("base"));
  std::vector<FiberMap> fibers;
  for (const auto& fj : j.at("fibers")) {
    FiberMap f{circle::rotation_from_json(fj.at("alpha")), std::nullopt};
    if (fj.contains("roof")) f.roof = circle::roof_from_json(fj.at("roof"));
    fibers.push_back(std::move(f));
  }
  return SkewSystem(std::move(base), std::move(fibers), mode);
}

}  // namespace skewlab::skew
