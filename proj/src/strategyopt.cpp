#include "franson/strategyopt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "franson/random.hpp"
#include "simplex_projection.hpp"

namespace franson {

namespace {

constexpr double kFeasibilityTolerance = 1e-9;

bool optimizer_class(ModelTag tag) { return tag != ModelTag::PlainLocalRealism && tag != ModelTag::PathRealism; }

// Ratio-form view of a game: for every joint vertex, per-term selection mass c_t,
// per-term numerator n_t (selection mass times outcome product) and constraint
// row values g_k, with targets b_k. The sum-to-one row is kept separately.
class GameModel {
 public:
  explicit GameModel(const GameSpec& game)
      : game_(game), n_(game.chain.settings_per_site()), terms_(game.chain.term_order()) {
    if (n_ > 16) throw ResourceLimitError("strategy games support at most 16 settings per site");
    const auto tag = game.model.tag();
    if (game.equal_delay_mass) {
      if (tag != ModelTag::EmissionTimeRealism && tag != ModelTag::OutcomesOnly) {
        throw std::invalid_argument("equal delay mass applies to EmissionTimeRealism and OutcomesOnly games only");
      }
      if (!(*game.equal_delay_mass > 0.0 && *game.equal_delay_mass <= 0.5)) {
        throw std::invalid_argument("equal delay mass must lie in (0, 1/2]");
      }
    }
    const double m = game.equal_delay_mass.value_or(0.0);
    switch (tag) {
      case ModelTag::EmissionTimeRealism:
        if (game.equal_delay_mass) {
          targets_.assign(n_ * n_ + 1, m);
        }
        break;
      case ModelTag::OutcomesOnly:
        if (game.equal_delay_mass) targets_.assign(2 * n_ * n_, m);
        break;
      case ModelTag::Delays: targets_.assign(n_ * n_, *game.model.eta()); break;
      case ModelTag::Inefficiency: targets_.assign(2 * n_ * n_, 0.0); break;
      default: break;
    }
  }

  std::size_t terms() const { return terms_.size(); }
  std::size_t constraints() const { return targets_.size(); }
  const std::vector<double>& targets() const { return targets_; }

  /// Writes [c_0..c_{T-1}, n_0..n_{T-1}, g_0..g_{K-1}] into out.
  void features(const DeterministicVertex& v, std::vector<double>& out) const {
    const std::size_t T = terms_.size();
    out.assign(2 * T + targets_.size(), 0.0);
    const auto& s1 = v.site1;
    const auto& s2 = v.site2;
    const auto tag = game_.model.tag();

    if (tag == ModelTag::EmissionTimeRealism) {
      const double late1 = std::popcount(s1.delay_late & mask()) / static_cast<double>(n_);
      const double late2 = std::popcount(s2.delay_late & mask()) / static_cast<double>(n_);
      const double q = late1 * late2;  // P(LL) with uniform early settings
      for (std::size_t t = 0; t < T; ++t) {
        const auto a = terms_[t].site1_index, b = terms_[t].site2_index;
        const double ee = (s1.delay(a) == Delay::Early && s2.delay(b) == Delay::Early) ? 1.0 : 0.0;
        out[t] = ee + q;
        out[T + t] = ee * value(s1.outcome(a)) * value(s2.outcome(b)) +
                     q * value(s1.late_outcome(a)) * value(s2.late_outcome(b));
      }
      if (!targets_.empty()) {
        for (std::size_t a = 0; a < n_; ++a)
          for (std::size_t b = 0; b < n_; ++b)
            out[2 * T + a * n_ + b] = (s1.delay(a) == Delay::Early && s2.delay(b) == Delay::Early) ? 1.0 : 0.0;
        out[2 * T + n_ * n_] = q;
      }
      return;
    }

    for (std::size_t t = 0; t < T; ++t) {
      const auto a = terms_[t].site1_index, b = terms_[t].site2_index;
      double c = 1.0;
      if (tag == ModelTag::Inefficiency) {
        c = (s1.detected(a) && s2.detected(b)) ? 1.0 : 0.0;
      } else if (tag != ModelTag::PlainLocalRealism) {
        c = s1.delay(a) == s2.delay(b) ? 1.0 : 0.0;
      }
      out[t] = c;
      out[T + t] = c * value(s1.outcome(a)) * value(s2.outcome(b));
    }
    double* g = out.data() + 2 * T;
    switch (tag) {
      case ModelTag::OutcomesOnly:
        if (targets_.empty()) break;
        for (std::size_t a = 0; a < n_; ++a)
          for (std::size_t b = 0; b < n_; ++b) {
            g[2 * (a * n_ + b)] = (s1.delay(a) == Delay::Early && s2.delay(b) == Delay::Early) ? 1.0 : 0.0;
            g[2 * (a * n_ + b) + 1] = (s1.delay(a) == Delay::Late && s2.delay(b) == Delay::Late) ? 1.0 : 0.0;
          }
        break;
      case ModelTag::Delays:
        for (std::size_t a = 0; a < n_; ++a)
          for (std::size_t b = 0; b < n_; ++b) g[a * n_ + b] = s1.delay(a) == s2.delay(b) ? 1.0 : 0.0;
        break;
      case ModelTag::Inefficiency: {
        // P(both | a, b) - η P(site k detects) = 0 for each site.
        const double eta = *game_.model.eta();
        for (std::size_t a = 0; a < n_; ++a)
          for (std::size_t b = 0; b < n_; ++b) {
            const double both = (s1.detected(a) && s2.detected(b)) ? 1.0 : 0.0;
            g[2 * (a * n_ + b)] = both - eta * (s1.detected(a) ? 1.0 : 0.0);
            g[2 * (a * n_ + b) + 1] = both - eta * (s2.detected(b) ? 1.0 : 0.0);
          }
        break;
      }
      default: break;
    }
  }

  /// Chained statistic from per-term numerators and selection masses; NaN when a mass vanishes.
  double statistic(const double* num, const double* den) const {
    double total = 0.0;
    for (std::size_t t = 0; t + 1 < terms_.size(); t += 2) {
      if (!(den[t] > 0.0) || !(den[t + 1] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
      total += std::abs(terms_[t].sign * num[t] / den[t] + terms_[t + 1].sign * num[t + 1] / den[t + 1]);
    }
    return total;
  }

  int sign(std::size_t t) const { return terms_[t].sign; }

 private:
  std::uint32_t mask() const { return n_ >= 32 ? ~0U : ((1U << n_) - 1U); }

  const GameSpec& game_;
  std::size_t n_;
  const std::vector<ChainTerm>& terms_;
  std::vector<double> targets_;
};

void check_limit(const GameSpec& game) {
  const std::uint64_t per_side = site_vertex_count(game);
  if (per_side > (std::uint64_t{1} << 32) || per_side * per_side > game.vertex_limit) {
    throw ResourceLimitError("strategy space of " + game.model.name() + " with " +
                             std::to_string(game.chain.terms()) + " terms has more than " +
                             std::to_string(game.vertex_limit) + " joint vertices");
  }
}

// Distinct feature vectors with one representative vertex each.
struct VertexClasses {
  std::vector<std::vector<double>> features;
  std::vector<DeterministicVertex> representatives;
};

VertexClasses collect_classes(const GameSpec& game, const GameModel& model) {
  const auto sites = enumerate_site_vertices(game);
  std::map<std::vector<double>, std::size_t> index;
  VertexClasses out;
  std::vector<double> f;
  for (const auto& a : sites) {
    for (const auto& b : sites) {
      const DeterministicVertex v{a, b};
      model.features(v, f);
      auto [it, inserted] = index.try_emplace(f, out.features.size());
      if (inserted) {
        out.features.push_back(f);
        out.representatives.push_back(v);
      }
    }
  }
  return out;
}

std::string formalization_note(ModelTag tag) {
  switch (tag) {
    case ModelTag::PlainLocalRealism: return "deterministic outcome maps, every run coincident; exact vertex maximum";
    case ModelTag::PathRealism:
      return "outcome maps plus one setting-independent delay per site; coincidence iff delays agree; exact vertex "
             "maximum over coincident vertices";
    case ModelTag::OutcomesOnly:
      return "outcome and delay maps of the local setting; coincidence iff delays agree; multi-start projected "
             "gradient, best found";
    case ModelTag::Delays:
      return "OutcomesOnly strategies with P(coincidence | a, b) = eta for every setting pair; best found";
    case ModelTag::Inefficiency:
      return "outcome and detection maps; P(coincidence | local detection) = eta for every site and setting pair; "
             "best found";
    case ModelTag::EmissionTimeRealism:
      return "independent early and late settings per run; delay fixed by the early setting; Early detections "
             "report the early-setting outcome, Late detections the late-setting outcome; P(EE | a, b) = P(LL) "
             "pinned for every early pair; best found";
  }
  return {};
}

}  // namespace

GameSpec GameSpec::for_model(const ModelClass& mc, SettingsChain chain) {
  GameSpec g{mc, std::move(chain), std::nullopt};
  if (mc.tag() == ModelTag::EmissionTimeRealism) g.equal_delay_mass = 0.25;
  return g;
}

std::uint64_t site_vertex_count(const GameSpec& game) {
  const std::uint64_t maps = std::uint64_t{1} << game.chain.settings_per_site();
  switch (game.model.tag()) {
    case ModelTag::PlainLocalRealism: return maps;
    case ModelTag::PathRealism: return maps * 2;
    case ModelTag::OutcomesOnly:
    case ModelTag::Delays:
    case ModelTag::Inefficiency: return maps * maps;
    case ModelTag::EmissionTimeRealism: return maps * maps * maps;
  }
  return 0;
}

std::vector<SiteVertex> enumerate_site_vertices(const GameSpec& game) {
  check_limit(game);
  const std::size_t n = game.chain.settings_per_site();
  const std::uint32_t maps = 1U << n;
  const std::uint32_t all = maps - 1U;
  std::vector<SiteVertex> out;
  out.reserve(site_vertex_count(game));
  for (std::uint32_t o = 0; o < maps; ++o) {
    switch (game.model.tag()) {
      case ModelTag::PlainLocalRealism: out.push_back({o, 0, 0, 0}); break;
      case ModelTag::PathRealism:
        out.push_back({o, 0, 0, 0});
        out.push_back({o, 0, all, 0});
        break;
      case ModelTag::OutcomesOnly:
      case ModelTag::Delays:
        for (std::uint32_t d = 0; d < maps; ++d) out.push_back({o, 0, d, 0});
        break;
      case ModelTag::Inefficiency:
        for (std::uint32_t u = 0; u < maps; ++u) out.push_back({o, 0, 0, u});
        break;
      case ModelTag::EmissionTimeRealism:
        for (std::uint32_t l = 0; l < maps; ++l)
          for (std::uint32_t d = 0; d < maps; ++d) out.push_back({o, l, d, 0});
        break;
    }
  }
  return out;
}

std::vector<DeterministicVertex> enumerate_vertices(const GameSpec& game) {
  const auto sites = enumerate_site_vertices(game);
  std::vector<DeterministicVertex> out;
  out.reserve(sites.size() * sites.size());
  for (const auto& a : sites)
    for (const auto& b : sites) out.push_back({a, b});
  return out;
}

MixtureEvaluation evaluate_mixture(const GameSpec& game, const MixedStrategy& mix) {
  if (mix.vertices.size() != mix.weights.size()) throw std::invalid_argument("mixture needs one weight per vertex");
  const GameModel model(game);
  const std::size_t T = model.terms(), K = model.constraints();
  std::vector<double> sums(2 * T + K, 0.0), f;
  double total = 0.0;
  MixtureEvaluation ev;
  ev.min_weight = mix.weights.empty() ? 0.0 : *std::min_element(mix.weights.begin(), mix.weights.end());
  for (std::size_t i = 0; i < mix.vertices.size(); ++i) {
    model.features(mix.vertices[i], f);
    for (std::size_t k = 0; k < f.size(); ++k) sums[k] += mix.weights[i] * f[k];
    total += mix.weights[i];
  }
  ev.constraint_residual = std::abs(total - 1.0);
  for (std::size_t k = 0; k < K; ++k) {
    ev.constraint_residual = std::max(ev.constraint_residual, std::abs(sums[2 * T + k] - model.targets()[k]));
  }
  ev.statistic = model.statistic(sums.data() + T, sums.data());
  for (std::size_t t = 0; t < T; ++t) {
    ev.coincidence.push_back(sums[t]);
    ev.correlations.push_back(sums[t] > 0.0 ? sums[T + t] / sums[t] : std::numeric_limits<double>::quiet_NaN());
  }
  ev.feasible = ev.min_weight >= 0.0 && ev.constraint_residual < kFeasibilityTolerance && std::isfinite(ev.statistic);
  return ev;
}

namespace {

MaxResult exact_vertex_maximum(const GameSpec& game, const GameModel& model) {
  const auto sites = enumerate_site_vertices(game);
  const std::size_t T = model.terms();
  std::vector<double> f;
  MaxResult best;
  best.exact = true;
  best.value = -1.0;
  for (const auto& a : sites) {
    for (const auto& b : sites) {
      const DeterministicVertex v{a, b};
      model.features(v, f);
      const double s = model.statistic(f.data() + T, f.data());
      if (std::isfinite(s) && s > best.value) {
        best.value = s;
        best.witness = {{v}, {1.0}};
      }
    }
  }
  best.vertex_classes = sites.size() * sites.size();
  return best;
}

struct Objective {
  double value;
  bool defined;
};

class RatioAscent {
 public:
  RatioAscent(const GameModel& model, const VertexClasses& classes)
      : model_(model), T_(model.terms()), n_(classes.features.size()), num_(T_ * n_), den_(T_ * n_) {
    const std::size_t K = model.constraints();
    Eigen::MatrixXd rows(K + 1, static_cast<Eigen::Index>(n_));
    Eigen::VectorXd rhs(K + 1);
    rhs(0) = 1.0;
    for (std::size_t k = 0; k < K; ++k) rhs(static_cast<Eigen::Index>(k + 1)) = model.targets()[k];
    for (std::size_t i = 0; i < n_; ++i) {
      const auto& f = classes.features[i];
      rows(0, static_cast<Eigen::Index>(i)) = 1.0;
      for (std::size_t k = 0; k < K; ++k) rows(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(i)) = f[2 * T_ + k];
      for (std::size_t t = 0; t < T_; ++t) {
        den_[t * n_ + i] = f[t];
        num_[t * n_ + i] = f[T_ + t];
      }
    }
    projector_ = std::make_unique<detail::PolytopeProjector>(std::move(rows), std::move(rhs));
  }

  Objective evaluate(const Eigen::VectorXd& w, std::vector<double>& num, std::vector<double>& den) const {
    num.assign(T_, 0.0);
    den.assign(T_, 0.0);
    for (std::size_t t = 0; t < T_; ++t) {
      const double* nr = &num_[t * n_];
      const double* dr = &den_[t * n_];
      double sn = 0.0, sd = 0.0;
      for (std::size_t i = 0; i < n_; ++i) {
        sn += nr[i] * w(static_cast<Eigen::Index>(i));
        sd += dr[i] * w(static_cast<Eigen::Index>(i));
      }
      num[t] = sn;
      den[t] = sd;
    }
    for (double d : den) {
      if (!(d > 1e-12)) return {0.0, false};
    }
    return {model_.statistic(num.data(), den.data()), true};
  }

  /// One restart from the projection of `start`. Returns the final feasible point.
  Eigen::VectorXd run(const Eigen::VectorXd& start, int max_iterations, Objective& out, double& residual) {
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(projector_->rows());
    Eigen::VectorXd w = projector_->project(start, mu, residual);
    std::vector<double> num, den, num2, den2;
    Objective f = evaluate(w, num, den);
    Eigen::VectorXd grad(static_cast<Eigen::Index>(n_));
    double step = 1.0;
    for (int it = 0; it < max_iterations && f.defined; ++it) {
      grad.setZero();
      for (std::size_t t = 0; t + 1 < T_; t += 2) {
        const double e0 = num[t] / den[t], e1 = num[t + 1] / den[t + 1];
        const double group = model_.sign(t) * e0 + model_.sign(t + 1) * e1;
        const double s = group >= 0.0 ? 1.0 : -1.0;
        for (std::size_t k : {t, t + 1}) {
          const double coef = s * model_.sign(k) / den[k];
          const double e = num[k] / den[k];
          const double* nr = &num_[k * n_];
          const double* dr = &den_[k * n_];
          for (std::size_t i = 0; i < n_; ++i) grad(static_cast<Eigen::Index>(i)) += coef * (nr[i] - e * dr[i]);
        }
      }
      bool moved = false;
      while (step > 1e-10) {
        double res = 0.0;
        Eigen::VectorXd mu_try = mu;
        Eigen::VectorXd cand = projector_->project(w + step * grad, mu_try, res);
        const Objective g = evaluate(cand, num2, den2);
        if (g.defined && g.value > f.value + 1e-15) {
          const double change = (cand - w).lpNorm<Eigen::Infinity>();
          w = std::move(cand);
          mu = std::move(mu_try);
          residual = res;
          f = g;
          num.swap(num2);
          den.swap(den2);
          step = std::min(step * 2.0, 1e6);
          moved = change > 1e-15;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;
    }
    out = f;
    return w;
  }

  std::size_t size() const { return n_; }

 private:
  const GameModel& model_;
  std::size_t T_;
  std::size_t n_;
  std::vector<double> num_;  // T x n, row-major
  std::vector<double> den_;
  std::unique_ptr<detail::PolytopeProjector> projector_;
};

// Sparse random start: a few random classes with exponential weights, blended
// with a little uniform mass so every selection mass starts positive.
Eigen::VectorXd random_start(std::size_t n, const RandomSource& rs) {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 0.05 / static_cast<double>(n));
  const std::size_t picks = 1 + static_cast<std::size_t>(rs.uniform(0) * std::min<std::size_t>(n, 16));
  double total = 0.0;
  std::vector<std::pair<std::size_t, double>> chosen;
  for (std::size_t k = 0; k < picks; ++k) {
    const auto i = static_cast<std::size_t>(rs.uniform(2 * k + 1) * static_cast<double>(n)) % n;
    const double x = -std::log1p(-rs.uniform(2 * k + 2));
    chosen.emplace_back(i, x);
    total += x;
  }
  for (const auto& [i, x] : chosen) w(static_cast<Eigen::Index>(i)) += 0.95 * x / total;
  return w;
}

}  // namespace

MaxResult max_statistic(const GameSpec& game, const OptimizerBudget& budget) {
  check_limit(game);
  const GameModel model(game);
  if (!optimizer_class(game.model.tag())) return exact_vertex_maximum(game, model);
  if (budget.restarts < 1 || budget.max_iterations < 1) throw std::invalid_argument("optimizer budget must be positive");

  const VertexClasses classes = collect_classes(game, model);
  RatioAscent ascent(model, classes);
  const RandomSource rs(budget.seed, 0x5354524154ULL);

  MaxResult best;
  best.value = -1.0;
  best.vertex_classes = classes.features.size();
  Eigen::VectorXd best_w;
  for (int r = 0; r < budget.restarts; ++r) {
    Objective f{};
    double residual = 0.0;
    Eigen::VectorXd w = ascent.run(random_start(ascent.size(), rs.substream(static_cast<std::uint64_t>(r) + 1)),
                                   budget.max_iterations, f, residual);
    ++best.restarts_run;
    if (f.defined && residual < kFeasibilityTolerance && f.value > best.value) {
      best.value = f.value;
      best.constraint_residual = residual;
      best_w = std::move(w);
    }
  }
  if (best_w.size() == 0) throw std::runtime_error("no feasible mixture found for " + game.model.name());
  for (std::size_t i = 0; i < classes.features.size(); ++i) {
    const double wi = best_w(static_cast<Eigen::Index>(i));
    if (wi > 0.0) {
      best.witness.vertices.push_back(classes.representatives[i]);
      best.witness.weights.push_back(wi);
    }
  }
  return best;
}

BoundReport verify_bound(const GameSpec& game, const OptimizerBudget& budget) {
  BoundReport r;
  r.model = game.model;
  r.terms = game.chain.terms();
  r.bound = bound_for(game.model, r.terms);
  r.formalization = formalization_note(game.model.tag());
  const MaxResult m = max_statistic(game, budget);
  r.best_found = m.value;
  r.exact = m.exact;
  r.margin = r.bound - m.value;
  r.constraint_residual = m.constraint_residual;
  r.restarts = m.restarts_run;
  r.witness = m.witness;
  r.tight = m.exact && std::abs(m.value - r.bound) <= 1e-9;
  r.pass = m.value <= r.bound + 1e-6 && (!m.exact || r.tight);
  return r;
}

MixedStrategy aklz_witness(const SettingsChain& chain, const QuadratureGrid& grid) {
  std::map<std::pair<std::uint64_t, std::uint64_t>, double> measure;
  auto pack = [](std::span<const LocalResponse> rs) {
    SiteVertex v;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      if (rs[i].outcome == Outcome::Minus) v.outcome_minus |= 1U << i;
      if (rs[i].delay == Delay::Late) v.delay_late |= 1U << i;
      if (!rs[i].detected) v.undetected |= 1U << i;
    }
    return (std::uint64_t{v.outcome_minus} << 32) | (std::uint64_t{v.delay_late} << 16) | v.undetected;
  };
  integrate_strategy(aklz_strategy(), chain.site1_settings(), chain.site2_settings(), grid,
                     [&](double w, std::span<const LocalResponse> r1, std::span<const LocalResponse> r2) {
                       measure[{pack(r1), pack(r2)}] += w;
                     });
  auto unpack = [](std::uint64_t k) {
    return SiteVertex{static_cast<std::uint32_t>(k >> 32), 0, static_cast<std::uint32_t>((k >> 16) & 0xffffU),
                      static_cast<std::uint32_t>(k & 0xffffU)};
  };
  MixedStrategy mix;
  double total = 0.0;
  for (const auto& [key, w] : measure) total += w;
  for (const auto& [key, w] : measure) {
    mix.vertices.push_back({unpack(key.first), unpack(key.second)});
    mix.weights.push_back(w / total);
  }
  return mix;
}

LocalStrategy strategy_from_mixture(const GameSpec& game, const MixedStrategy& mix) {
  if (game.model.tag() == ModelTag::EmissionTimeRealism) {
    throw std::invalid_argument("emission-time vertices need two settings per run and have no single-setting form");
  }
  if (mix.vertices.empty() || mix.vertices.size() != mix.weights.size()) throw std::invalid_argument("empty mixture");
  auto cumulative = std::make_shared<std::vector<double>>();
  double acc = 0.0;
  for (double w : mix.weights) cumulative->push_back(acc += w);
  for (auto& c : *cumulative) c /= acc;
  auto vertices = std::make_shared<std::vector<DeterministicVertex>>(mix.vertices);
  auto pick = [cumulative](double r) {
    const auto it = std::upper_bound(cumulative->begin(), cumulative->end(), r);
    return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cumulative->begin(),
                                                             static_cast<std::ptrdiff_t>(cumulative->size()) - 1));
  };
  auto index_of = [](const std::vector<Setting>& settings, Setting s) {
    for (std::size_t i = 0; i < settings.size(); ++i) {
      if (settings[i] == s) return i;
    }
    throw std::invalid_argument("setting is not part of the mixture's chain");
  };
  auto respond = [](const SiteVertex& v, std::size_t i) { return LocalResponse{v.outcome(i), v.delay(i), v.detected(i)}; };
  const auto s1 = game.chain.site1_settings();
  const auto s2 = game.chain.site2_settings();
  return {"mixture",
          [=](Setting phi, const HiddenVariable& l) { return respond((*vertices)[pick(l.r)].site1, index_of(s1, phi)); },
          [=](Setting psi, const HiddenVariable& l) { return respond((*vertices)[pick(l.r)].site2, index_of(s2, psi)); }};
}

SettingsChain random_chain(int terms, const RandomSource& rs, std::uint64_t index) {
  require_chain_terms(terms);
  const std::size_t n = static_cast<std::size_t>(terms / 2);
  std::vector<Setting> s1, s2;
  std::uint64_t draw = index * 1024;
  auto fresh = [&](std::vector<Setting>& v) {
    for (;;) {
      const Setting s(kTwoPi * rs.uniform(draw++));
      if (std::find(v.begin(), v.end(), s) == v.end()) {
        v.push_back(s);
        return;
      }
    }
  };
  for (std::size_t k = 0; k < n; ++k) {
    fresh(s1);
    fresh(s2);
  }
  return SettingsChain::with_settings(std::move(s1), std::move(s2));
}

namespace {

nlohmann::json site_json(const SiteVertex& v, std::size_t n, ModelTag tag) {
  nlohmann::json outcomes = nlohmann::json::array(), delays = nlohmann::json::array(),
                 detected = nlohmann::json::array(), late = nlohmann::json::array();
  for (std::size_t i = 0; i < n; ++i) {
    outcomes.push_back(value(v.outcome(i)));
    delays.push_back(to_string(v.delay(i)));
    detected.push_back(v.detected(i));
    late.push_back(value(v.late_outcome(i)));
  }
  nlohmann::json j{{"outcomes", outcomes}, {"delays", delays}, {"detected", detected}};
  if (tag == ModelTag::EmissionTimeRealism) j["late_outcomes"] = late;
  return j;
}

}  // namespace

nlohmann::json to_json(const GameSpec& game, const MixedStrategy& mix) {
  const std::size_t n = game.chain.settings_per_site();
  nlohmann::json s1 = nlohmann::json::array(), s2 = nlohmann::json::array(), rows = nlohmann::json::array();
  for (const auto& s : game.chain.site1_settings()) s1.push_back(s.phase());
  for (const auto& s : game.chain.site2_settings()) s2.push_back(s.phase());
  for (std::size_t i = 0; i < mix.vertices.size(); ++i) {
    rows.push_back({{"weight", mix.weights[i]},
                    {"site1", site_json(mix.vertices[i].site1, n, game.model.tag())},
                    {"site2", site_json(mix.vertices[i].site2, n, game.model.tag())}});
  }
  return {{"model_class", game.model.name()},
          {"site1_settings_rad", s1},
          {"site2_settings_rad", s2},
          {"vertices", rows}};
}

nlohmann::json to_json(const BoundReport& r) {
  nlohmann::json j{{"model_class", r.model.name()},
                   {"terms", r.terms},
                   {"bound", r.bound},
                   {"best_found", r.best_found},
                   {"margin", r.margin},
                   {"exact", r.exact},
                   {"tight", r.tight},
                   {"pass", r.pass},
                   {"constraint_residual", r.constraint_residual},
                   {"restarts", r.restarts},
                   {"formalization", r.formalization}};
  if (r.model.eta()) j["eta"] = *r.model.eta();
  return j;
}

}  // namespace franson
