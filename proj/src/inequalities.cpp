#include "franson/inequalities.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace franson {

CorrelationEntry& CorrelationTable::slot(Setting site1, Setting site2) {
  for (auto& e : entries_) {
    if (e.site1 == site1 && e.site2 == site2) return e;
  }
  entries_.push_back({site1, site2});
  return entries_.back();
}

void CorrelationTable::set_exact(Setting site1, Setting site2, double value) {
  if (!(std::abs(value) <= 1.0)) throw std::invalid_argument("correlation must lie in [-1, 1]");
  auto& e = slot(site1, site2);
  e.estimate = value;
  e.count = 0;
  e.standard_error = 0.0;
  e.exact = true;
}

void CorrelationTable::set_counts(Setting site1, Setting site2, std::int64_t product_sum, std::uint64_t count) {
  if (count == 0) throw std::invalid_argument("correlation estimate needs at least one coincidence");
  if (static_cast<std::uint64_t>(std::abs(product_sum)) > count) throw std::invalid_argument("|product sum| exceeds count");
  auto& e = slot(site1, site2);
  e.estimate = static_cast<double>(product_sum) / static_cast<double>(count);
  e.count = count;
  e.standard_error = std::sqrt((1.0 - e.estimate * e.estimate) / static_cast<double>(count));
  e.exact = false;
}

const CorrelationEntry* CorrelationTable::find(Setting site1, Setting site2) const {
  for (const auto& e : entries_) {
    if (e.site1 == site1 && e.site2 == site2) return &e;
  }
  return nullptr;
}

const CorrelationEntry& CorrelationTable::at(Setting site1, Setting site2) const {
  if (const auto* e = find(site1, site2)) return *e;
  throw std::invalid_argument("correlation table has no entry for settings (" + std::to_string(site1.phase()) + ", " +
                              std::to_string(site2.phase()) + ")");
}

std::uint64_t CorrelationTable::total_count() const {
  std::uint64_t n = 0;
  for (const auto& e : entries_) n += e.count;
  return n;
}

void CorrelationAccumulator::add(Setting site1, Setting site2, int product) {
  for (auto& t : tallies_) {
    if (t.site1 == site1 && t.site2 == site2) {
      t.product_sum += product;
      ++t.count;
      return;
    }
  }
  tallies_.push_back({site1, site2, product, 1});
}

CorrelationTable CorrelationAccumulator::table() const {
  CorrelationTable t;
  for (const auto& tally : tallies_) t.set_counts(tally.site1, tally.site2, tally.product_sum, tally.count);
  return t;
}

CorrelationTable exact_table(const SettingsChain& chain, const std::function<double(Setting, Setting)>& correlation) {
  CorrelationTable t;
  for (const auto& term : chain.term_order()) {
    const Setting a = chain.site1_of(term), b = chain.site2_of(term);
    t.set_exact(a, b, correlation(a, b));
  }
  return t;
}

double chsh_statistic(const CorrelationTable& table, const SettingsChain& chain) {
  if (chain.terms() != 4) throw std::invalid_argument("CHSH statistic needs a four-term chain");
  const Setting alpha = chain.site1_settings()[0], gamma = chain.site1_settings()[1];
  const Setting delta = chain.site2_settings()[0], beta = chain.site2_settings()[1];
  auto e = [&](Setting a, Setting b) { return table.at(a, b).estimate; };
  return std::abs(e(alpha, delta) + e(alpha, beta)) + std::abs(e(gamma, beta) - e(gamma, delta));
}

double chained_statistic(const CorrelationTable& table, const SettingsChain& chain) {
  const auto& order = chain.term_order();
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < order.size(); k += 2) {
    const auto& t0 = order[k];
    const auto& t1 = order[k + 1];
    total += std::abs(t0.sign * table.at(chain.site1_of(t0), chain.site2_of(t0)).estimate +
                      t1.sign * table.at(chain.site1_of(t1), chain.site2_of(t1)).estimate);
  }
  return total;
}

ModelClass::ModelClass(ModelTag tag, std::optional<double> eta) : tag_(tag), eta_(eta) {
  if (requires_eta(tag)) {
    if (!eta || !(*eta > 0.0 && *eta <= 1.0)) throw std::invalid_argument("efficiency eta must lie in (0, 1]");
  } else if (eta) {
    throw std::invalid_argument("model class " + name() + " takes no efficiency");
  }
}

std::string ModelClass::name() const {
  switch (tag_) {
    case ModelTag::PlainLocalRealism: return "PlainLocalRealism";
    case ModelTag::Inefficiency: return "Inefficiency";
    case ModelTag::Delays: return "Delays";
    case ModelTag::PathRealism: return "PathRealism";
    case ModelTag::EmissionTimeRealism: return "EmissionTimeRealism";
    case ModelTag::OutcomesOnly: return "OutcomesOnly";
  }
  return "unknown";
}

ModelClass ModelClass::from_name(const std::string& name, std::optional<double> eta) {
  static constexpr std::pair<const char*, ModelTag> kNames[] = {
      {"PlainLocalRealism", ModelTag::PlainLocalRealism},     {"Inefficiency", ModelTag::Inefficiency},
      {"Delays", ModelTag::Delays},                           {"PathRealism", ModelTag::PathRealism},
      {"EmissionTimeRealism", ModelTag::EmissionTimeRealism}, {"OutcomesOnly", ModelTag::OutcomesOnly},
  };
  for (const auto& [n, tag] : kNames) {
    if (name == n) return ModelClass(tag, requires_eta(tag) ? eta : std::nullopt);
  }
  throw std::invalid_argument("unknown model class '" + name + "'");
}

double bound_for(const ModelClass& mc, int terms) {
  require_chain_terms(terms);
  auto chsh_only = [&] {
    if (terms != 4) throw std::invalid_argument(mc.name() + " bound is defined for the four-term CHSH statistic only");
  };
  const double max = terms;
  switch (mc.tag()) {
    case ModelTag::PlainLocalRealism: return terms - 2.0;
    case ModelTag::Inefficiency: chsh_only(); return std::min(4.0 / *mc.eta() - 2.0, max);
    case ModelTag::Delays: chsh_only(); return std::min(6.0 / *mc.eta() - 4.0, max);
    case ModelTag::PathRealism: chsh_only(); return 2.0;
    case ModelTag::EmissionTimeRealism: return terms - 1.0;
    case ModelTag::OutcomesOnly: return max;
  }
  throw std::invalid_argument("unknown model class");
}

double threshold_efficiency(const ModelClass& mc) {
  const double target = 2.0 * std::sqrt(2.0);
  switch (mc.tag()) {
    case ModelTag::Inefficiency: return 4.0 / (target + 2.0);  // 4/η - 2 = 2√2
    case ModelTag::Delays: return 6.0 / (target + 4.0);        // 6/η - 4 = 2√2
    default: throw std::invalid_argument("threshold efficiency is defined for Inefficiency and Delays only");
  }
}

double critical_visibility(int terms) {
  require_chain_terms(terms);
  return (terms - 1.0) / (terms * std::cos(kPi / terms));
}

Verdict evaluate(const CorrelationTable& table, const SettingsChain& chain, const ModelClass& mc) {
  Verdict v;
  v.model = mc;
  v.terms = chain.terms();
  v.statistic = chain.terms() == 4 ? chsh_statistic(table, chain) : chained_statistic(table, chain);
  v.bound = bound_for(mc, chain.terms());
  v.excess = v.statistic - v.bound;
  v.violated = v.excess > 0.0;
  double var = 0.0;
  for (const auto& t : chain.term_order()) {
    const auto& e = table.at(chain.site1_of(t), chain.site2_of(t));
    var += e.standard_error * e.standard_error;
    v.coincidences += e.count;
  }
  v.standard_error = std::sqrt(var);
  if (v.standard_error > 0.0) {
    v.significance = v.excess / v.standard_error;
  } else {
    v.significance = v.excess == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), v.excess);
  }
  return v;
}

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j;
  j["model_class"] = v.model.name();
  if (v.model.eta()) j["eta"] = *v.model.eta();
  j["terms"] = v.terms;
  j["statistic"] = v.statistic;
  j["bound"] = v.bound;
  j["excess"] = v.excess;
  j["standard_error"] = v.standard_error;
  j["significance"] = std::isfinite(v.significance) ? nlohmann::json(v.significance) : nlohmann::json(nullptr);
  j["significance_convention"] = "gaussian: excess / quadrature sum of per-term standard errors";
  j["violated"] = v.violated;
  j["coincidences"] = v.coincidences;
  return j;
}

nlohmann::json to_json(const CorrelationTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : t.entries()) {
    rows.push_back({{"site1_rad", e.site1.phase()},
                    {"site2_rad", e.site2.phase()},
                    {"estimate", e.estimate},
                    {"count", e.count},
                    {"standard_error", e.standard_error},
                    {"exact", e.exact}});
  }
  return rows;
}

}  // namespace franson
