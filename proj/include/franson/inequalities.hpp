// Correlation estimates, Bell statistics and the bound for each local-realist model class.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "franson/core.hpp"

namespace franson {

/// Conditional correlation E(X1 X2 | coinc.) for one setting pair.
/// Exact entries come from closed forms or quadrature and have zero standard error.
struct CorrelationEntry {
  Setting site1;
  Setting site2;
  double estimate = 0.0;
  std::uint64_t count = 0;
  double standard_error = 0.0;
  bool exact = false;
};

class CorrelationTable {
 public:
  /// Replaces any existing entry for the pair. Throws if |value| > 1.
  void set_exact(Setting site1, Setting site2, double value);
  /// Estimate from the sum of ±1 products over count coincidences; standard error sqrt((1 - E²)/count).
  void set_counts(Setting site1, Setting site2, std::int64_t product_sum, std::uint64_t count);

  const CorrelationEntry* find(Setting site1, Setting site2) const;
  /// Throws std::invalid_argument when the pair is missing.
  const CorrelationEntry& at(Setting site1, Setting site2) const;
  const std::vector<CorrelationEntry>& entries() const { return entries_; }
  std::uint64_t total_count() const;

 private:
  CorrelationEntry& slot(Setting site1, Setting site2);
  std::vector<CorrelationEntry> entries_;
};

/// Tallies ±1 products per setting pair.
class CorrelationAccumulator {
 public:
  void add(Setting site1, Setting site2, int product);
  CorrelationTable table() const;

 private:
  struct Tally {
    Setting site1;
    Setting site2;
    std::int64_t product_sum = 0;
    std::uint64_t count = 0;
  };
  std::vector<Tally> tallies_;
};

/// Exact table for every pair the chain uses.
CorrelationTable exact_table(const SettingsChain& chain, const std::function<double(Setting, Setting)>& correlation);

/// |E(α,δ) + E(α,β)| + |E(γ,β) - E(γ,δ)| with α, γ the site-1 and δ, β the site-2
/// settings of a four-term chain.
double chsh_statistic(const CorrelationTable& table, const SettingsChain& chain);

/// Σ over consecutive term pairs of |s·E + s'·E'|, in chain term order.
double chained_statistic(const CorrelationTable& table, const SettingsChain& chain);

enum class ModelTag { PlainLocalRealism, Inefficiency, Delays, PathRealism, EmissionTimeRealism, OutcomesOnly };

class ModelClass {
 public:
  static ModelClass plain_local_realism() { return ModelClass(ModelTag::PlainLocalRealism); }
  static ModelClass inefficiency(double eta) { return ModelClass(ModelTag::Inefficiency, eta); }
  static ModelClass delays(double eta) { return ModelClass(ModelTag::Delays, eta); }
  static ModelClass path_realism() { return ModelClass(ModelTag::PathRealism); }
  static ModelClass emission_time_realism() { return ModelClass(ModelTag::EmissionTimeRealism); }
  static ModelClass outcomes_only() { return ModelClass(ModelTag::OutcomesOnly); }

  /// Parses the names produced by name(); Inefficiency/Delays need eta.
  static ModelClass from_name(const std::string& name, std::optional<double> eta = std::nullopt);

  ModelTag tag() const { return tag_; }
  std::optional<double> eta() const { return eta_; }
  std::string name() const;
  static bool requires_eta(ModelTag tag) { return tag == ModelTag::Inefficiency || tag == ModelTag::Delays; }

  friend bool operator==(const ModelClass&, const ModelClass&) = default;

 private:
  explicit ModelClass(ModelTag tag, std::optional<double> eta = std::nullopt);
  ModelTag tag_;
  std::optional<double> eta_;
};

/// Upper bound on the chained statistic for a model class, clipped at the algebraic maximum `terms`.
///
///   PlainLocalRealism   terms - 2
///   Inefficiency(η)     4/η - 2      (terms = 4)
///   Delays(η)           6/η - 4      (terms = 4)
///   PathRealism         2            (terms = 4)
///   EmissionTimeRealism terms - 1
///   OutcomesOnly        terms
double bound_for(const ModelClass& mc, int terms);

/// η at which the CHSH bound of Inefficiency or Delays equals 2√2.
double threshold_efficiency(const ModelClass& mc);

/// (terms - 1)/(terms·cos(π/terms)): visibility above which the quantum
/// chained value exceeds the emission-time-realism bound.
double critical_visibility(int terms);

struct Verdict {
  ModelClass model = ModelClass::plain_local_realism();
  int terms = 4;
  double statistic = 0.0;
  double bound = 0.0;
  double excess = 0.0;
  double standard_error = 0.0;
  /// excess / standard_error; ±infinity for exact tables.
  double significance = 0.0;
  bool violated = false;
  std::uint64_t coincidences = 0;
};

/// Statistic (CHSH for 4 terms, chained otherwise) against the class bound.
/// The standard error is the quadrature sum of the per-term standard errors.
Verdict evaluate(const CorrelationTable& table, const SettingsChain& chain, const ModelClass& mc);

nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const CorrelationTable& t);

}  // namespace franson
