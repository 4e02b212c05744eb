// Deterministic integration of a local strategy over the hidden-variable
// rectangle Λ = [0, 2π) × [0, 1).
#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "franson/core.hpp"
#include "franson/lhv.hpp"

namespace franson {

struct QuadratureGrid {
  std::size_t theta_cells = 4096;
  std::size_t r_cells = 1024;
};

/// Receives the measure of one piece of Λ together with the responses of every
/// site-1 and site-2 setting on that piece.
using QuadratureVisitor =
    std::function<void(double weight, std::span<const LocalResponse> site1, std::span<const LocalResponse> site2)>;

/// Integrates a strategy treated as a black box.
///
/// Responses are assumed piecewise constant in r and piecewise smooth in θ. On
/// each θ node the r axis is scanned on the grid and every change of response
/// is located by bisection, so the r integral is exact to rounding. Along θ,
/// cells in which the sequence of responses changes are split at the bisected
/// change point; each piece is integrated with two-point Gauss-Legendre.
/// Pieces whose responses change twice inside one grid cell are not resolved.
void integrate_strategy(const LocalStrategy& strategy, std::span<const Setting> site1_settings,
                        std::span<const Setting> site2_settings, const QuadratureGrid& grid,
                        const QuadratureVisitor& visit);

/// Exact (quadrature) statistics of one setting pair. All masses are fractions of all runs.
struct PairStatistics {
  double coincidence = 0.0;
  double early_early = 0.0;
  double late_late = 0.0;
  double product_sum = 0.0;  ///< ∫ X1·X2 over coincidences
  double site1_sum = 0.0;    ///< ∫ X1 over coincidences
  double site2_sum = 0.0;    ///< ∫ X2 over coincidences
  double site1_plus = 0.0;   ///< P(site 1 detected with X1 = +1)
  double site2_plus = 0.0;
  double site1_early = 0.0;  ///< P(site 1 detected Early)
  double site2_early = 0.0;
  double site1_detected = 0.0;
  double site2_detected = 0.0;

  double conditional_correlation() const { return product_sum / coincidence; }
};

class QuadratureTable {
 public:
  static QuadratureTable integrate(const LocalStrategy& strategy, std::vector<Setting> site1_settings,
                                   std::vector<Setting> site2_settings, const QuadratureGrid& grid = {});

  const PairStatistics& at(std::size_t i, std::size_t j) const { return stats_[i * site2_.size() + j]; }
  const std::vector<Setting>& site1_settings() const { return site1_; }
  const std::vector<Setting>& site2_settings() const { return site2_; }

 private:
  std::vector<Setting> site1_;
  std::vector<Setting> site2_;
  std::vector<PairStatistics> stats_;
};

}  // namespace franson
