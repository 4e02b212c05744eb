#include "franson/core.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace franson {

double reduce_angle(double radians) {
  if (!std::isfinite(radians)) throw std::invalid_argument("angle must be finite");
  double r = std::fmod(radians, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;  // fmod + 2π can round up to exactly 2π
  return r;
}

bool operator==(Setting a, Setting b) {
  const double d = std::abs(a.phase_ - b.phase_);
  return std::min(d, kTwoPi - d) <= kAngleTolerance;
}

const char* to_string(Delay d) { return d == Delay::Early ? "E" : "L"; }

HiddenVariable HiddenVariable::make(double theta, double r) {
  if (!(theta >= 0.0 && theta < kTwoPi)) throw std::invalid_argument("theta must lie in [0, 2pi)");
  if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("r must lie in [0, 1)");
  return {theta, r};
}

void require_chain_terms(int terms) {
  if (terms < 4 || terms % 2 != 0) {
    throw std::invalid_argument("chain needs an even number of terms >= 4, got " + std::to_string(terms));
  }
}

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) i = parent[i] = parent[parent[i]];
  return i;
}

}  // namespace

SettingsChain::SettingsChain(std::vector<Setting> site1, std::vector<Setting> site2, std::vector<ChainTerm> order)
    : site1_(std::move(site1)), site2_(std::move(site2)), order_(std::move(order)) {
  const std::size_t n = site1_.size();
  if (n < 2 || site2_.size() != n) throw std::invalid_argument("chain needs N >= 2 settings on each site");
  if (order_.size() != 2 * n) throw std::invalid_argument("chain term order must have 2N entries");

  std::vector<int> deg1(n, 0), deg2(n, 0);
  int minus = 0;
  for (std::size_t k = 0; k < order_.size(); ++k) {
    const auto& t = order_[k];
    if (t.site1_index >= n || t.site2_index >= n) throw std::invalid_argument("chain term index out of range");
    if (t.sign != 1 && t.sign != -1) throw std::invalid_argument("chain term sign must be +1 or -1");
    if (t.sign == -1) ++minus;
    ++deg1[t.site1_index];
    ++deg2[t.site2_index];
    for (std::size_t j = 0; j < k; ++j) {
      if (order_[j].site1_index == t.site1_index && order_[j].site2_index == t.site2_index) {
        throw std::invalid_argument("chain visits a setting pair twice");
      }
    }
  }
  if (minus != 1) throw std::invalid_argument("chain must carry exactly one minus sign");
  for (std::size_t i = 0; i < n; ++i) {
    if (deg1[i] != 2 || deg2[i] != 2) throw std::invalid_argument("every chain setting must appear in exactly two terms");
  }
  for (std::size_t k = 0; k < order_.size(); k += 2) {
    if (order_[k].site1_index != order_[k + 1].site1_index) {
      throw std::invalid_argument("each absolute-value group must share its site-1 setting");
    }
  }
  // Degree two everywhere plus connectivity means the terms form one closed chain.
  std::vector<std::size_t> parent(2 * n);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& t : order_) parent[find_root(parent, t.site1_index)] = find_root(parent, n + t.site2_index);
  for (std::size_t i = 1; i < 2 * n; ++i) {
    if (find_root(parent, i) != find_root(parent, 0)) throw std::invalid_argument("chain terms do not form a single cycle");
  }
}

SettingsChain SettingsChain::with_settings(std::vector<Setting> site1, std::vector<Setting> site2) {
  const std::size_t n = site1.size();
  std::vector<ChainTerm> order;
  order.reserve(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    order.push_back({k, k, 1});
    order.push_back({k, (k + 1) % n, k + 1 < n ? 1 : -1});
  }
  return SettingsChain(std::move(site1), std::move(site2), std::move(order));
}

SettingsChain chain_settings(int terms) {
  require_chain_terms(terms);
  const std::size_t n = static_cast<std::size_t>(terms / 2);
  const double step = kPi / terms;
  std::vector<Setting> site1, site2;
  for (std::size_t k = 0; k < n; ++k) {
    site1.emplace_back(static_cast<double>(2 * k + 1) * step);
    site2.emplace_back(-static_cast<double>(2 * k) * step);
  }
  return SettingsChain::with_settings(std::move(site1), std::move(site2));
}

}  // namespace franson
