#include "franson/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace franson {

namespace {

struct Segment {
  double end;
  LocalResponse response;
};

using Profile = std::vector<Segment>;

// Response of one site/setting along r at fixed θ, as constant segments covering [0, 1).
Profile scan_r(const SiteResponse& fn, Setting s, double theta, std::size_t cells) {
  const double last = std::nextafter(1.0, 0.0);
  auto at = [&](double r) { return fn(s, HiddenVariable{theta, r}); };

  Profile out;
  double lo = 0.0;
  LocalResponse current = at(0.0);
  for (std::size_t i = 1; i <= cells; ++i) {
    const double hi = i == cells ? last : static_cast<double>(i) / static_cast<double>(cells);
    const LocalResponse target = at(hi);
    // More than one change may sit inside [lo, hi]; peel them off left to right.
    while (!(current == target)) {
      double a = lo, b = hi;
      LocalResponse rb = target;
      while (b - a > 4 * std::numeric_limits<double>::epsilon()) {
        const double m = 0.5 * (a + b);
        const LocalResponse rm = at(m);
        if (rm == current) {
          a = m;
        } else {
          b = m;
          rb = rm;
        }
      }
      out.push_back({b, current});
      current = rb;
      lo = b;
    }
    lo = hi;
  }
  out.push_back({1.0, current});
  return out;
}

bool same_shape(const Profile& a, const Profile& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i].response == b[i].response)) return false;
  }
  return true;
}

struct Probe {
  const SiteResponse* fn;
  Setting setting;
};

std::vector<Probe> make_probes(const LocalStrategy& strategy, std::span<const Setting> s1, std::span<const Setting> s2) {
  std::vector<Probe> probes;
  for (auto s : s1) probes.push_back({&strategy.site1, s});
  for (auto s : s2) probes.push_back({&strategy.site2, s});
  return probes;
}

}  // namespace

void integrate_strategy(const LocalStrategy& strategy, std::span<const Setting> site1_settings,
                        std::span<const Setting> site2_settings, const QuadratureGrid& grid,
                        const QuadratureVisitor& visit) {
  if (grid.theta_cells == 0 || grid.r_cells == 0) throw std::invalid_argument("quadrature grid must be non-empty");
  const auto probes = make_probes(strategy, site1_settings, site2_settings);
  const std::size_t nt = grid.theta_cells;
  const std::size_t nr = grid.r_cells;
  const double dtheta = kTwoPi / static_cast<double>(nt);
  const double theta_end = std::nextafter(kTwoPi, 0.0);

  auto node = [&](std::size_t j) { return j == nt ? theta_end : dtheta * static_cast<double>(j); };

  // θ breakpoints: where any probe's response sequence changes between grid nodes.
  std::vector<double> cuts;
  cuts.reserve(nt + 1 + 4 * probes.size());
  for (std::size_t j = 0; j <= nt; ++j) cuts.push_back(node(j));
  for (const auto& p : probes) {
    Profile prev = scan_r(*p.fn, p.setting, node(0), nr);
    for (std::size_t j = 1; j <= nt; ++j) {
      Profile next = scan_r(*p.fn, p.setting, node(j), nr);
      if (!same_shape(prev, next)) {
        double a = node(j - 1), b = node(j);
        const Profile& left = prev;
        while (b - a > 8 * std::numeric_limits<double>::epsilon() * kTwoPi) {
          const double m = 0.5 * (a + b);
          if (same_shape(scan_r(*p.fn, p.setting, m, nr), left)) {
            a = m;
          } else {
            b = m;
          }
        }
        cuts.push_back(0.5 * (a + b));
      }
      prev = std::move(next);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double gauss = 0.5 / std::sqrt(3.0);
  std::vector<Profile> profiles(probes.size());
  std::vector<std::size_t> cursor(probes.size());
  std::vector<LocalResponse> responses(probes.size());
  const std::size_t n1 = site1_settings.size();
  const std::span<const LocalResponse> all(responses);

  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double a = cuts[c], b = cuts[c + 1];
    const double mid = 0.5 * (a + b), half = b - a;
    for (double theta : {mid - gauss * half, mid + gauss * half}) {
      const double theta_weight = 0.5 * (b - a) / kTwoPi;
      for (std::size_t k = 0; k < probes.size(); ++k) {
        profiles[k] = scan_r(*probes[k].fn, probes[k].setting, theta, nr);
        cursor[k] = 0;
      }
      double r = 0.0;
      while (r < 1.0) {
        double end = 1.0;
        for (std::size_t k = 0; k < probes.size(); ++k) {
          responses[k] = profiles[k][cursor[k]].response;
          end = std::min(end, profiles[k][cursor[k]].end);
        }
        if (end > r) visit(theta_weight * (end - r), all.first(n1), all.subspan(n1));
        for (std::size_t k = 0; k < probes.size(); ++k) {
          if (profiles[k][cursor[k]].end <= end && cursor[k] + 1 < profiles[k].size()) ++cursor[k];
        }
        r = end;
      }
    }
  }
}

QuadratureTable QuadratureTable::integrate(const LocalStrategy& strategy, std::vector<Setting> site1_settings,
                                           std::vector<Setting> site2_settings, const QuadratureGrid& grid) {
  QuadratureTable t;
  t.site1_ = std::move(site1_settings);
  t.site2_ = std::move(site2_settings);
  const std::size_t n2 = t.site2_.size();
  t.stats_.assign(t.site1_.size() * n2, PairStatistics{});

  integrate_strategy(strategy, t.site1_, t.site2_, grid,
                     [&](double w, std::span<const LocalResponse> r1, std::span<const LocalResponse> r2) {
                       for (std::size_t i = 0; i < r1.size(); ++i) {
                         const auto& a = r1[i];
                         for (std::size_t j = 0; j < r2.size(); ++j) {
                           const auto& b = r2[j];
                           PairStatistics& s = t.stats_[i * n2 + j];
                           if (a.detected) {
                             s.site1_detected += w;
                             if (a.outcome == Outcome::Plus) s.site1_plus += w;
                             if (a.delay == Delay::Early) s.site1_early += w;
                           }
                           if (b.detected) {
                             s.site2_detected += w;
                             if (b.outcome == Outcome::Plus) s.site2_plus += w;
                             if (b.delay == Delay::Early) s.site2_early += w;
                           }
                           if (a.detected && b.detected && a.delay == b.delay) {
                             s.coincidence += w;
                             (a.delay == Delay::Early ? s.early_early : s.late_late) += w;
                             s.product_sum += w * value(a.outcome) * value(b.outcome);
                             s.site1_sum += w * value(a.outcome);
                             s.site2_sum += w * value(b.outcome);
                           }
                         }
                       }
                     });
  return t;
}

}  // namespace franson
