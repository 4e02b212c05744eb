#include <doctest.h>

#include <cmath>
#include <tuple>

#include "franson/quantum.hpp"

using namespace franson;

namespace {

constexpr DelayPattern kPatterns[] = {DelayPattern::EE, DelayPattern::EL, DelayPattern::LE, DelayPattern::LL};
constexpr Outcome kOutcomes[] = {Outcome::Plus, Outcome::Minus};

}  // namespace

TEST_SUITE("quantum") {
  TEST_CASE("Visibility range") {
    CHECK_NOTHROW(Visibility(0.0));
    CHECK_NOTHROW(Visibility(1.0));
    CHECK_THROWS_AS(Visibility(1.0001), std::invalid_argument);
    CHECK_THROWS_AS(Visibility(-0.1), std::invalid_argument);
  }

  TEST_CASE("singlet_correlation examples") {
    CHECK(singlet_correlation(Setting(0), Setting(0)) == doctest::Approx(-1.0));
    CHECK(std::abs(singlet_correlation(Setting(0), Setting(kPi / 2))) < 1e-15);
    CHECK(singlet_correlation(Setting(0), Setting(kPi)) == doctest::Approx(1.0));
  }

  TEST_CASE("franson_correlation examples") {
    CHECK(franson_correlation(Setting(0), Setting(0), Visibility(1.0)) == doctest::Approx(1.0));
    CHECK(std::abs(franson_correlation(Setting(kPi / 4), Setting(kPi / 4), Visibility(1.0))) < 1e-15);
    CHECK(franson_correlation(Setting(0), Setting(0), Visibility(0.9)) == doctest::Approx(0.9));
  }

  TEST_CASE("franson_joint examples") {
    const auto j = franson_joint(Setting(0), Setting(0), Visibility(1.0));
    CHECK(j.probability(DelayPattern::EE, Outcome::Plus, Outcome::Plus) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(j.total() == doctest::Approx(1.0).epsilon(1e-15));
    const auto anti = franson_joint(Setting(0), Setting(kPi), Visibility(1.0));
    double same = 0.0;
    for (auto p : {DelayPattern::EE, DelayPattern::LL})
      for (auto x : kOutcomes) same += anti.probability(p, x, x);
    CHECK(std::abs(same / anti.coincidence_probability()) < 1e-15);
  }

  // Oracle: the stated per-pattern table rebuilt here from its definition.
  TEST_CASE("joint table matches its definition, normalization and conditional correlation on a 12x12 grid") {
    for (double v : {0.0, 0.5, 0.9, 1.0}) {
      for (int i = 0; i < 12; ++i) {
        for (int k = 0; k < 12; ++k) {
          const Setting phi(i * kTwoPi / 12 + 0.05), psi(k * kTwoPi / 12 - 0.3);
          const auto j = franson_joint(phi, psi, Visibility(v));
          const double c = v * std::cos(phi.phase() + psi.phase());
          double total = 0.0, coinc = 0.0, prod = 0.0;
          for (auto p : kPatterns) {
            CHECK(j.pattern_probability(p) == doctest::Approx(0.25).epsilon(1e-15));
            for (auto x1 : kOutcomes)
              for (auto x2 : kOutcomes) {
                const double pr = j.probability(p, x1, x2);
                const double expected = is_coincident(p) ? 0.25 * (1 + value(x1) * value(x2) * c) / 4 : 0.25 / 4;
                CHECK(pr == doctest::Approx(expected).epsilon(1e-14));
                CHECK(pr >= 0.0);
                total += pr;
                if (is_coincident(p)) {
                  coinc += pr;
                  prod += pr * value(x1) * value(x2);
                }
              }
          }
          CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
          CHECK(coinc == doctest::Approx(0.5).epsilon(1e-14));
          CHECK(prod / coinc == doctest::Approx(franson_correlation(phi, psi, Visibility(v))).epsilon(1e-12));
          CHECK(j.conditional_correlation() == doctest::Approx(franson_correlation(phi, psi, Visibility(v))).epsilon(1e-12));
        }
      }
    }
  }

  TEST_CASE("no-signaling in the joint table is exact") {
    for (int i = 0; i < 10; ++i) {
      const Setting phi(i * 0.7);
      const auto ref = franson_joint(phi, Setting(0), Visibility(0.8));
      for (int k = 0; k < 10; ++k) {
        const auto j = franson_joint(phi, Setting(k * 0.61), Visibility(0.8));
        CHECK(j.site1_plus_probability() == doctest::Approx(ref.site1_plus_probability()).epsilon(1e-15));
        CHECK(j.site1_plus_probability() == doctest::Approx(0.5).epsilon(1e-15));
        const auto j2 = franson_joint(Setting(k * 0.61), phi, Visibility(0.8));
        CHECK(j2.site2_plus_probability() == doctest::Approx(0.5).epsilon(1e-15));
      }
    }
  }

  TEST_CASE("chained_quantum_value") {
    CHECK(std::abs(chained_quantum_value(4) - 2.828427) < 5e-7);
    CHECK(std::abs(chained_quantum_value(6) - 5.196152) < 5e-7);
    CHECK(std::abs(chained_quantum_value(8) - 7.391036) < 5e-7);
    CHECK(chained_quantum_value(4) == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(chained_quantum_value(3), std::invalid_argument);
    CHECK_THROWS_AS(chained_quantum_value(2), std::invalid_argument);
  }

  TEST_CASE("sampler is deterministic per trial") {
    const RandomSource rs(5, 5);
    for (std::uint64_t t = 0; t < 100; ++t) {
      const auto a = sample_franson_event(Setting(0.3), Setting(1.1), Visibility(0.9), rs, t);
      const auto b = sample_franson_event(Setting(0.3), Setting(1.1), Visibility(0.9), rs, t);
      CHECK(a.x1 == b.x1);
      CHECK(a.x2 == b.x2);
      CHECK(a.d1 == b.d1);
      CHECK(a.d2 == b.d2);
    }
  }

  TEST_CASE("sampler examples at 10^6 trials") {
    const RandomSource rs(11, 3);
    const std::uint64_t n = 1000000;
    auto run = [&](double psi, double& frac, double& corr) {
      std::uint64_t coinc = 0;
      std::int64_t prod = 0;
      for (std::uint64_t t = 0; t < n; ++t) {
        const auto e = sample_franson_event(Setting(0), Setting(psi), Visibility(1.0), rs, t);
        if (e.coincident()) {
          ++coinc;
          prod += value(e.x1) * value(e.x2);
        }
      }
      frac = static_cast<double>(coinc) / n;
      corr = static_cast<double>(prod) / coinc;
    };
    double frac = 0, corr = 0;
    run(0.0, frac, corr);
    CHECK(std::abs(frac - 0.5) < 0.0015);
    CHECK(std::abs(corr - 1.0) < 0.002);
    run(kPi / 2, frac, corr);
    CHECK(std::abs(corr) < 0.004);
  }

  TEST_CASE("sampler matches all 16 cells within 4 binomial standard errors at 10^6 trials") {
    const RandomSource rs(2, 8);
    const std::uint64_t n = 1000000;
    for (auto [phi, psi, v] : {std::tuple{0.4, 1.3, 1.0}, std::tuple{2.0, 0.1, 0.7}}) {
      std::array<std::uint64_t, 16> counts{};
      for (std::uint64_t t = 0; t < n; ++t) {
        const auto e = sample_franson_event(Setting(phi), Setting(psi), Visibility(v), rs, t);
        ++counts[FransonJointDistribution::index(pattern_of(e.d1, e.d2), e.x1, e.x2)];
      }
      const auto j = franson_joint(Setting(phi), Setting(psi), Visibility(v));
      for (auto p : kPatterns)
        for (auto x1 : kOutcomes)
          for (auto x2 : kOutcomes) {
            const double pr = j.probability(p, x1, x2);
            const double se = std::sqrt(pr * (1 - pr) / n);
            const double freq = static_cast<double>(counts[FransonJointDistribution::index(p, x1, x2)]) / n;
            CHECK(std::abs(freq - pr) < 4 * se + 1e-12);
          }
    }
  }
}
