#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "support/reference.hpp"
#include "support/testutil.hpp"
#include "volvol/rng.hpp"
#include "volvol/simulate.hpp"
#include "volvol/spot.hpp"

using volvol::EstimatorConfig;
using volvol::ModelSpec;
using volvol::SpotSeries;
using volvol::rng::Stream;

namespace {

std::vector<double> sample_path(std::size_t n, std::uint64_t id) {
  const ModelSpec spec = ModelSpec::heston(0.3, 5.0, 0.2, 0.5, -0.3, 0.0, 0.2);
  return volvol::simulate(spec, n, 2, Stream(101, id), 1.0).x;
}

void check_series_against_reference(const std::vector<double>& x,
                                    const EstimatorConfig& cfg) {
  const SpotSeries s = volvol::spot_series(x, cfg);
  const std::size_t n = x.size() - 1;
  REQUIRE(s.n == n);
  REQUIRE(s.s2.size() == n - s.kn + 1);
  REQUIRE(s.s4.size() == n - s.kn + 1);
  double scale2 = 0.0, scale4 = 0.0;
  for (std::size_t i = 0; i < s.s2.size(); ++i) {
    scale2 = std::max(scale2, std::abs(s.s2[i]));
    scale4 = std::max(scale4, std::abs(s.s4[i]));
  }
  for (std::size_t i = 0; i < s.s2.size(); ++i) {
    const double r2 = static_cast<double>(ref::sigma2(x, s.kn, i));
    const double r4 = static_cast<double>(ref::sigma4(x, s.kn, i));
    CHECK(testutil::close_abs_rel(s.s2[i], r2, scale2, 1e-12));
    CHECK(testutil::close_abs_rel(s.s4[i], r4, scale4, 1e-12));
  }
}

}  // namespace

TEST_CASE("rolling spot series equals the direct-sum reference") {
  check_series_against_reference(sample_path(300, 0), EstimatorConfig{});
  check_series_against_reference(sample_path(257, 4), EstimatorConfig{});
  EstimatorConfig narrow;
  narrow.c = 0.6;
  check_series_against_reference(sample_path(300, 8), narrow);
}

TEST_CASE("linear drift path has closed-form spot estimates") {
  // x_i = i/n with n a power of two: every increment is exactly 1/n, so
  // sigma2-hat = 1/n and sigma4-hat = 1/(3 n^2) at every grid point.
  const std::size_t n = 256;
  std::vector<double> x(n + 1);
  for (std::size_t i = 0; i <= n; ++i) x[i] = static_cast<double>(i) / 256.0;
  const SpotSeries s = volvol::spot_series(x, EstimatorConfig{});
  CHECK(s.kn == 16);
  const double expect2 = 1.0 / 256.0;
  const double expect4 = 1.0 / (3.0 * 256.0 * 256.0);
  for (double v : s.s2) CHECK(v == doctest::Approx(expect2).epsilon(1e-14));
  for (double v : s.s4) CHECK(v == doctest::Approx(expect4).epsilon(1e-14));
}

TEST_CASE("window size follows floor(c sqrt(n))") {
  EstimatorConfig cfg;
  CHECK(cfg.kn(2500) == 50);
  CHECK(cfg.kn(10000) == 100);
  CHECK(cfg.kn(300) == 17);
  cfg.c = 2.0;
  CHECK(cfg.kn(2500) == 100);
  cfg.c = 0.5;
  CHECK(cfg.kn(10000) == 50);
}

TEST_CASE("explicit window rule overrides the sqrt default") {
  EstimatorConfig cfg;
  cfg.kn_rule = [](std::size_t) { return std::size_t{7}; };
  CHECK(cfg.kn(300) == 7);
  const std::vector<double> x = sample_path(120, 12);
  const SpotSeries s = volvol::spot_series(x, cfg);
  CHECK(s.kn == 7);
  CHECK(s.s2.size() == 120 - 7 + 1);
  const double r = static_cast<double>(ref::sigma2(x, 7, 3));
  CHECK(testutil::close_abs_rel(s.s2[3], r, std::abs(r), 1e-12));
}

TEST_CASE("window validation") {
  EstimatorConfig cfg;
  CHECK_THROWS_AS((void)cfg.kn(3), std::invalid_argument);
  cfg.c = 0.1;
  CHECK_THROWS_AS((void)cfg.kn(100), std::invalid_argument);  // k = 1
  cfg.c = 3.0;
  CHECK_THROWS_AS((void)cfg.kn(100), std::invalid_argument);  // 4k > n
  cfg.c = -1.0;
  CHECK_THROWS_AS((void)cfg.kn(100), std::invalid_argument);
  cfg.c = 1.0;
  cfg.kn_rule = [](std::size_t) { return std::size_t{1}; };
  CHECK_THROWS_AS((void)cfg.kn(100), std::invalid_argument);
}

TEST_CASE("path validation rejects short or non-finite input") {
  EstimatorConfig cfg;
  std::vector<double> tiny{0.0, 0.1, 0.2, 0.3};
  CHECK_THROWS_AS((void)volvol::spot_series(tiny, cfg), std::invalid_argument);
  std::vector<double> x = sample_path(100, 16);
  x[40] = std::nan("");
  CHECK_THROWS_AS((void)volvol::spot_series(x, cfg), std::invalid_argument);
  x[40] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS((void)volvol::spot_series(x, cfg), std::invalid_argument);
}

TEST_CASE("rolling power sums are non-negative and match direct sums") {
  const std::vector<double> x = sample_path(200, 20);
  const std::size_t k = 9;
  const std::vector<double> r8 = volvol::rolling_power_sums(x, k, 8);
  REQUIRE(r8.size() == 200 - k + 1);
  double scale = 0.0;
  for (double v : r8) scale = std::max(scale, v);
  for (std::size_t i = 0; i < r8.size(); ++i) {
    long double direct = 0.0L;
    for (std::size_t j = 1; j <= k; ++j) {
      const long double d = ref::inc(x, i + j);
      const long double d2 = d * d, d4 = d2 * d2;
      direct += d4 * d4;
    }
    CHECK(r8[i] >= 0.0);
    CHECK(testutil::close_abs_rel(r8[i], static_cast<double>(direct), scale, 1e-12));
  }
  CHECK_THROWS_AS((void)volvol::rolling_power_sums(x, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS((void)volvol::rolling_power_sums(x, 201, 2), std::invalid_argument);
}

TEST_CASE("path overload matches vector overload") {
  const ModelSpec spec = ModelSpec::heston(0.3, 5.0, 0.2, 0.5, 0.0, 0.0, 0.2);
  const volvol::SampledPath p = volvol::simulate(spec, 150, 2, Stream(31, 0), 1.0);
  const EstimatorConfig cfg;
  const SpotSeries a = volvol::spot_series(p, cfg);
  const SpotSeries b = volvol::spot_series(p.x, cfg);
  CHECK(a.s2 == b.s2);
  CHECK(a.s4 == b.s4);
}
