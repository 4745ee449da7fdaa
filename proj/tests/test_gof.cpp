#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "support/reference.hpp"
#include "support/testutil.hpp"
#include "volvol/errors.hpp"
#include "volvol/gof.hpp"
#include "volvol/rng.hpp"
#include "volvol/simulate.hpp"

using volvol::DesignStats;
using volvol::EstimatorConfig;
using volvol::GofReport;
using volvol::ModelSpec;
using volvol::SpotSeries;
using volvol::Tau2Fn;
using volvol::rng::Stream;

namespace {

volvol::SampledPath sample(std::size_t n, std::uint64_t id) {
  const ModelSpec spec = ModelSpec::heston(0.3, 5.0, 0.2, 0.5, 0.0, 0.0, 0.2);
  return volvol::simulate(spec, n, 2, Stream(211, id), 1.0);
}

void check_vec(const std::vector<double>& got, const std::vector<long double>& want,
               double tol) {
  REQUIRE(got.size() == want.size());
  double scale = 1e-12;
  for (long double v : want) scale = std::max(scale, std::abs(static_cast<double>(v)));
  for (std::size_t i = 0; i < got.size(); ++i) {
    CHECK(testutil::close_abs_rel(got[i], static_cast<double>(want[i]), scale, tol));
  }
}

}  // namespace

TEST_CASE("hypothesized-shape design moments match the direct reference") {
  const volvol::SampledPath p = sample(300, 0);
  const EstimatorConfig cfg;
  const SpotSeries s = volvol::spot_series(p, cfg);
  const std::vector<double> t2 = volvol::tau2_series(s);
  const Tau2Fn fn = Tau2Fn::heston();
  const DesignStats d = volvol::design_stats(p, s, t2, fn);

  check_vec(d.fvals, ref::fvals(p.x, s.kn, fn.f), 1e-12);
  check_vec(d.b_path, ref::bpath(p.x, s.kn, fn.f), 1e-12);
  const double rd = static_cast<double>(ref::dhat(p.x, s.kn, fn.f));
  const double rc = static_cast<double>(ref::chatf(p.x, s.kn, fn.f));
  CHECK(testutil::close_abs_rel(d.d_hat, rd, std::abs(rd), 1e-11));
  CHECK(testutil::close_abs_rel(d.c_hat_f, rc, std::max(std::abs(rc), rd), 1e-11));
  // The projection identity theta * D = C_f holds by construction.
  CHECK(d.theta_hat * d.d_hat == doctest::Approx(d.c_hat_f).epsilon(1e-12));
}

TEST_CASE("variance-density series and studentizer match the direct reference") {
  const volvol::SampledPath p = sample(300, 4);
  const EstimatorConfig cfg;
  const SpotSeries s = volvol::spot_series(p, cfg);
  const std::vector<double> t2 = volvol::tau2_series(s);
  const Tau2Fn fn = Tau2Fn::heston();

  const std::vector<double> a2 = volvol::alpha2_series(p.x, s, t2);
  REQUIRE(a2.size() == 300 - 2 * s.kn + 1);
  double scale = 0.0;
  for (double v : a2) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < a2.size(); ++i) {
    CHECK(testutil::close_abs_rel(a2[i], static_cast<double>(ref::alpha2(p.x, s.kn, i)),
                                  scale, 1e-11));
  }

  const DesignStats d = volvol::design_stats(p, s, t2, fn);
  const std::vector<double> vp = volvol::v_hat_path(t2, s.n, s.kn);
  const std::vector<double> np = volvol::n_hat_path(vp, d.b_path, d.theta_hat);
  check_vec(np, ref::nhat_path(p.x, s.kn, fn.f), 1e-11);

  const std::vector<double> sp = volvol::s2_hat_path(a2, d, s.n, s.kn);
  check_vec(sp, ref::s2hat_path(p.x, s.kn, fn.f), 1e-11);

  for (bool from_t_min : {true, false}) {
    EstimatorConfig kcfg;
    kcfg.sup_from_t_min = from_t_min;
    const volvol::KsResult ks = volvol::ks_statistic(np, sp, s.n, s.kn, kcfg);
    const ref::KsRef rk =
        ref::ks(p.x, s.kn, fn.f, kcfg.t_min, from_t_min, kcfg.eps_var);
    CHECK(ks.y_n ==
          doctest::Approx(static_cast<double>(rk.y)).epsilon(1e-10));
    CHECK(ks.points_used == rk.used);
    CHECK(ks.points_skipped == rk.skipped);
    // The reported argmax reproduces the sup value.
    const double at = std::abs(std::sqrt(static_cast<double>(s.n) / s.kn) *
                               np[ks.argmax_m] / std::sqrt(sp[ks.argmax_m]));
    CHECK(at == doctest::Approx(ks.y_n).epsilon(1e-12));
  }
}

TEST_CASE("statistic is invariant to the scale of the hypothesized shape") {
  const volvol::SampledPath p = sample(300, 8);
  const EstimatorConfig cfg;
  const Tau2Fn base = Tau2Fn::heston();
  Tau2Fn scaled;
  scaled.label = "scaled";
  scaled.f = [](double, double, double sigma2) { return 3.7 * sigma2; };

  const GofReport a = volvol::gof_statistic(p, base, cfg);
  const GofReport b = volvol::gof_statistic(p, scaled, cfg);
  CHECK(b.theta_hat == doctest::Approx(a.theta_hat / 3.7).epsilon(1e-12));
  CHECK(b.y_n == doctest::Approx(a.y_n).epsilon(1e-10));
  REQUIRE(a.n_path.size() == b.n_path.size());
  double nscale = 1e-12, sscale = 1e-12;
  for (double v : a.n_path) nscale = std::max(nscale, std::abs(v));
  for (double v : a.s2_path) sscale = std::max(sscale, std::abs(v));
  for (std::size_t m = 0; m < a.n_path.size(); ++m) {
    CHECK(testutil::close_abs_rel(b.n_path[m], a.n_path[m], nscale, 1e-11));
    CHECK(testutil::close_abs_rel(b.s2_path[m], a.s2_path[m], sscale, 1e-11));
  }
}

TEST_CASE("shape factories evaluate as documented") {
  CHECK(Tau2Fn::heston().f(0.3, 1.7, 0.25) == 0.25);
  CHECK(Tau2Fn::cev(0.7).f(0.3, 1.7, 0.25) ==
        doctest::Approx(std::pow(0.25, 1.4)).epsilon(1e-15));
  CHECK(Tau2Fn::cev(0.5).f(0.1, 0.0, 0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(Tau2Fn::constant().f(0.9, -2.0, 0.7) == 1.0);
}

TEST_CASE("degenerate inputs raise typed errors") {
  const volvol::SampledPath p = sample(200, 12);
  const EstimatorConfig cfg;
  const SpotSeries s = volvol::spot_series(p, cfg);
  const std::vector<double> t2 = volvol::tau2_series(s);
  Tau2Fn zero;
  zero.label = "zero";
  zero.f = [](double, double, double) { return 0.0; };
  CHECK_THROWS_AS((void)volvol::design_stats(p, s, t2, zero),
                  volvol::DegenerateDesign);

  std::vector<double> np(201, 1.0), sp(201, 0.0);
  CHECK_THROWS_AS((void)volvol::ks_statistic(np, sp, 200, 14, cfg),
                  volvol::DegenerateStudentization);
}

TEST_CASE("statistic-only report is internally consistent") {
  const volvol::SampledPath p = sample(300, 16);
  const EstimatorConfig cfg;
  const GofReport r = volvol::gof_statistic(p, Tau2Fn::heston(), cfg);
  CHECK(r.f_label == Tau2Fn::heston().label);
  CHECK(r.n == 300);
  CHECK(r.kn == 17);
  CHECK(r.theta_hat == doctest::Approx(r.c_hat_f / r.d_hat).epsilon(1e-12));
  CHECK(r.n_path.size() == 301);
  CHECK(r.s2_path.size() == 301);
  CHECK(r.B == 0);
  CHECK(r.boot.empty());
  CHECK_FALSE(r.p_value.has_value());
  CHECK(r.y_n > 0.0);
}

TEST_CASE("realized variance is the plain sum of squared increments") {
  CHECK(volvol::realized_variance({0.0, 0.3, 0.1}) ==
        doctest::Approx(0.13).epsilon(1e-15));
  CHECK(volvol::realized_variance({1.0, 1.0, 1.0}) == 0.0);
}

TEST_CASE("bootstrap test mechanics") {
  const volvol::SampledPath p = sample(400, 20);
  const EstimatorConfig cfg;
  const std::size_t B = 19;

  const GofReport r =
      volvol::bootstrap_test(p, Tau2Fn::heston(), B, Stream(900, 1 << 18), cfg, 4, 1);
  REQUIRE(r.p_value.has_value());
  CHECK(r.B == B);
  CHECK(r.boot.size() + r.discarded_boot == B);
  // p = (1 + #{Y* >= y_n}) / (#kept + 1), recomputed from the kept draws.
  std::size_t exceed = 0;
  for (double y : r.boot) {
    if (y >= r.y_n) ++exceed;
  }
  const double expect_p = static_cast<double>(1 + exceed) /
                          static_cast<double>(r.boot.size() + 1);
  CHECK(*r.p_value == doctest::Approx(expect_p).epsilon(1e-15));
  CHECK(*r.p_value > 0.0);
  CHECK(*r.p_value <= 1.0);
  // Star-model parameters are tied to the sample.
  CHECK(r.alpha_rv == doctest::Approx(volvol::realized_variance(p.x)).epsilon(1e-12));
  CHECK(r.xi_star == doctest::Approx(std::sqrt(r.theta_hat)).epsilon(1e-12));
  CHECK(r.kappa_star ==
        doctest::Approx(5.0 * r.theta_hat / r.alpha_rv).epsilon(1e-12));
  // The statistic block matches the statistic-only pipeline.
  const GofReport stat = volvol::gof_statistic(p, Tau2Fn::heston(), cfg);
  CHECK(r.y_n == stat.y_n);
  CHECK(r.theta_hat == stat.theta_hat);

  // Same seed reproduces the draws bit for bit; more threads change nothing.
  const GofReport r2 =
      volvol::bootstrap_test(p, Tau2Fn::heston(), B, Stream(900, 1 << 18), cfg, 4, 1);
  CHECK(r2.boot == r.boot);
  CHECK(*r2.p_value == *r.p_value);
  const GofReport r3 =
      volvol::bootstrap_test(p, Tau2Fn::heston(), B, Stream(900, 1 << 18), cfg, 4, 3);
  CHECK(r3.boot == r.boot);

  // A different seed gives different draws.
  const GofReport r4 =
      volvol::bootstrap_test(p, Tau2Fn::heston(), B, Stream(901, 1 << 18), cfg, 4, 1);
  CHECK(r4.boot != r.boot);

  // Bootstrap slots live in the low bits of the stream id.
  CHECK_THROWS_AS((void)volvol::bootstrap_test(p, Tau2Fn::heston(), B,
                                               Stream(900, 5), cfg, 4, 1),
                  std::invalid_argument);
}

TEST_CASE("bootstrap aborts when the projection scale is not positive") {
  // A pure drift path has negative local variance-of-variance everywhere,
  // hence theta-hat < 0 and no usable bootstrap scale.
  std::vector<double> x(257);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>(i) / 256.0;
  volvol::SampledPath p;
  p.n = 256;
  p.x = x;
  CHECK_THROWS_AS((void)volvol::bootstrap_test(p, Tau2Fn::heston(), 7,
                                               Stream(902, 0), EstimatorConfig{}, 2, 1),
                  volvol::BootstrapDegenerate);
}
