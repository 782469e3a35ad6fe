#include <cmath>
#include <random>

#include "doctest.h"

#include "endomax/endograph.hpp"
#include "endomax/pushforward.hpp"
#include "endomax/unit_function.hpp"
#include "support.hpp"

using namespace endomax;

namespace {

double exp_ratio_mbar(double th) {
  if (th >= 1.0) return 1.0;
  return 1.0 + std::pow(th, 1.0 / (1.0 - th)) - std::pow(th, th / (1.0 - th));
}

}  // namespace

TEST_CASE("maximum mass for the exponential-ratio family") {
  for (double th : {0.05, 0.1, 0.25, 0.5, 0.6, 0.75, 0.9, 0.99, 1.0, 1.5, 3.0}) {
    auto t = UnitFunction::exp_ratio(th);
    const auto r = max_endograph_mass(t);
    CHECK(std::fabs(r.value - exp_ratio_mbar(th)) <= 1e-9);
    const auto m = monotone_max(t);
    CHECK(std::fabs(m.mbar - exp_ratio_mbar(th)) <= 1e-9);
  }
  CHECK(max_endograph_mass(UnitFunction::exp_ratio(0.5)).value ==
        doctest::Approx(0.75).epsilon(1e-10));
}

TEST_CASE("maximum mass for steps and constants") {
  CHECK(max_endograph_mass(UnitFunction::constant(0.3)).value ==
        doctest::Approx(0.3));
  CHECK(min_endograph_mass(UnitFunction::constant(0.3)).value ==
        doctest::Approx(0.3));
  CHECK(max_endograph_mass(UnitFunction::step({0.5, 1.0})).value ==
        doctest::Approx(1.0));
  CHECK(max_endograph_mass(UnitFunction::identity()).value ==
        doctest::Approx(1.0));
  CHECK(min_endograph_mass(UnitFunction::identity()).value ==
        doctest::Approx(0.0));
}

TEST_CASE("parabola extremes") {
  auto t = UnitFunction::parabola();
  CHECK(std::fabs(max_endograph_mass(t).value - 0.75) <= 1e-9);
  CHECK(std::fabs(min_endograph_mass(t).value - 0.0) <= 1e-9);
}

TEST_CASE("counterexample family: endograph max stays at 3/4") {
  for (int n : {2, 10, 50}) {
    auto t = UnitFunction::ex_gegen(n);
    CHECK(std::fabs(max_endograph_mass(t).value - 0.75) <= 1e-6);
  }
}

TEST_CASE("graph mass decreases along the counterexample family") {
  double prev = 1.0;
  for (int n : {10, 50, 200}) {
    const auto r = max_graph_mass_monotone(UnitFunction::ex_gegen(n));
    CHECK(r.value < prev - 1e-6);
    prev = r.value;
  }
  CHECK(prev <= 0.60);
  // closed form: 1/2 + (u + 1 - u^{1/n}) / 4 at u = n^{-n/(n-1)}
  const double u = std::pow(10.0, -10.0 / 9.0);
  const double want = 0.5 + (u + 1.0 - std::pow(u, 0.1)) / 4.0;
  CHECK(max_graph_mass_monotone(UnitFunction::ex_gegen(10)).value ==
        doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("graph mass equals endograph mass for strictly increasing smooth maps") {
  for (double th : {0.25, 0.5, 0.75}) {
    auto t = UnitFunction::exp_ratio(th);
    const double graph = max_graph_mass_monotone(t).value;
    const double endo = max_endograph_mass(t).value;
    CHECK(std::fabs(graph - endo) <= 1e-6);
  }
}

TEST_CASE("graph mass rejects transforms with atomic push-forward") {
  CHECK_THROWS_AS(max_graph_mass_monotone(UnitFunction::step({0.2, 0.8})),
                  std::invalid_argument);
  CHECK_THROWS_AS(max_graph_mass_monotone(UnitFunction::parabola()),
                  std::invalid_argument);  // not nondecreasing
}

TEST_CASE("monotone shortcut agrees with the cdf route") {
  std::mt19937_64 eng(9001);
  for (int rep = 0; rep < 50; ++rep) {
    auto t = testsup::random_pl_nondecreasing(eng);
    const auto a = monotone_max(t);
    const auto b = max_endograph_mass(t);
    CHECK(std::fabs(a.mbar - b.value) <= 2.0 * (a.error_bound + b.error_bound) + 1e-11);
  }
}

TEST_CASE("reflection duality between min and max") {
  std::mt19937_64 eng(9002);
  for (int rep = 0; rep < 50; ++rep) {
    auto t = rep % 2 == 0 ? testsup::random_pl_general(eng)
                          : testsup::random_pl_lipschitz(eng);
    const auto mn = min_endograph_mass(t);
    const auto mx = max_endograph_mass(reflect(t));
    CHECK(std::fabs(mn.value + mx.value - 1.0) <=
          2.0 * (mn.error_bound + mx.error_bound) + 1e-10);
  }
}

TEST_CASE("sensitivity: perturbing on a small set moves mbar by at most its measure") {
  std::mt19937_64 eng(9003);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double delta : {0.01, 0.05, 0.1}) {
    for (int rep = 0; rep < 17; ++rep) {
      auto t = testsup::random_pl_general(eng);
      // overwrite T on [a, a+delta) with a constant
      const double a = u(eng) * (1.0 - delta);
      const double c = u(eng);
      std::vector<PlNode> nodes;
      auto add = [&](double x, double l, double r) { nodes.push_back({x, l, r}); };
      add(0.0, a <= 0.0 ? c : t(0.0), a <= 0.0 ? c : t(0.0));
      // dense resampling keeps this test independent of node bookkeeping
      const int m = 400;
      for (int i = 1; i < m; ++i) {
        const double x = static_cast<double>(i) / m;
        const double v = (x >= a && x < a + delta) ? c : t(x);
        add(x, v, v);
      }
      add(1.0, t(1.0), t(1.0));
      auto tp = UnitFunction::piecewise_linear(std::move(nodes));
      const double m0 = max_endograph_mass(t).value;
      const double m1 = max_endograph_mass(tp).value;
      // the dense PL resampling of t itself differs from t off the nodes,
      // so compare against the resampled baseline instead
      std::vector<PlNode> base;
      base.push_back({0.0, t(0.0), t(0.0)});
      for (int i = 1; i < m; ++i) {
        const double x = static_cast<double>(i) / m;
        base.push_back({x, t(x), t(x)});
      }
      base.push_back({1.0, t(1.0), t(1.0)});
      const double m0r =
          max_endograph_mass(UnitFunction::piecewise_linear(std::move(base))).value;
      CHECK(std::fabs(m1 - m0r) <= delta + 2.0 / m + 1e-9);
      (void)m0;
    }
  }
}

TEST_CASE("shift bound: lowering by delta costs at most delta") {
  std::mt19937_64 eng(9004);
  for (int rep = 0; rep < 50; ++rep) {
    auto t = testsup::random_pl_general(eng);
    const double d = 0.05 + 0.1 * (rep % 3);
    auto td = shift_down_clamp(t, d);
    const double m0 = max_endograph_mass(t).value;
    const double m1 = max_endograph_mass(td).value;
    CHECK(m1 >= m0 - d - 1e-9);
    CHECK(m1 <= m0 + 1e-9);  // lowering never helps
  }
}

TEST_CASE("optimal map attains the maximum") {
  std::mt19937_64 eng(9005);
  for (int rep = 0; rep < 50; ++rep) {
    auto t = rep % 2 == 0 ? testsup::random_pl_general(eng)
                          : testsup::random_pl_lipschitz(eng);
    const auto om = optimal_map(t);
    const auto am = achieved_mass(om.h, t);
    CHECK(am.value >= om.mbar - 1e-3);
    CHECK(am.value <= om.mbar + am.error_bound + om.error_bound + 1e-9);
    CHECK(verify_measure_preserving(om.h, 8192) <= 64.0 / 8192.0);
  }
}

TEST_CASE("optimal map attains the maximum on smooth families") {
  for (double th : {0.25, 0.5, 0.8}) {
    auto t = UnitFunction::exp_ratio(th);
    const auto om = optimal_map(t);
    const auto am = achieved_mass(om.h, t);
    CHECK(std::fabs(am.value - om.mbar) <= 1e-6);
  }
  auto p = UnitFunction::parabola();
  const auto om = optimal_map(p);
  CHECK(std::fabs(achieved_mass(om.h, p).value - 0.75) <= 1e-6);
  // the rearrangement map alone achieves the minimum for the parabola
  CHECK(achieved_mass(om.rearrangement.phi, p).value <= 1e-6);
}

TEST_CASE("epsilon minimizer lands within eps of the minimum") {
  std::mt19937_64 eng(9006);
  for (int rep = 0; rep < 30; ++rep) {
    auto t = rep % 2 == 0 ? testsup::random_pl_general(eng)
                          : testsup::random_pl_lipschitz(eng);
    const double eps = 0.02;
    const auto em = epsilon_min_map(t, eps);
    const auto am = achieved_mass(em.h, t);
    const auto mn = min_endograph_mass(t);
    CHECK(am.value <= mn.value + eps + am.error_bound + 1e-9);
    CHECK(am.value >= mn.value - mn.error_bound - am.error_bound - 1e-9);
    CHECK(verify_measure_preserving(em.h, 8192) <= 64.0 / 8192.0);
  }
}

TEST_CASE("epsilon minimizer on smooth transforms routes through a grid") {
  auto t = UnitFunction::exp_ratio(0.5);
  const auto em = epsilon_min_map(t, 0.01);
  const auto am = achieved_mass(em.h, t);
  const auto mn = min_endograph_mass(t);
  CHECK(mn.value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(am.value <= mn.value + 0.01 + 1e-6);
}

TEST_CASE("identity minimum is approached but never claimed attained") {
  auto t = UnitFunction::identity();
  CHECK(min_endograph_mass(t).value == doctest::Approx(0.0));
  for (double eps : {0.2, 0.05, 0.01}) {
    const auto em = epsilon_min_map(t, eps);
    const auto am = achieved_mass(em.h, t);
    CHECK(am.value <= eps + 1e-9);
    CHECK(am.value > 0.0);  // strictly positive: the infimum is not attained
  }
}

TEST_CASE("rotation by mbar is optimal for nondecreasing transforms") {
  std::mt19937_64 eng(9007);
  for (int rep = 0; rep < 20; ++rep) {
    auto t = testsup::random_pl_nondecreasing(eng);
    const auto m = monotone_max(t);
    const auto am = achieved_mass(m.rotation, t);
    CHECK(am.value >= m.mbar - 1e-6);
  }
}
