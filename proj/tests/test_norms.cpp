#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "afwl/error.hpp"
#include "afwl/evolve.hpp"
#include "afwl/field_ops.hpp"
#include "afwl/initial_data.hpp"
#include "afwl/norms.hpp"

using namespace afwl;

namespace {

Trajectory constant_trajectory(const Grid3& g, const StateSlice& s, const std::vector<double>& times) {
  Trajectory tr;
  tr.grid = g;
  for (double t : times) {
    StateSlice c = s;
    c.t = t;
    tr.slices.push_back(c);
    tr.times.push_back(t);
    tr.steps.push_back(0);
    tr.scalars.push_back({});
  }
  return tr;
}

Trajectory run(const Grid3& g, const MetricSpec& spec, double amplitude, double t_end, bool nonlinear,
               DataKind kind = DataKind::Bump) {
  InitialDataSpec d;
  d.kind = kind;
  d.amplitude = amplitude;
  d.width = 1.5;
  SimConfig c;
  c.t_end = t_end;
  c.snapshot_dt = 0.25;
  c.nonlinear = nonlinear;
  c.allow_wrap = true;
  return evolve(make_initial_data(g, d), spec, c);
}

MetricSpec static_bump(double eps = 0.05) {
  MetricSpec s;
  s.family = MetricFamily::StaticBump;
  s.epsilon = eps;
  return s;
}

}  // namespace

TEST_CASE("energy density examples") {
  const Grid3 g{16, 0.5};
  StateSlice s(g);
  s.ut = ScalarField(g, 1.0);
  for (double v : energy_density(s, sample_metric(MetricSpec{}, g, 0)).values) CHECK(v == 0.5);

  s.u = sample_field(g, [](double x, double y, double z) { return 0.7 * std::exp(-(x * x + y * y + z * z) / 3); });
  const auto du = gradient(s.u);
  const ScalarField flat = energy_density(s, sample_metric(MetricSpec{}, g, 0));
  const ScalarField curved = energy_density(s, sample_metric(static_bump(), g, 0));
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double grad2 = du[0][i] * du[0][i] + du[1][i] * du[1][i] + du[2][i] * du[2][i];
    CHECK(flat[i] == doctest::Approx(0.5 * grad2 + 0.5 + std::pow(s.u[i], 6) / 6).epsilon(1e-14));
    // -(1 + h)/(2(-1 + h)) - 1/2 = h / (1 - h) with h <= eps
    CHECK(std::abs(curved[i] - flat[i]) <= 0.05 / 0.95 * grad2 + 1e-15);
  }
}

TEST_CASE("total energy examples") {
  const Grid3 g{16, 0.5};
  CHECK(total_energy(StateSlice(g), sample_metric(MetricSpec{}, g, 0)) == 0.0);
  StateSlice s(g);
  for (int m = 0; m < 40; ++m) s.ut[static_cast<std::size_t>(m) * 97] = 1.0;
  CHECK(total_energy(s, sample_metric(MetricSpec{}, g, 0)) == doctest::Approx(40 * g.cell_volume() / 2).epsilon(1e-14));
}

TEST_CASE("mixed norms") {
  const Grid3 g{16, 0.5};
  const double V = std::pow(g.n * g.dx, 3);
  StateSlice one(g);
  one.u = ScalarField(g, 1.0);
  const Trajectory tr = constant_trajectory(g, one, {0.0, 0.5, 1.0, 2.0, 3.0});
  CHECK(mixed_norm(tr, {8, 8}) == doctest::Approx(std::pow(3.0 * V, 1.0 / 8)).epsilon(1e-13));
  CHECK(mixed_norm(tr, {kInfinity, kInfinity}) == 1.0);
  CHECK(mixed_norm(tr, {4, kInfinity}) == doctest::Approx(std::pow(3.0, 0.25)).epsilon(1e-14));
  CHECK_THROWS_AS(mixed_norm_from_series({0.0}, {1.0}, 2.0), Error);
  CHECK_THROWS_AS(mixed_norm(tr, {0.5, 2}), Error);
}

TEST_CASE("Hoelder interpolation chain holds on generated trajectories") {
  const Grid3 g{32, 0.375};
  for (double amp : {0.3, 1.0, 1.6}) {
    for (const MetricSpec& spec : {MetricSpec{}, static_bump()}) {
      const Trajectory tr = run(g, spec, amp, 3.0, true);
      const double lhs = mixed_norm(tr, {5, 10});
      const double rhs = std::pow(mixed_norm(tr, {8, 8}), 0.4) * std::pow(mixed_norm(tr, {4, 12}), 0.6);
      CHECK(lhs <= rhs * (1 + 1e-12));
    }
  }
}

TEST_CASE("LE norms") {
  const Grid3 g{16, 0.5};
  SUBCASE("zero") {
    const Trajectory z = constant_trajectory(g, StateSlice(g), {0.0, 1.0, 2.0});
    CHECK(le1_norm(z, 0.5, true) == 0.0);
    CHECK(le_star_norm({ScalarField(g), ScalarField(g)}, {0.0, 1.0}) == 0.0);
  }
  SUBCASE("time-independent integrand scales linearly in T") {
    StateSlice s(g);
    s.u = sample_field(g, [](double x, double y, double z) { return std::exp(-(x * x + y * y + z * z)); });
    const double a = le1_norm(constant_trajectory(g, s, {0.0, 1.0, 2.0}), 0.5, false);
    const double b = le1_norm(constant_trajectory(g, s, {0.0, 1.0, 2.0, 3.0, 4.0}), 0.5, false);
    CHECK(b * b == doctest::Approx(2.0 * a * a).epsilon(1e-13));
  }
  SUBCASE("indicator on a small ball") {
    const Grid3 fine{32, 0.05};
    ScalarField F(fine);
    double vol = 0.0;
    for (int i = 0; i < fine.n; ++i)
      for (int j = 0; j < fine.n; ++j)
        for (int k = 0; k < fine.n; ++k)
          if (node_radius(fine, i, j, k) < 0.2) {
            F.at(i, j, k) = 1.0;
            vol += fine.cell_volume();
          }
    const double T = 3.0;
    const double v = le_star_norm({F, F}, {0.0, T});
    CHECK(v * v == doctest::Approx(T * vol).epsilon(0.02));
  }
  SUBCASE("the sextic term only adds") {
    const Trajectory tr = run(Grid3{16, 0.5}, MetricSpec{}, 1.0, 1.0, true);
    CHECK(le1_norm(tr, 0.5, true) > le1_norm(tr, 0.5, false));
    CHECK_THROWS_AS(le1_norm(tr, 0.0, false), Error);
  }
}

TEST_CASE("ILED ratio") {
  const Grid3 g{16, 0.5};
  SUBCASE("zero data gives 0") {
    CHECK(iled_ratio(constant_trajectory(g, StateSlice(g), {0.0, 1.0}), MetricSpec{}, 0.5) == 0.0);
  }
  SUBCASE("zero initial energy with later energy") {
    Trajectory tr = constant_trajectory(g, StateSlice(g), {0.0, 1.0});
    tr.slices[1].ut = ScalarField(g, 1.0);
    try {
      iled_ratio(tr, MetricSpec{}, 0.5);
      FAIL("expected ZeroInitialEnergy");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ZeroInitialEnergy);
    }
  }
  SUBCASE("amplitude invariance for the linear flow") {
    const Grid3 g2{32, 0.375};
    const double r1 = iled_ratio(run(g2, static_bump(), 0.01, 2.0, false), static_bump(), 0.5);
    const double r2 = iled_ratio(run(g2, static_bump(), 0.02, 2.0, false), static_bump(), 0.5);
    CHECK(std::isfinite(r1));
    // the sextic terms enter at relative order amplitude^4
    CHECK(r2 == doctest::Approx(r1).epsilon(1e-6));
  }
}

TEST_CASE("high-order energy") {
  const Grid3 g{16, 0.5};
  SUBCASE("zero") {
    const HighOrderEnergy h = high_order_energy(constant_trajectory(g, StateSlice(g), {0.0, 1.0}), MetricSpec{}, 2);
    CHECK(h.ratio == 0.0);
  }
  SUBCASE("flat linear mode is conserved") {
    InitialDataSpec d;
    d.kind = DataKind::PlaneWave;
    d.mode = {1, 1, 0};
    SimConfig c;
    c.t_end = 4.0;
    c.snapshot_dt = 0.25;
    c.nonlinear = false;
    c.allow_wrap = true;
    const Trajectory tr = evolve(make_initial_data(g, d), MetricSpec{}, c);
    for (int N : {0, 1, 2}) CHECK(std::abs(high_order_energy(tr, MetricSpec{}, N).ratio - 1.0) <= 1e-4);
  }
  SUBCASE("N above 2 is rejected") {
    CHECK_THROWS_AS(high_order_energy(constant_trajectory(g, StateSlice(g), {0.0, 1.0}), MetricSpec{}, 3), Error);
  }
}

TEST_CASE("partition") {
  SUBCASE("count") {
    CHECK(partition_count(2.0, 1.0) == 256u);
    CHECK(partition_count(1.0, 1.0) == 1u);
    CHECK(partition_count(0.5, 1.0) == 1u);
  }
  SUBCASE("synthetic constant series") {
    std::vector<double> t, v;
    for (int i = 0; i <= 40; ++i) {
      t.push_back(0.25 * i);
      v.push_back(1.0);
    }
    const PartitionResult p = partition_by_l8(t, v, std::pow(2.5, 0.125));
    CHECK(p.M == 4u);
    REQUIRE(p.endpoints.size() == 3);
    CHECK(p.endpoints[0] == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(p.endpoints[1] == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(p.endpoints[2] == doctest::Approx(7.5).epsilon(1e-12));
    CHECK(p.verified);
  }
  SUBCASE("eta >= B gives one interval") {
    std::vector<double> t{0, 1, 2, 3}, v{1, 2, 0.5, 0.1};
    const PartitionResult p = partition_by_l8(t, v, 10.0);
    CHECK(p.M == 1u);
    CHECK(p.endpoints.empty());
    CHECK(p.per_interval_l8.size() == 1);
    CHECK(p.per_interval_l8[0] == doctest::Approx(p.total_l8));
  }
  SUBCASE("linear trajectory") {
    const Trajectory tr = run(Grid3{32, 0.375}, static_bump(), 1.0, 4.0, false);
    const double B = mixed_norm(tr, {8, 8});
    for (double frac : {0.3, 0.5, 0.8, 1.0}) {
      const PartitionResult p = partition_by_l8(tr, frac * B);
      CHECK(p.total_l8 == doctest::Approx(B).epsilon(1e-12));
      CHECK(p.M <= partition_count(B, frac * B));
      for (double v : p.per_interval_l8) CHECK(v <= 1.01 * frac * B);
      CHECK(p.verified);
    }
  }
}

TEST_CASE("theorem bound") {
  using Big = boost::multiprecision::cpp_dec_float_50;
  SUBCASE("unit inputs give e") {
    const BoundResult r = theorem_bound({1, 1, 1});
    CHECK(std::abs(r.value - std::exp(1.0)) <= 1e-12 * std::exp(1.0));
    CHECK(r.log_value == 1.0);
  }
  SUBCASE("E = 0") { CHECK(theorem_bound({0, 1, 1}).value == 0.0); }
  SUBCASE("E = 2 against a 50-digit oracle") {
    const Big two = 2;
    const Big exact = Big(4) / 7 * log(two) + pow(two, Big(85) / 6) * pow(two, Big(13) / 14);
    const BoundResult r = theorem_log_bound({2, 1, 1});
    CHECK(std::abs(r.log_value / exact.convert_to<double>() - 1.0) <= 1e-10);
    CHECK(r.exponent_merged == doctest::Approx(r.exponent).epsilon(1e-13));
  }
  SUBCASE("monotone in each argument") {
    const std::vector<double> grid{0.3, 0.7, 1.0, 1.2, 1.4};
    for (std::size_t i = 1; i < grid.size(); ++i) {
      const double lo = grid[i - 1], hi = grid[i];
      CHECK(theorem_log_bound({hi, 1, 1}).log_value > theorem_log_bound({lo, 1, 1}).log_value);
      CHECK(theorem_log_bound({1, hi, 1}).log_value > theorem_log_bound({1, lo, 1}).log_value);
      CHECK(theorem_log_bound({1, 1, hi}).log_value > theorem_log_bound({1, 1, lo}).log_value);
    }
  }
  SUBCASE("overflow") {
    try {
      theorem_bound({3, 1, 1});
      FAIL("expected Overflow");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Overflow);
    }
    CHECK(std::isfinite(theorem_log_bound({3, 1, 1}).log_value));
  }
}
