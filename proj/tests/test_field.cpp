#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <cstring>

#include "afwl/error.hpp"
#include "afwl/field_ops.hpp"
#include "afwl/grid.hpp"
#include "afwl/parallel.hpp"
#include "afwl/snapshot_io.hpp"

using namespace afwl;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double sine_derivative_error(int n) {
  const Grid3 g{n, 8.0 / n};
  const double L = g.half_extent();
  const double w = 2 * kPi / L;
  const auto f = sample_field(g, [&](double x, double, double) { return std::sin(w * x); });
  const auto exact = sample_field(g, [&](double x, double, double) { return w * std::cos(w * x); });
  return max_abs_diff(gradient(f)[0], exact);
}

ScalarField smooth_random_field(const Grid3& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-2.0, 2.0), amp(0.5, 1.5);
  std::array<std::array<double, 4>, 4> blobs{};
  for (auto& b : blobs) b = {pos(rng), pos(rng), pos(rng), amp(rng)};
  return sample_field(g, [&](double x, double y, double z) {
    double s = 0.0;
    for (const auto& b : blobs) {
      const double d2 = (x - b[0]) * (x - b[0]) + (y - b[1]) * (y - b[1]) + (z - b[2]) * (z - b[2]);
      s += b[3] / std::sqrt(1.0 + d2);
    }
    return s;
  });
}

// random harmonic content of degree <= 2 over a 1/<r> radial profile
ScalarField random_harmonic_field(const Grid3& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double a0 = 1.0 + std::abs(normal(rng));
  std::array<double, 3> a{};
  for (double& v : a) v = normal(rng);
  std::array<std::array<double, 3>, 3> B{};
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) B[i][j] = B[j][i] = normal(rng);
  return sample_field(g, [&](double x, double y, double z) {
    const std::array<double, 3> p{x, y, z};
    const double jr = std::sqrt(1.0 + x * x + y * y + z * z);
    double lin = 0.0, quad = 0.0;
    for (int i = 0; i < 3; ++i) {
      lin += a[i] * p[i];
      for (int j = 0; j < 3; ++j) quad += B[i][j] * p[i] * p[j];
    }
    return (a0 + lin / jr + quad / (jr * jr)) / jr;
  });
}

}  // namespace

TEST_CASE("grid validation and coordinates") {
  Grid3 g{16, 0.5};
  CHECK_NOTHROW(g.validate());
  CHECK(g.half_extent() == 4.0);
  CHECK(g.coord(0) == -4.0);
  CHECK(g.coord(15) == 3.5);
  CHECK(g.index(1, 2, 3) == (1u * 16 + 2) * 16 + 3);
  CHECK_THROWS_AS((Grid3{15, 1.0}.validate()), Error);
  CHECK_THROWS_AS((Grid3{14, 1.0}.validate()), Error);
  CHECK_THROWS_AS((Grid3{16, 0.0}.validate()), Error);
}

TEST_CASE("gradient of a constant vanishes") {
  const Grid3 g{16, 0.3};
  const ScalarField f(g, 2.5);
  for (const auto& c : gradient(f))
    for (double v : c.values) CHECK(v == 0.0);
}

TEST_CASE("gradient of a sine converges at second order") {
  const double e1 = sine_derivative_error(16);
  const double e2 = sine_derivative_error(32);
  // leading truncation term w^3 dx^2 / 6 with w = 2 pi / L, dx = 0.5
  const double w = 2 * kPi / 4.0;
  CHECK(e1 <= 1.01 * w * w * w * 0.25 / 6.0);
  CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("gradient of a linear field is exact away from the wrap") {
  const Grid3 g{16, 0.5};
  const auto f = sample_field(g, [](double x, double, double) { return 3.0 * x - 1.0; });
  const auto d = gradient(f);
  for (int i = 1; i < g.n - 1; ++i)
    for (int j = 0; j < g.n; ++j)
      for (int k = 0; k < g.n; ++k) {
        CHECK(d[0].at(i, j, k) == doctest::Approx(3.0).epsilon(1e-13));
        CHECK(d[1].at(i, j, k) == 0.0);
      }
  // the wrap nodes see the jump from x = L - dx back to -L
  CHECK(d[0].at(0, 0, 0) != doctest::Approx(3.0));
}

TEST_CASE("lebesgue norms") {
  const Grid3 g{16, 0.25};
  ScalarField f(g);
  for (int m = 0; m < 37; ++m) f[static_cast<std::size_t>(m) * 11] = 1.0;
  CHECK(lebesgue_norm(f, 2) == doctest::Approx(std::sqrt(37 * g.cell_volume())).epsilon(1e-14));
  const ScalarField c(g, -1.75);
  CHECK(lebesgue_norm(c, kInfinity) == 1.75);
  CHECK(lebesgue_norm(c, 1) == doctest::Approx(1.75 * g.size() * g.cell_volume()));
}

TEST_CASE("L6 norm of a Gaussian against the closed form") {
  const double w = 1.0;
  const Grid3 g{64, 0.2};
  const auto f = sample_field(g, [&](double x, double y, double z) { return std::exp(-(x * x + y * y + z * z) / (w * w)); });
  // int exp(-6 r^2 / w^2) = (pi w^2 / 6)^{3/2}
  const double exact = std::pow(std::pow(kPi * w * w / 6.0, 1.5), 1.0 / 6.0);
  CHECK(std::abs(lebesgue_norm(f, 6) / exact - 1.0) < 5e-3);
}

TEST_CASE("sobolev norm of a single Fourier mode") {
  const Grid3 g{16, 0.5};
  const double len = g.n * g.dx, vol = len * len * len;
  const std::array<int, 3> m{2, 1, 0};
  const double xi = 2 * kPi / len * std::sqrt(5.0);
  const double a = 0.7;
  const auto f = sample_field(g, [&](double x, double y, double) {
    return a * std::cos(2 * kPi / len * (m[0] * x + m[1] * y));
  });
  for (double s : {-1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 5.0}) {
    // cos = (e^{i} + e^{-i})/2: two modes of amplitude a/2 each
    const double expected = a * std::pow(xi, s) * std::sqrt(vol / 2.0);
    CHECK(sobolev_norm(f, s) == doctest::Approx(expected).epsilon(1e-11));
  }
}

TEST_CASE("Parseval: s = 0 equals the L2 norm after mean removal") {
  const Grid3 g{16, 0.4};
  ScalarField f = smooth_random_field(g, 3);
  const double mu = mean(f);
  ScalarField centred = f;
  for (double& v : centred.values) v -= mu;
  CHECK(std::abs(sobolev_norm(f, 0) / lebesgue_norm(centred, 2) - 1.0) < 1e-12);
}

TEST_CASE("s = 1 agrees with the finite-difference gradient to O(dx^2)") {
  auto rel = [](int n) {
    const Grid3 g{n, 12.0 / n};
    const auto f = sample_field(g, [](double x, double y, double z) { return std::exp(-(x * x + 2 * y * y + z * z)); });
    const auto d = gradient(f);
    ScalarField mag(g);
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::sqrt(d[0][i] * d[0][i] + d[1][i] * d[1][i] + d[2][i] * d[2][i]);
    return std::abs(lebesgue_norm(mag, 2) / sobolev_norm(f, 1) - 1.0);
  };
  const double r1 = rel(48), r2 = rel(96);
  CHECK(r1 < 0.05);
  CHECK(r2 < r1 / 3.0);
}

TEST_CASE("rotation derivatives") {
  const Grid3 g{32, 0.25};
  SUBCASE("radial fields are annihilated") {
    const auto f = sample_field(g, [](double x, double y, double z) { return std::exp(-(x * x + y * y + z * z)); });
    double grad_max = 0.0;
    for (const auto& c : gradient(f)) grad_max = std::max(grad_max, lebesgue_norm(c, kInfinity));
    for (int a = 1; a <= 3; ++a) CHECK(lebesgue_norm(rotation_derivative(f, a), kInfinity) < 0.1 * g.dx * g.dx * grad_max * 4);
  }
  SUBCASE("Omega_z x = -y and Omega_z y = x on interior nodes") {
    const auto fx = sample_field(g, [](double x, double, double) { return x; });
    const auto fy = sample_field(g, [](double, double y, double) { return y; });
    const auto ox = rotation_derivative(fx, 3);
    const auto oy = rotation_derivative(fy, 3);
    for (int i = 1; i < g.n - 1; ++i)
      for (int j = 1; j < g.n - 1; ++j)
        for (int k = 1; k < g.n - 1; ++k) {
          CHECK(ox.at(i, j, k) == doctest::Approx(-g.coord(j)).epsilon(1e-12));
          CHECK(oy.at(i, j, k) == doctest::Approx(g.coord(i)).epsilon(1e-12));
        }
  }
  SUBCASE("|x|^2 is annihilated") {
    const auto f = sample_field(g, [](double x, double y, double z) { return x * x + y * y + z * z; });
    for (int a = 1; a <= 3; ++a) {
      const auto o = rotation_derivative(f, a);
      for (int i = 1; i < g.n - 1; ++i)
        for (int j = 1; j < g.n - 1; ++j)
          for (int k = 1; k < g.n - 1; ++k) CHECK(std::abs(o.at(i, j, k)) < 1e-12);
    }
  }
}

TEST_CASE("annulus norms") {
  const Grid3 g{48, 0.5};
  SUBCASE("constant field") {
    const ScalarField one(g, 1.0);
    const double R = 4.0;
    const auto a = annulus_norms(one, R);
    CHECK(a.sup_on_annulus == 1.0);
    std::size_t count = 0;
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k) {
          const double r = node_radius(g, i, j, k);
          if (r > R - 1 && r < R + 2) ++count;
        }
    CHECK(a.sum_l2_terms == doctest::Approx(std::sqrt(count * g.cell_volume())).epsilon(1e-12));
  }
  SUBCASE("1/|x| has sup about 1/R") {
    const auto f = sample_field(g, [](double x, double y, double z) { return 1.0 / std::sqrt(x * x + y * y + z * z + 1e-2); });
    for (double R : {4.0, 8.0}) {
      const auto a = annulus_norms(f, R);
      CHECK(a.sup_on_annulus * R == doctest::Approx(1.0).epsilon(0.15));
    }
    const double c4 = annulus_norms(f, 4.0).fitted_constant, c8 = annulus_norms(f, 8.0).fitted_constant;
    CHECK(std::max(c4, c8) / std::min(c4, c8) < 2.0);
  }
  SUBCASE("out of domain") {
    CHECK_THROWS_AS(annulus_norms(ScalarField(g, 1.0), g.half_extent() - 2.0), Error);
  }
}

TEST_CASE("annulus constant on a random smooth field is stable in R") {
  const Grid3 g{80, 0.5};
  for (std::uint64_t seed : {3u, 17u}) {
    const auto f = random_harmonic_field(g, seed);
    double lo = INFINITY, hi = 0.0;
    for (double R : {4.0, 8.0, 16.0}) {
      const auto a = annulus_norms(f, R);
      CHECK(a.fitted_constant <= 10.0);
      lo = std::min(lo, a.fitted_constant);
      hi = std::max(hi, a.fitted_constant);
    }
    CHECK(hi / lo < 2.0);
  }
}

TEST_CASE("reductions are bit-identical across thread counts") {
  const Grid3 g{32, 0.3};
  const auto f = smooth_random_field(g, 5);
  set_thread_count(1);
  const double a2 = lebesgue_norm(f, 2), a6 = lebesgue_norm(f, 6), s1 = sobolev_norm(f, 1);
  const auto g1 = gradient(f);
  set_thread_count(4);
  CHECK(lebesgue_norm(f, 2) == a2);
  CHECK(lebesgue_norm(f, 6) == a6);
  CHECK(sobolev_norm(f, 1) == s1);
  CHECK(gradient(f)[2].values == g1[2].values);
  set_thread_count(1);
}

TEST_CASE("snapshot format") {
  const Grid3 g{16, 0.5};
  StateSlice s(g, 1.25);
  s.u = smooth_random_field(g, 1);
  s.ut = smooth_random_field(g, 2);
  const fs::path dir = fs::temp_directory_path() / "afwl_test_field";
  fs::create_directories(dir);

  SUBCASE("header layout") {
    std::ostringstream os;
    write_field(os, s.u, s.t);
    const std::string bytes = os.str();
    REQUIRE(bytes.size() == 4 + 4 + 4 + 8 + 8 + 8 * g.size());
    CHECK(bytes.substr(0, 4) == "AFWL");
    std::uint32_t version = 0, n = 0;
    double dx = 0, t = 0;
    std::memcpy(&version, bytes.data() + 4, 4);
    std::memcpy(&n, bytes.data() + 8, 4);
    std::memcpy(&dx, bytes.data() + 12, 8);
    std::memcpy(&t, bytes.data() + 20, 8);
    CHECK(version == kSnapshotVersion);
    CHECK(n == 16u);
    CHECK(dx == 0.5);
    CHECK(t == 1.25);
  }
  SUBCASE("state round trip") {
    write_state(dir / "s.afwl", s);
    const StateSlice r = read_state(dir / "s.afwl");
    CHECK(r.t == s.t);
    CHECK(r.u.values == s.u.values);
    CHECK(r.ut.values == s.ut.values);
  }
  SUBCASE("checkpoint round trip and corruption") {
    write_checkpoint(dir / "c.afck", Checkpoint{s, 42, 0.01});
    const Checkpoint c = read_checkpoint(dir / "c.afck");
    CHECK(c.step == 42u);
    CHECK(c.dt == 0.01);
    CHECK(c.state.u.values == s.u.values);

    std::fstream io(dir / "c.afck", std::ios::in | std::ios::out | std::ios::binary);
    io.seekp(1);
    io.put('X');
    io.close();
    try {
      read_checkpoint(dir / "c.afck");
      FAIL("expected ChecksumMismatch");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ChecksumMismatch);
    }
  }
  fs::remove_all(dir);
}
