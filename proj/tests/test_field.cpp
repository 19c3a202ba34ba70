#include <doctest.h>

#include "singlim/field.hpp"
#include "singlim/fourier.hpp"

#include <cmath>
#include <stdexcept>
#include <numbers>
#include <random>

using namespace singlim;

TEST_CASE("build_grid spacing and node count") {
  const Grid g1 = build_grid({1, 8, 1.0, Boundary::Periodic});
  CHECK(g1.spacing() == 0.125);
  CHECK(g1.size() == 8);

  const Grid g3 = build_grid({3, 16, 4.0, Boundary::Periodic});
  CHECK(g3.size() == 4096);
  CHECK(g3.spacing() == 0.25);

  CHECK_THROWS_AS(build_grid({3, 7, 1.0, Boundary::Periodic}), std::invalid_argument);
  CHECK_THROWS_AS(build_grid({1, 8, 0.0, Boundary::Periodic}), std::invalid_argument);
  CHECK_THROWS_AS(build_grid({1, 8, -2.0, Boundary::Periodic}), std::invalid_argument);
  CHECK_THROWS_AS(build_grid({4, 8, 1.0, Boundary::Periodic}), std::invalid_argument);
}

TEST_CASE("node coordinates are centered on the box") {
  const Grid p = build_grid({2, 8, 2.0, Boundary::Periodic});
  CHECK(p.coordinate(0) == -1.0);
  CHECK(p.coordinate(4) == 0.0);
  const Point c = p.node(p.center_node());
  CHECK(c[0] == 0.0);
  CHECK(c[1] == 0.0);

  const Grid d = build_grid({1, 9, 1.0, Boundary::Dirichlet});
  CHECK(d.coordinate(4) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(d.coordinate(0) == doctest::Approx(-0.5 + 0.5 / 9));
  CHECK(d.coordinate(8) == doctest::Approx(0.5 - 0.5 / 9));

  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(p.flat_index(p.multi_index(i)) == i);
  }
}

TEST_CASE("sample_function") {
  const Grid g = build_grid({3, 8, 1.0, Boundary::Periodic});
  const ScalarField three = sample_function(g, [](const Point&) { return 3.0; });
  CHECK(min_value(three) == 3.0);
  CHECK(max_value(three) == 3.0);

  const Grid line = build_grid({1, 16, 2.0, Boundary::Periodic});
  const double w = 2.0 * std::numbers::pi / 2.0;
  const ScalarField s = sample_function(line, [w](const Point& x) { return std::sin(w * x[0]); });
  CHECK(sup_norm(s) <= 1.0);

  // x_1 = 0 is a node of an even periodic grid.
  CHECK_THROWS_AS(sample_function(line, [](const Point& x) { return 1.0 / x[0]; }), std::domain_error);
}

TEST_CASE("sup_norm") {
  const Grid g = build_grid({1, 8, 1.0, Boundary::Periodic});
  CHECK(sup_norm(ScalarField(g, 0.0)) == 0.0);

  std::vector<double> v(8, 0.0);
  v[0] = 1.0;
  v[3] = -3.0;
  v[5] = 2.0;
  CHECK(sup_norm(ScalarField(g, v)) == 3.0);

  const Grid line = build_grid({1, 16, 1.0, Boundary::Periodic});
  const ScalarField s =
      sample_function(line, [](const Point& x) { return std::sin(2.0 * std::numbers::pi * x[0]); });
  // Nodes at i/16 - 1/2 include x = 1/4, where the sine peaks.
  CHECK(sup_norm(s) > 0.98);
  CHECK(sup_norm(s) <= 1.0);
}

TEST_CASE("sup_norm is a norm on random fields") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  const Grid g = build_grid({2, 12, 1.0, Boundary::Periodic});
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(g.size());
    std::vector<double> b(g.size());
    for (auto& x : a) x = dist(rng);
    for (auto& x : b) x = dist(rng);
    const ScalarField fa(g, a);
    const ScalarField fb(g, b);
    const double s = dist(rng);
    CHECK(sup_norm(s * fa) == std::abs(s) * sup_norm(fa));
    CHECK(sup_norm(fa + fb) <= sup_norm(fa) + sup_norm(fb));
  }
}

TEST_CASE("field invariants") {
  const Grid g = build_grid({1, 8, 1.0, Boundary::Periodic});
  CHECK_THROWS_AS(ScalarField(g, std::vector<double>(7, 0.0)), std::invalid_argument);
  std::vector<double> bad(8, 0.0);
  bad[2] = std::nan("");
  CHECK_THROWS_AS(ScalarField(g, bad), std::domain_error);
  const Grid other = build_grid({1, 8, 2.0, Boundary::Periodic});
  CHECK_THROWS_AS(ScalarField(g, 1.0) + ScalarField(other, 1.0), std::invalid_argument);
}

TEST_CASE("Fourier round trip within 1e-12 relative") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> dist;
  for (int dims = 1; dims <= 3; ++dims) {
    for (int n : {8, 15, 32}) {
      const Grid g = build_grid({dims, n, 3.0, Boundary::Periodic});
      std::vector<double> v(g.size());
      for (auto& x : v) x = dist(rng);
      const ScalarField f(g, v);
      const RealFourierTransform fft(g);
      const ScalarField back(g, fft.inverse(fft.forward(f.values())));
      CHECK(sup_distance(f, back) <= 1e-12 * sup_norm(f));
    }
  }
  CHECK_THROWS_AS(RealFourierTransform(build_grid({1, 8, 1.0, Boundary::Dirichlet})), std::invalid_argument);
}

TEST_CASE("wavenumbers of the half spectrum") {
  const Grid g = build_grid({2, 8, 2.0 * std::numbers::pi, Boundary::Periodic});
  const RealFourierTransform fft(g);
  const auto k2 = fft.squared_wavenumbers();
  CHECK(k2.size() == 8 * 5);
  CHECK(k2[0] == 0.0);
  CHECK(k2[1] == doctest::Approx(1.0));
  CHECK(k2[4] == doctest::Approx(16.0));  // last-axis Nyquist
  CHECK(k2[7 * 5] == doctest::Approx(1.0)); // first axis index 7 is m = -1
}
