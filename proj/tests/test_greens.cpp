#include <doctest.h>

#include "singlim/greens.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace singlim;

namespace {

constexpr double kPi = std::numbers::pi;

// Spectral Green action by a direct O(n^2) DFT sum on a 1-D periodic grid.
std::vector<double> direct_spectral_1d(const std::vector<double>& v, double L, double eps, double a) {
  const int n = static_cast<int>(v.size());
  std::vector<double> out(n, 0.0);
  for (int m = -(n - 1) / 2; m <= n / 2; ++m) {
    std::complex<double> coeff = 0.0;
    for (int j = 0; j < n; ++j) coeff += v[j] * std::polar(1.0, -2.0 * kPi * m * j / n);
    coeff /= static_cast<double>(n);
    const double k = 2.0 * kPi * m / L;
    const std::complex<double> scaled = coeff / (eps * eps * k * k + a * a);
    for (int j = 0; j < n; ++j) {
      out[j] += (scaled * std::polar(1.0, 2.0 * kPi * m * j / n)).real();
    }
  }
  return out;
}

// Thomas algorithm for -eps^2 (u_{i-1} - 2u_i + u_{i+1})/h^2 + q_i u_i = b_i with zero ghosts.
std::vector<double> thomas_1d(const std::vector<double>& q, const std::vector<double>& b, double eps, double h) {
  const std::size_t n = q.size();
  const double c = eps * eps / (h * h);
  std::vector<double> diag(n);
  std::vector<double> rhs = b;
  for (std::size_t i = 0; i < n; ++i) diag[i] = 2.0 * c + q[i];
  for (std::size_t i = 1; i < n; ++i) {
    const double w = -c / diag[i - 1];
    diag[i] -= w * -c;
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] + c * x[i + 1]) / diag[i];
  return x;
}

} // namespace

TEST_CASE("yukawa_eval") {
  // exp(-1)/(4 pi) and exp(-1)/(2 pi) to 17 digits.
  CHECK(yukawa_eval({1.0, 1.0, false}, 1.0) == doctest::Approx(0.029274915762159580).epsilon(1e-14));
  CHECK(yukawa_eval({0.3, 2.0, true}, 0.5) == doctest::Approx(0.058549831524319161).epsilon(1e-14));
  CHECK_THROWS_AS(yukawa_eval({1.0, 1.0, false}, 0.0), std::domain_error);
  CHECK_THROWS_AS(yukawa_eval({0.0, 1.0, false}, 1.0), std::invalid_argument);

  const KernelParams kp{0.2, 1.5, false};
  double prev = INFINITY;
  for (double r = 0.01; r < 2.0; r += 0.01) {
    const double g = yukawa_eval(kp, r);
    CHECK(g > 0.0);
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("kernel mass equals 1/a^2") {
  struct Case {
    KernelParams kp;
    double expected;
  };
  for (const Case& c : {Case{{1.0, 1.0, false}, 1.0}, Case{{0.1, 2.0, false}, 0.25}, Case{{1.0, 3.0, true}, 1.0 / 9},
                        Case{{0.01, 5.0, false}, 0.04}}) {
    const double r_max = 25.0 * c.kp.effective_eps() / c.kp.a;
    const KernelMass m = kernel_mass_quadrature(c.kp, r_max);
    CHECK_FALSE(m.truncated);
    CHECK(std::abs(m.value - c.expected) <= 1e-6 * c.expected);
  }
  const KernelMass short_range = kernel_mass_quadrature({1.0, 1.0, false}, 5.0);
  CHECK(short_range.truncated);
  CHECK(short_range.value < 1.0);
}

TEST_CASE("spectral Green: zero mode, single mode, zero field") {
  const Grid g = build_grid({2, 16, 2.0, Boundary::Periodic});
  const ScalarField five(g, 5.0);
  const ScalarField out = green_apply_spectral(five, {0.3, 2.0, false});
  CHECK(sup_distance(out, ScalarField(g, 1.25)) == 0.0);

  const double kappa = 2.0 * kPi / g.length();
  const double eps = 0.3;
  const ScalarField c = sample_function(g, [&](const Point& x) { return std::cos(kappa * x[0]); });
  const ScalarField gc = green_apply_spectral(c, {eps, 2.0, false});
  const ScalarField expect = (1.0 / (eps * eps * kappa * kappa + 4.0)) * c;
  CHECK(sup_distance(gc, expect) <= 1e-14);

  CHECK(sup_norm(green_apply_spectral(ScalarField(g, 0.0), {eps, 2.0, false})) == 0.0);
  CHECK_THROWS_AS(green_apply_spectral(ScalarField(build_grid({1, 8, 1.0, Boundary::Dirichlet}), 1.0), {1, 1, false}),
                  std::invalid_argument);
}

TEST_CASE("spectral Green matches a direct DFT sum") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> dist;
  for (int n : {16, 17}) {
    const Grid g = build_grid({1, n, 1.5, Boundary::Periodic});
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    const ScalarField out = green_apply_spectral(ScalarField(g, v), {0.2, 1.3, false});
    const auto ref = direct_spectral_1d(v, 1.5, 0.2, 1.3);
    for (int i = 0; i < n; ++i) CHECK(out[i] == doctest::Approx(ref[i]).epsilon(1e-12));
  }
}

TEST_CASE("spectral Green preserves positivity on resolved bumps") {
  // Resolved means eps / a >= 2h; below that the truncated multiplier rings.
  for (int n : {64, 128}) {
    const Grid g = build_grid({2, n, 4.0, Boundary::Periodic});
    const ScalarField bump = compact_bump(g, 0.8);
    for (double eps : {1.0, 0.4, 0.2}) {
      if (eps / 2.0 < 2.0 * g.spacing()) continue;
      const ScalarField out = green_apply_spectral(bump, {eps, 2.0, false});
      CHECK(min_value(out) >= -kOrderingTol);
    }
  }
}

TEST_CASE("delta limit: closed form for a single mode, zero for constants, decay for a bump") {
  const Grid g = build_grid({1, 64, 1.0, Boundary::Periodic});
  const double kappa = 2.0 * kPi;
  const double a = 4.0;
  const ScalarField c = sample_function(g, [&](const Point& x) { return std::cos(kappa * x[0]); });
  const std::vector<double> eps_list{0.4, 0.2, 0.1, 0.05};
  const auto rows = delta_limit_check(c, eps_list, a);
  for (const auto& r : rows) {
    const double e2 = r.eps * r.eps;
    const double exact = kappa * kappa * e2 / (a * a * (e2 * kappa * kappa + a * a));
    CHECK(std::abs(r.error - exact) <= 1e-10);
  }
  // Halving eps quarters the error asymptotically.
  CHECK(rows[2].error / rows[3].error == doctest::Approx(4.0).epsilon(0.02));

  for (const auto& r : delta_limit_check(ScalarField(g, 2.0), eps_list, a)) CHECK(r.error == 0.0);

  const Grid g3 = build_grid({3, 32, 4.0, Boundary::Periodic});
  const ScalarField gauss = sample_function(g3, [](const Point& x) {
    return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 0.5);
  });
  const auto grows = delta_limit_check(gauss, {0.4, 0.2, 0.1}, 2.0);
  CHECK(grows[1].error < grows[0].error);
  CHECK(grows[2].error < grows[1].error);
}

TEST_CASE("resolvent: constant potential and unit source") {
  const Grid g = build_grid({3, 24, 6.0, Boundary::Dirichlet});
  const ResolventOperator op(g, PotentialSpec::constant(4.0, 4.0), 0.5);
  const ScalarField v = resolvent_apply(op, ScalarField(g, 1.0));
  CHECK(op.last_residual() <= 1e-10);
  CHECK(min_value(v) >= 0.0);
  CHECK(max_value(v) <= 0.25);
  // The wall sits 12 decay lengths away: the deficit is of order e^{-12}.
  CHECK(v[g.center_node()] == doctest::Approx(0.25).epsilon(1e-4));

  const ScalarField zero = resolvent_apply(op, ScalarField(g, 0.0));
  CHECK(sup_norm(zero) == 0.0);

  CHECK_THROWS_AS(ResolventOperator(build_grid({1, 8, 1.0, Boundary::Periodic}), PotentialSpec::constant(1, 1), 1.0),
                  std::invalid_argument);
}

TEST_CASE("resolvent matches a tridiagonal oracle in 1-D") {
  const Grid g = build_grid({1, 40, 3.0, Boundary::Dirichlet});
  const PotentialSpec pot = PotentialSpec::radial_quadratic(2.0, 1.5);
  const double eps = 0.3;
  const ResolventOperator op(g, pot, eps);
  const ScalarField rhs = sample_function(g, [](const Point& x) { return 1.0 + std::sin(3.0 * x[0]); });
  const ScalarField v = op.solve(rhs);
  const ScalarField q = pot.sample_q(g);
  const auto ref = thomas_1d({q.values().begin(), q.values().end()}, {rhs.values().begin(), rhs.values().end()}, eps,
                             g.spacing());
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(v[i] == doctest::Approx(ref[i]).epsilon(1e-10));
}

TEST_CASE("resolvent Green column is positive and symmetric") {
  const Grid g = build_grid({3, 15, 3.0, Boundary::Dirichlet});
  const ResolventOperator op(g, PotentialSpec::radial_quadratic(4.0, 1.0), 0.4);
  const std::size_t center = g.center_node();
  CHECK(g.node(center)[0] == doctest::Approx(0.0).epsilon(1e-15));
  const ScalarField col = op.green_column(center);
  CHECK(min_value(col) >= -kOrderingTol);
  CHECK(col[center] > 0.0);
  const double scale = max_value(col);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto idx = g.multi_index(i);
    const int n = g.n();
    const std::size_t swapped = g.flat_index({idx[1], idx[2], idx[0]});
    const std::size_t mirrored = g.flat_index({n - 1 - idx[0], idx[1], idx[2]});
    CHECK(std::abs(col[i] - col[swapped]) <= 1e-9 * scale);
    CHECK(std::abs(col[i] - col[mirrored]) <= 1e-9 * scale);
  }
}

TEST_CASE("mass bound") {
  const Grid g = build_grid({3, 16, 4.0, Boundary::Dirichlet});
  const auto flat = mass_bound_check(ResolventOperator(g, PotentialSpec::constant(4.0, 4.0), 1.0));
  CHECK(flat.holds);
  CHECK(flat.max_value <= 0.25 + 1e-10);

  const PotentialSpec growing = PotentialSpec::radial_quadratic(4.0, 1.0);
  const auto grow = mass_bound_check(ResolventOperator(g, growing, 1.0));
  CHECK(grow.holds);
  CHECK(grow.max_value < 0.25);

  const auto doubled = mass_bound_check(ResolventOperator(g, growing.scaled(2.0), 1.0));
  CHECK(doubled.holds);
  CHECK(doubled.max_value < grow.max_value);
}

TEST_CASE("Green comparison") {
  const Grid g = build_grid({3, 12, 3.0, Boundary::Dirichlet});
  const std::vector<std::size_t> sources{g.center_node(), g.flat_index({2, 6, 6}), g.flat_index({9, 3, 7})};

  const auto grow = green_comparison_check(g, PotentialSpec::radial_quadratic(4.0, 1.0),
                                           PotentialSpec::constant(4.0, 4.0), sources, 0.5);
  CHECK(grow.holds);
  CHECK(grow.rows.size() == 3);

  const auto same =
      green_comparison_check(g, PotentialSpec::constant(4.0, 5.0), PotentialSpec::constant(4.0, 5.0), sources, 0.5);
  CHECK(same.holds);
  for (const auto& r : same.rows) {
    CHECK(std::abs(r.max_violation) <= 1e-9);
    CHECK(std::abs(r.min_gap) <= 1e-9);
  }

  const auto strict =
      green_comparison_check(g, PotentialSpec::constant(4.0, 6.0), PotentialSpec::constant(4.0, 5.0), sources, 1.0);
  CHECK(strict.holds);
  for (const auto& r : strict.rows) CHECK(r.min_gap > 0.0);

  CHECK_THROWS_AS(green_comparison_check(g, PotentialSpec::constant(4.0, 4.0), PotentialSpec::radial_quadratic(4.0, 1.0),
                                         sources, 0.5),
                  std::invalid_argument);
}

TEST_CASE("distributional limit") {
  const Grid g = build_grid({2, 48, 4.0, Boundary::Dirichlet});
  const ScalarField bump = compact_bump(g, 1.0);
  const std::vector<double> eps_list{0.4, 0.2, 0.1, 0.05};

  const auto flat = distributional_limit_check(bump, PotentialSpec::constant(4.0, 4.0), eps_list);
  CHECK_FALSE(flat.boundary_warning);
  for (std::size_t i = 1; i < flat.rows.size(); ++i) CHECK(flat.rows[i].error < flat.rows[i - 1].error);

  const auto grow = distributional_limit_check(bump, PotentialSpec::radial_quadratic(4.0, 1.0), eps_list);
  for (std::size_t i = 1; i < grow.rows.size(); ++i) CHECK(grow.rows[i].error < grow.rows[i - 1].error);

  for (const auto& r : distributional_limit_check(ScalarField(g, 0.0), PotentialSpec::constant(4.0, 4.0), eps_list).rows) {
    CHECK(r.error == 0.0);
  }

  const auto wide = distributional_limit_check(ScalarField(g, 1.0), PotentialSpec::constant(4.0, 4.0), {0.2});
  CHECK(wide.boundary_warning);
}

TEST_CASE("constant potential: resolvent and spectral agree in the interior") {
  // Dirichlet nodes coincide with the odd nodes of a periodic grid of 2n points.
  auto interior_gap = [](int n) {
    const double L = 4.0;
    const Grid box = build_grid({1, n, L, Boundary::Dirichlet});
    const Grid torus = build_grid({1, 2 * n, L, Boundary::Periodic});
    const auto rhs = [](const Point& x) { return std::exp(-4.0 * x[0] * x[0]); };
    const double eps = 0.2;
    const ScalarField fd = ResolventOperator(box, PotentialSpec::constant(4.0, 4.0), eps).solve(sample_function(box, rhs));
    const ScalarField sp = green_apply_spectral(sample_function(torus, rhs), {eps, 2.0, false});
    double gap = 0.0;
    for (std::size_t i : interior_nodes(box, 0.125)) gap = std::max(gap, std::abs(fd[i] - sp[2 * i + 1]));
    return gap;
  };
  const double coarse = interior_gap(64);
  const double fine = interior_gap(128);
  MESSAGE("interior difference n=64: " << coarse << ", n=128: " << fine);
  CHECK(coarse < 1e-3);
  // Second-order stencil: halving h cuts the gap by about four.
  CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.1));
}
