#include "singlim/error.hpp"
#include "singlim/greens.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace singlim {

struct ResolventOperator::Impl {
  Eigen::SparseMatrix<double> A;
  Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper> cg;
};

ResolventOperator::ResolventOperator(const Grid& grid, const PotentialSpec& potential, double eps,
                                     LinearSolveOptions opts)
    : grid_(grid), potential_(potential), eps_(eps), q_(potential.sample_q(grid)), impl_(std::make_unique<Impl>()) {
  if (grid.bc() != Boundary::Dirichlet) {
    throw std::invalid_argument("resolvent operator needs a Dirichlet grid");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("resolvent operator needs eps > 0");
  }
  if (min_value(q_) < potential.a2()) {
    throw std::invalid_argument("potential dips below a^2 on the grid");
  }

  const int d = grid.dims();
  const int n = grid.n();
  const double coupling = eps * eps / (grid.spacing() * grid.spacing());
  const auto size = static_cast<Eigen::Index>(grid.size());

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(grid.size() * static_cast<std::size_t>(2 * d + 1));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    entries.emplace_back(row, row, 2.0 * d * coupling + q_[i]);
    auto idx = grid.multi_index(i);
    for (int ax = 0; ax < d; ++ax) {
      for (int step : {-1, 1}) {
        auto nb = idx;
        nb[ax] += step;
        if (nb[ax] < 0 || nb[ax] >= n) continue; // zero ghost value
        entries.emplace_back(row, static_cast<Eigen::Index>(grid.flat_index(nb)), -coupling);
      }
    }
  }
  impl_->A.resize(size, size);
  impl_->A.setFromTriplets(entries.begin(), entries.end());
  impl_->A.makeCompressed();
  impl_->cg.setTolerance(opts.rel_tol);
  impl_->cg.setMaxIterations(opts.max_iter);
  impl_->cg.compute(impl_->A);
}

ResolventOperator::~ResolventOperator() = default;
ResolventOperator::ResolventOperator(ResolventOperator&&) noexcept = default;
ResolventOperator& ResolventOperator::operator=(ResolventOperator&&) noexcept = default;

const Eigen::SparseMatrix<double>& ResolventOperator::matrix() const noexcept { return impl_->A; }

ScalarField ResolventOperator::solve(const ScalarField& rhs) const {
  if (!(rhs.grid() == grid_)) {
    throw std::invalid_argument("resolvent applied to a field on a different grid");
  }
  const auto vals = rhs.values();
  const Eigen::Map<const Eigen::VectorXd> b(vals.data(), static_cast<Eigen::Index>(vals.size()));
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    last_residual_ = 0.0;
    return ScalarField(grid_, 0.0);
  }
  const Eigen::VectorXd x = impl_->cg.solve(b);
  last_residual_ = (impl_->A * x - b).norm() / bnorm;
  if (impl_->cg.info() != Eigen::Success || !std::isfinite(last_residual_)) {
    std::ostringstream msg;
    msg << "resolvent CG did not converge: relative residual " << last_residual_ << " after "
        << impl_->cg.iterations() << " iterations";
    throw NumericalError(msg.str());
  }
  return ScalarField(grid_, std::vector<double>(x.data(), x.data() + x.size()));
}

ScalarField ResolventOperator::green_column(std::size_t source) const {
  if (source >= grid_.size()) throw std::out_of_range("green column source outside the grid");
  std::vector<double> impulse(grid_.size(), 0.0);
  impulse[source] = std::pow(grid_.spacing(), -grid_.dims());
  return solve(ScalarField(grid_, std::move(impulse)));
}

ScalarField resolvent_apply(const ResolventOperator& op, const ScalarField& rhs) { return op.solve(rhs); }

MassBoundResult mass_bound_check(const ResolventOperator& op) {
  const ScalarField v = op.solve(ScalarField(op.grid(), 1.0));
  const double bound = 1.0 / op.potential().a2();
  const double mx = max_value(v);
  const double mn = min_value(v);
  return {mn >= -kOrderingTol && mx <= bound + kOrderingTol, mx, mn, bound};
}

ComparisonResult green_comparison_check(const Grid& grid, const PotentialSpec& q1, const PotentialSpec& q2,
                                        const std::vector<std::size_t>& sources, double eps) {
  const ScalarField s1 = q1.sample_q(grid);
  const ScalarField s2 = q2.sample_q(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (s1[i] < s2[i]) {
      throw std::invalid_argument("comparison needs q1 >= q2 pointwise; violated at node " + std::to_string(i));
    }
  }
  const ResolventOperator op1(grid, q1, eps);
  const ResolventOperator op2(grid, q2, eps);

  ComparisonResult result{true, {}};
  for (std::size_t src : sources) {
    const ScalarField g1 = op1.green_column(src);
    const ScalarField g2 = op2.green_column(src);
    ComparisonRow row{src, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      row.max_violation = std::max(row.max_violation, g1[i] - g2[i]);
      row.min_gap = std::min(row.min_gap, g2[i] - g1[i]);
    }
    result.holds = result.holds && row.max_violation <= kOrderingTol;
    result.rows.push_back(row);
  }
  return result;
}

std::vector<std::size_t> interior_nodes(const Grid& grid, double margin) {
  const double half = 0.5 * grid.length();
  const double keep = half - margin * grid.length();
  std::vector<std::size_t> nodes;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Point x = grid.node(i);
    bool inside = true;
    for (int d = 0; d < grid.dims(); ++d) {
      inside = inside && std::abs(x[d]) <= keep;
    }
    if (inside) nodes.push_back(i);
  }
  return nodes;
}

DistributionalLimitResult distributional_limit_check(const ScalarField& h, const PotentialSpec& potential,
                                                     const std::vector<double>& eps_list, double margin) {
  const Grid& grid = h.grid();
  const ScalarField q = potential.sample_q(grid);
  const auto probes = interior_nodes(grid, margin);
  if (probes.empty()) throw std::invalid_argument("interior margin leaves no probe nodes");

  // Boundary ring: the outermost layer of nodes on every face.
  bool warn = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.multi_index(i);
    for (int d = 0; d < grid.dims(); ++d) {
      if ((idx[d] == 0 || idx[d] == grid.n() - 1) && std::abs(h[i]) > 1e-12) warn = true;
    }
  }

  DistributionalLimitResult result{{}, warn};
  for (double eps : eps_list) {
    const ResolventOperator op(grid, potential, eps);
    const ScalarField v = op.solve(h);
    double err = 0.0;
    for (std::size_t i : probes) {
      err = std::max(err, std::abs(v[i] - h[i] / q[i]));
    }
    result.rows.push_back({eps, err});
  }
  return result;
}

ScalarField compact_bump(const Grid& grid, double rho, const Point& center) {
  return sample_function(grid, [&](const Point& x) {
    double r2 = 0.0;
    for (int d = 0; d < grid.dims(); ++d) {
      r2 += (x[d] - center[d]) * (x[d] - center[d]);
    }
    const double s = r2 / (rho * rho);
    return s < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s)) : 0.0;
  });
}

} // namespace singlim
