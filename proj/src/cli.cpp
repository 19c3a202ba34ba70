#include "singlim/cli.hpp"

#include "singlim/certificate.hpp"
#include "singlim/config.hpp"
#include "singlim/error.hpp"
#include "singlim/greens.hpp"
#include "singlim/study.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

namespace singlim {

namespace {

constexpr const char* kFooter = R"(Config file: one 'key = value' per line, '#' starts a comment.
  grid          dims (1-3), n (>= 8), L, bc (periodic | dirichlet)
  problem       a2, potential (constant | shifted_sine | radial_quadratic) with
                potential.b2 / potential.omega / potential.c, nonlinearity
                (constant | power_shift | exponential | polynomial) with
                nonlinearity.c / nonlinearity.m / nonlinearity.coeffs
  solver        mode (eps_split | eps_full | limit | rescaled), eps, eps_list,
                R (else searched), p_norm (certify override), tol, max_iter,
                xi (rescaled center), u0 / u_max (limit hypotheses),
                potential2 (compare-q reference), sources (compare-q node
                indices), margin (greens-check interior margin, fraction of L)

CSV outputs:
  solve, limit, rescaled   field at --out (x1[,x2,x3],u) and a key,value report
                           next to it (<stem>_report.csv)
  sweep                    eps,error,gap_bound,slope
  greens-check             check,eps,value,reference,pass
  compare-q                source,max_violation,min_gap,pass
  certify                  key,value (when --out is given)

Exit codes: 0 success, 1 config error, 2 certification or check failure,
3 numerical non-convergence (reports are still written).)";

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct CommonOptions {
  std::string config;
  std::string out;
  std::string eps;
  std::optional<double> tol;
  std::optional<int> max_iter;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config, "Run configuration file")->required();
  cmd->add_option("--out", opts.out, "Output CSV path");
  cmd->add_option("--eps", opts.eps, "Comma-separated eps list (overrides the config)");
  cmd->add_option("--tol", opts.tol, "Picard stopping tolerance");
  cmd->add_option("--max-iter", opts.max_iter, "Picard iteration cap");
}

RunConfig load_config(const CommonOptions& opts) {
  RunConfig cfg = RunConfig::load(opts.config);
  if (!opts.eps.empty()) cfg.set("eps_list", opts.eps);
  return cfg;
}

PicardOptions picard_options(const RunConfig& cfg, const CommonOptions& opts) {
  PicardOptions p;
  p.tol = opts.tol ? *opts.tol : cfg.get_real("tol", 1e-10);
  p.max_iter = opts.max_iter ? *opts.max_iter : cfg.get_int("max_iter", 10000);
  if (!(p.tol > 0.0)) throw ConfigError(cfg.line_of("tol"), "tol must be positive");
  if (p.max_iter < 1) throw ConfigError(cfg.line_of("max_iter"), "max_iter must be >= 1");
  return p;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError(0, "cannot write output file '" + path + "'");
  return f;
}

std::string report_path(const std::string& field_path) {
  const auto slash = field_path.find_last_of('/');
  const auto dot = field_path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return field_path + "_report.csv";
  return field_path.substr(0, dot) + "_report" + field_path.substr(dot);
}

void write_field(const std::string& path, const ScalarField& u) {
  auto f = open_out(path);
  const Grid& g = u.grid();
  for (int d = 0; d < g.dims(); ++d) f << 'x' << d + 1 << ',';
  f << "u\n";
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Point x = g.node(i);
    for (int d = 0; d < g.dims(); ++d) f << num(x[d]) << ',';
    f << num(u[i]) << '\n';
  }
}

using KeyValues = std::vector<std::pair<std::string, std::string>>;

void write_key_values(const std::string& path, const KeyValues& kv) {
  auto f = open_out(path);
  f << "key,value\n";
  for (const auto& [k, v] : kv) f << k << ',' << v << '\n';
}

KeyValues solve_key_values(const SolveReport& r) {
  KeyValues kv{{"iterations", std::to_string(r.iterations)},
               {"converged", r.converged ? "1" : "0"},
               {"gamma_observed", num(r.gamma_observed)},
               {"aposteriori_error", r.aposteriori_error ? num(*r.aposteriori_error) : "nan"},
               {"max_iterate_norm", num(r.max_iterate_norm)},
               {"sup_norm", num(sup_norm(r.final))}};
  for (std::size_t k = 0; k < r.residuals.size(); ++k) {
    kv.emplace_back("residual_" + std::to_string(k + 1), num(r.residuals[k]));
  }
  return kv;
}

/// Certificate from the config: explicit R, else the smallest feasible R.
std::optional<ContractionCertificate> build_certificate(const RunConfig& cfg, const PotentialSpec& pot,
                                                        const NonlinearitySpec& nonlin, Mode mode) {
  const double a2 = pot.a2();
  double p_norm = 0.0;
  if (cfg.has("p_norm")) {
    p_norm = cfg.get_real("p_norm", 0.0);
  } else if (mode != Mode::EpsFull) {
    const auto p = pot.p_norm();
    if (!p) {
      throw ConfigError(cfg.line_of("potential"),
                        "unbounded potential has no finite |p|: use mode = eps_full (full-Green operator path)");
    }
    p_norm = *p;
  }
  if (cfg.has("R")) {
    try {
      return certify(a2, p_norm, nonlin, cfg.get_real("R", 1.0));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(cfg.line_of("R"), e.what());
    }
  }
  const auto R = find_R(a2, p_norm, nonlin);
  if (!R) return std::nullopt;
  return certify(a2, p_norm, nonlin, *R);
}

ProblemInstance build_problem(const RunConfig& cfg, Mode mode) {
  const Grid grid = make_grid(cfg);
  const PotentialSpec pot = make_potential(cfg);
  const NonlinearitySpec nonlin = make_nonlinearity(cfg);
  const auto eps = eps_values(cfg);
  ProblemInstance prob{grid, pot, nonlin, eps.empty() ? 0.0 : eps.front(), build_certificate(cfg, pot, nonlin, mode),
                       mode};
  const auto xi = cfg.get_real_list("xi");
  for (std::size_t d = 0; d < xi.size() && d < 3; ++d) prob.xi[d] = xi[d];
  try {
    prob.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(cfg.line_of("mode"), e.what());
  }
  return prob;
}

int cmd_certify(const CommonOptions& opts, std::ostream& out) {
  const RunConfig cfg = load_config(opts);
  const PotentialSpec pot = make_potential(cfg);
  const NonlinearitySpec nonlin = make_nonlinearity(cfg);
  const Mode mode = cfg.has("mode") ? parse_mode(cfg) : Mode::EpsSplit;
  const auto cert = build_certificate(cfg, pot, nonlin, mode);

  KeyValues kv;
  if (!cert) {
    out << "no R in [1e-3, 1e3] satisfies both the ball and contraction conditions\n";
    kv = {{"certified", "0"}};
  } else {
    const auto& c = *cert;
    kv = {{"R", num(c.R)},
          {"a2", num(c.a2)},
          {"p_norm", num(c.p_norm)},
          {"M_R", num(c.M_R)},
          {"M1_R", num(c.M1_R)},
          {"ball_lhs", num(c.ball_lhs)},
          {"gamma", num(c.gamma)},
          {"cond_ball", c.cond_ball ? "1" : "0"},
          {"cond_contract", c.cond_contract ? "1" : "0"},
          {"certified", c.certified() ? "1" : "0"}};
    out << "R             = " << short_num(c.R) << '\n'
        << "a^2           = " << short_num(c.a2) << '\n'
        << "|p|           = " << short_num(c.p_norm) << '\n'
        << "M(R)          = " << short_num(c.M_R) << '\n'
        << "M1(R)         = " << short_num(c.M1_R) << '\n'
        << "ball lhs      = " << short_num(c.ball_lhs) << (c.cond_ball ? "  <= R  ok" : "  > R  FAIL") << '\n'
        << "gamma         = " << short_num(c.gamma) << (c.cond_contract ? "  < 1  ok" : "  >= 1  FAIL") << '\n'
        << "certified     = " << (c.certified() ? "yes" : "no") << '\n';
  }
  kv.emplace_back("f0_nonzero", nonlin.nonzero_at_origin() ? "1" : "0");
  out << "f(0) != 0     = " << (nonlin.nonzero_at_origin() ? "yes" : "no") << '\n';

  if (cfg.has("u0")) {
    const double u0 = cfg.get_real("u0", 1.0);
    const double u_max = cfg.get_real("u_max", 100.0 * u0);
    LimitHypothesesReport h;
    try {
      h = check_limit_hypotheses(nonlin, pot.a2(), u0, u_max);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(cfg.line_of("u0"), e.what());
    }
    out << "f(u)/u on [" << short_num(u0) << ", " << short_num(u_max) << "]: monotone "
        << (h.monotone ? "yes" : "no") << ", grows " << (h.grows ? "yes" : "no") << ", min "
        << short_num(h.min_ratio) << (h.min_below_a2 ? " < a^2" : " >= a^2") << '\n';
    kv.emplace_back("hyp_monotone", h.monotone ? "1" : "0");
    kv.emplace_back("hyp_grows", h.grows ? "1" : "0");
    kv.emplace_back("hyp_min_ratio", num(h.min_ratio));
    kv.emplace_back("hyp_passed", h.passed() ? "1" : "0");
  }
  if (!opts.out.empty()) write_key_values(opts.out, kv);
  return cert && cert->certified() ? kExitOk : kExitCheckFailed;
}

int cmd_solve(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_config(opts);
  const Mode mode = parse_mode(cfg);
  if (mode == Mode::Rescaled) throw ConfigError(cfg.line_of("mode"), "use the rescaled subcommand for mode rescaled");
  const ProblemInstance prob = build_problem(cfg, mode);
  if (mode != Mode::Limit && !(prob.eps > 0.0)) throw ConfigError(cfg.line_of("eps"), "solve needs eps > 0");
  if (!prob.certificate || !prob.certificate->certified()) {
    err << "warning: problem is not certified; iterating without contraction guarantee\n";
  }
  const SolveReport r = picard_solve(prob, picard_options(cfg, opts));
  out << to_string(mode) << ": " << (r.converged ? "converged" : "NOT converged") << " after " << r.iterations
      << " iterations, sup|u| = " << short_num(sup_norm(r.final)) << ", observed contraction "
      << short_num(r.gamma_observed) << '\n';
  if (!opts.out.empty()) {
    write_field(opts.out, r.final);
    KeyValues kv{{"mode", to_string(mode)}, {"eps", num(prob.eps)}};
    if (prob.certificate) kv.emplace_back("gamma", num(prob.certificate->gamma));
    const auto rest = solve_key_values(r);
    kv.insert(kv.end(), rest.begin(), rest.end());
    write_key_values(report_path(opts.out), kv);
  }
  return r.converged ? kExitOk : kExitNoConvergence;
}

int cmd_limit(const CommonOptions& opts, std::ostream& out) {
  const RunConfig cfg = load_config(opts);
  const Mode mode = cfg.has("mode") ? parse_mode(cfg) : Mode::Limit;
  const ProblemInstance prob = build_problem(cfg, mode);
  if (!prob.certificate) {
    out << "no certified ball radius; limit solve needs R\n";
    return kExitCheckFailed;
  }
  const ScalarField u = limit_solve(prob);
  const double res = limit_residual(prob, u);
  out << "limit: sup|u| = " << short_num(sup_norm(u)) << ", max |q u - f(u)| = " << short_num(res) << '\n';
  if (!opts.out.empty()) {
    write_field(opts.out, u);
    write_key_values(report_path(opts.out), {{"mode", "limit"},
                                             {"R", num(prob.certificate->R)},
                                             {"max_residual", num(res)},
                                             {"sup_norm", num(sup_norm(u))},
                                             {"converged", "1"}});
  }
  return kExitOk;
}

int cmd_rescaled(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_config(opts);
  const ProblemInstance prob = build_problem(cfg, Mode::Rescaled);
  if (!prob.certificate) {
    out << "no certified ball radius; rescaled solve needs R\n";
    return kExitCheckFailed;
  }
  const RescaledReport r = rescaled_solve(prob.xi, prob.eps, prob, picard_options(cfg, opts));
  if (!r.uniqueness_holds) {
    err << "warning: uniqueness inequality M1(R)/q(xi) < 1 fails (" << short_num(r.uniqueness_lhs) << ")\n";
  }
  out << "rescaled: constant root " << short_num(r.constant_root) << ", deviation " << short_num(r.deviation)
      << ", M1(R)/q(xi) = " << short_num(r.uniqueness_lhs) << '\n';
  if (!opts.out.empty()) {
    write_field(opts.out, r.solve.final);
    KeyValues kv{{"mode", "rescaled"},
                 {"eps", num(prob.eps)},
                 {"constant_root", num(r.constant_root)},
                 {"deviation", num(r.deviation)},
                 {"uniqueness_lhs", num(r.uniqueness_lhs)},
                 {"uniqueness_holds", r.uniqueness_holds ? "1" : "0"}};
    const auto rest = solve_key_values(r.solve);
    kv.insert(kv.end(), rest.begin(), rest.end());
    write_key_values(report_path(opts.out), kv);
  }
  return r.solve.converged ? kExitOk : kExitNoConvergence;
}

int cmd_sweep(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = load_config(opts);
  const Mode mode = cfg.has("mode") ? parse_mode(cfg) : Mode::EpsSplit;
  const auto eps = eps_values(cfg);
  if (eps.empty()) throw ConfigError(0, "sweep needs 'eps_list' (or --eps)");
  const ProblemInstance prob = build_problem(cfg, mode);
  if (!prob.certificate || !prob.certificate->certified()) {
    out << "problem is not certified; sweep refused\n";
    return kExitCheckFailed;
  }
  SweepReport r;
  try {
    r = sweep_eps(prob, eps, picard_options(cfg, opts));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(cfg.line_of("eps_list"), e.what());
  }
  for (const auto& w : r.warnings) err << "warning: " << w << '\n';

  const std::string slope = r.fit ? num(r.fit->slope) : "nan";
  if (!opts.out.empty()) {
    auto f = open_out(opts.out);
    f << "eps,error,gap_bound,slope\n";
    for (std::size_t i = 0; i < r.eps_list.size(); ++i) {
      f << num(r.eps_list[i]) << ',' << num(r.errors[i]) << ',' << num(r.gap_bounds[i]) << ',' << slope << '\n';
    }
  }
  for (std::size_t i = 0; i < r.eps_list.size(); ++i) {
    out << "eps " << short_num(r.eps_list[i]) << "  error " << short_num(r.errors[i]) << "  bound "
        << short_num(r.gap_bounds[i]) << '\n';
  }
  out << "fitted slope: " << (r.fit ? short_num(r.fit->slope) : "none (fewer than 3 nonzero errors)") << '\n';
  return r.all_converged() ? kExitOk : kExitNoConvergence;
}

int cmd_greens_check(const CommonOptions& opts, std::ostream& out) {
  const RunConfig cfg = load_config(opts);
  const double a2 = cfg.require_real("a2");
  const double a = std::sqrt(a2);
  auto eps = eps_values(cfg);
  if (eps.empty()) eps = {0.4, 0.2, 0.1};

  struct Row {
    std::string check;
    double eps;
    double value;
    double reference;
    bool pass;
  };
  std::vector<Row> rows;

  for (double e : eps) {
    for (bool rescaled : {false, true}) {
      const KernelParams kp{e, a, rescaled};
      const KernelMass m = kernel_mass_quadrature(kp, 40.0 * kp.effective_eps() / a);
      const double rel = std::abs(m.value - 1.0 / a2) * a2;
      rows.push_back({rescaled ? "kernel_mass_rescaled" : "kernel_mass", e, m.value, 1.0 / a2, rel <= 1e-6});
    }
  }

  const Grid periodic = make_grid(cfg, Boundary::Periodic);
  const double kappa = 2.0 * std::numbers::pi / periodic.length();
  const ScalarField mode = sample_function(periodic, [kappa](const Point& x) { return std::cos(kappa * x[0]); });
  const auto delta = delta_limit_check(mode, eps, a);
  for (std::size_t i = 0; i < delta.size(); ++i) {
    const double e = delta[i].eps;
    const double exact = kappa * kappa * e * e / (a2 * (e * e * kappa * kappa + a2));
    const bool decreasing = i == 0 || delta[i].error < delta[i - 1].error;
    rows.push_back({"delta_limit", e, delta[i].error, exact, std::abs(delta[i].error - exact) <= 1e-10 && decreasing});
  }

  const Grid box = make_grid(cfg, Boundary::Dirichlet);
  const PotentialSpec pot = make_potential(cfg);
  const MassBoundResult mb = mass_bound_check(ResolventOperator(box, pot, eps.front()));
  rows.push_back({"mass_bound", eps.front(), mb.max_value, mb.bound, mb.holds});

  const ScalarField bump = compact_bump(box, 0.25 * box.length());
  const auto dl = distributional_limit_check(bump, pot, eps, cfg.get_real("margin", 0.125));
  for (std::size_t i = 0; i < dl.rows.size(); ++i) {
    const bool decreasing = i == 0 || dl.rows[i].error < dl.rows[i - 1].error;
    rows.push_back({"distributional_limit", dl.rows[i].eps, dl.rows[i].error, 0.0, decreasing});
  }

  bool all = true;
  std::ofstream f;
  if (!opts.out.empty()) {
    f = open_out(opts.out);
    f << "check,eps,value,reference,pass\n";
  }
  for (const auto& r : rows) {
    all = all && r.pass;
    out << (r.pass ? "PASS " : "FAIL ") << r.check << " eps=" << short_num(r.eps) << " value=" << short_num(r.value)
        << " reference=" << short_num(r.reference) << '\n';
    if (f) f << r.check << ',' << num(r.eps) << ',' << num(r.value) << ',' << num(r.reference) << ',' << r.pass << '\n';
  }
  return all ? kExitOk : kExitCheckFailed;
}

int cmd_compare_q(const CommonOptions& opts, std::ostream& out) {
  const RunConfig cfg = load_config(opts);
  const Grid box = make_grid(cfg, Boundary::Dirichlet);
  const PotentialSpec q1 = make_potential(cfg, "potential");
  const PotentialSpec q2 = make_potential(cfg, "potential2");
  const auto eps = eps_values(cfg);
  const double e = eps.empty() ? 1.0 : eps.front();

  std::vector<std::size_t> sources;
  for (double s : cfg.get_real_list("sources")) {
    if (s < 0.0 || s != std::floor(s) || s >= static_cast<double>(box.size())) {
      throw ConfigError(cfg.line_of("sources"), "source " + short_num(s) + " is not a node index");
    }
    sources.push_back(static_cast<std::size_t>(s));
  }
  if (sources.empty()) {
    const int c = box.n() / 2;
    const int off = box.n() / 4;
    sources = {box.center_node(), box.flat_index({c + off, c, c}), box.flat_index({c - off, c - off, c + off})};
  }
  ComparisonResult r;
  try {
    r = green_comparison_check(box, q1, q2, sources, e);
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(cfg.line_of("potential2"), ex.what());
  }
  std::ofstream f;
  if (!opts.out.empty()) {
    f = open_out(opts.out);
    f << "source,max_violation,min_gap,pass\n";
  }
  for (const auto& row : r.rows) {
    const bool pass = row.max_violation <= kOrderingTol;
    out << (pass ? "PASS" : "FAIL") << " source " << row.source << ": max(G1 - G2) = " << short_num(row.max_violation)
        << '\n';
    if (f) f << row.source << ',' << num(row.max_violation) << ',' << num(row.min_gap) << ',' << pass << '\n';
  }
  return r.holds ? kExitOk : kExitCheckFailed;
}

} // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Singular-limit laboratory for -eps^2 Lap u + q(x) u = f(u)"};
  app.footer(kFooter);
  app.require_subcommand(1);

  CommonOptions opts;
  struct Sub {
    const char* name;
    const char* help;
  };
  const std::vector<Sub> subs = {
      {"certify", "Evaluate the ball and contraction conditions (exit 2 if not certified)"},
      {"solve", "Picard iteration of the configured mode; writes field + report CSV"},
      {"limit", "Pointwise solve of q(x) u = f(u); writes field + report CSV"},
      {"sweep", "eps sweep against the limit solution; writes eps,error,gap_bound,slope"},
      {"greens-check", "Kernel mass, delta limit, mass bound and distributional limit checks"},
      {"compare-q", "Green-column ordering for potential >= potential2"},
      {"rescaled", "Solve in stretched coordinates around xi; writes field + report CSV"},
  };
  for (const auto& s : subs) add_common(app.add_subcommand(s.name, s.help), opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cmd == "certify") return cmd_certify(opts, out);
    if (cmd == "solve") return cmd_solve(opts, out, err);
    if (cmd == "limit") return cmd_limit(opts, out);
    if (cmd == "sweep") return cmd_sweep(opts, out, err);
    if (cmd == "greens-check") return cmd_greens_check(opts, out);
    if (cmd == "compare-q") return cmd_compare_q(opts, out);
    if (cmd == "rescaled") return cmd_rescaled(opts, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << opts.config << ": " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const std::overflow_error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const std::domain_error& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNoConvergence;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << opts.config << ": " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

} // namespace singlim
