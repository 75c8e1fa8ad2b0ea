#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qsp/concentration.hpp"
#include "qsp/io.hpp"
#include "qsp/prolate.hpp"
#include "qsp/qft.hpp"
#include "qsp/qlct.hpp"

namespace qsp::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct VerifyFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotConverged : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AssertionFailed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kSubcommands = {"transform", "prolate", "concentrate", "verify"};

std::string number_text(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string json_value_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return number_text(v.get<double>());
  if (v.is_array()) {
    std::string s;
    for (const auto& e : v) s += (s.empty() ? "" : ",") + json_value_text(e);
    return s;
  }
  throw UsageError("unsupported config value " + v.dump());
}

// Splices the JSON config in front of the subcommand's own flags, so flags given on the
// command line win under the take-last policy.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config") {
      if (k + 1 >= args.size()) throw UsageError("--config needs a file");
      path = args[k + 1];
      args.erase(args.begin() + std::ptrdiff_t(k), args.begin() + std::ptrdiff_t(k) + 2);
      break;
    }
    if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
      args.erase(args.begin() + std::ptrdiff_t(k));
      break;
    }
  }
  if (!path) return args;
  std::ifstream is(*path);
  if (!is) throw UsageError("cannot open config '" + *path + "'");
  nlohmann::json cfg;
  try {
    is >> cfg;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config must be a JSON object");

  auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) {
    return std::find(kSubcommands.begin(), kSubcommands.end(), a) != kSubcommands.end();
  });
  if (sub == args.end()) {
    if (!cfg.contains("command")) throw UsageError("no subcommand given on the command line or in the config");
    args.push_back(cfg["command"].get<std::string>());
    sub = args.end() - 1;
  }
  std::vector<std::string> spliced;
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    if (it.key() == "command") continue;
    if (it.value().is_boolean()) {
      if (it.value().get<bool>()) spliced.push_back("--" + it.key());
      continue;
    }
    spliced.push_back("--" + it.key());
    spliced.push_back(json_value_text(it.value()));
  }
  args.insert(sub + 1, spliced.begin(), spliced.end());
  return args;
}

ParamMatrix parse_matrix(const std::string& text, const std::string& name) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    std::size_t used = 0;
    try {
      v.push_back(std::stod(cell, &used));
    } catch (const std::exception&) {
      throw UsageError(name + ": '" + cell + "' is not a number");
    }
    if (used != cell.size()) throw UsageError(name + ": '" + cell + "' is not a number");
  }
  if (v.size() != 4) throw UsageError(name + " expects four comma-separated values a,b,c,d");
  ParamMatrix m(v[0], v[1], v[2], v[3]);
  if (!(m.b > 0)) throw InvalidMatrix(name + ": b must be positive, got " + number_text(m.b));
  return m;
}

nlohmann::json matrix_json(const ParamMatrix& m) {
  const auto c = m.coefficients();
  return std::vector<double>(c.begin(), c.end());
}

double max_rel_deviation(const QSignald& a, const QSignald& b) {
  const double scale = b.max_abs();
  if (scale == 0) return a.max_abs();
  return (a - b).max_abs() / scale;
}

// Space grid for the inverse of a transform written without metadata: the reciprocal
// lattice of the frequency grid, centred.
Grid2D reciprocal_grid(const Grid2D& freq, const ParamMatrix& A1, const ParamMatrix& A2) {
  const double two_pi = 2 * std::acos(-1.0);
  return Grid2D::centered(two_pi * A1.b / (double(freq.nx) * freq.dx()), freq.nx,
                          two_pi * A2.b / (double(freq.ny) * freq.dy()), freq.ny);
}

struct TransformOptions {
  std::string input, output, matrix1 = "0,1,-1,0", matrix2 = "0,1,-1,0", method = "fast";
  bool inverse = false, verify = false;
  double verify_tol = 1e-8;
};

int cmd_transform(const TransformOptions& o, std::ostream& out) {
  const ParamMatrix A1 = parse_matrix(o.matrix1, "--matrix1"), A2 = parse_matrix(o.matrix2, "--matrix2");
  nlohmann::json meta;
  const QSignald f = read_signal(o.input, &meta);
  const Method method = o.method == "direct" ? Method::direct : Method::fast;

  QSignald F, alt;
  nlohmann::json side = {{"matrix1", matrix_json(A1)}, {"matrix2", matrix_json(A2)}};
  if (!o.inverse) {
    const FreqGrid freq = induced_freq_grid(f.grid, A1, A2);
    auto run = [&](Method m) { return m == Method::direct ? qlct_forward_direct(f, A1, A2, freq) : qlct_forward_fast(f, A1, A2); };
    F = run(method);
    if (o.verify) alt = run(method == Method::direct ? Method::fast : Method::direct);
    side["domain"] = "frequency";
    side["space"] = grid_json(f.grid);
  } else {
    const Grid2D space = meta.contains("space") ? grid_from_json(meta["space"]) : reciprocal_grid(f.grid, A1, A2);
    F = qlct_inverse(f, A1, A2, space, method);
    if (o.verify) alt = qlct_inverse(f, A1, A2, space, method == Method::direct ? Method::fast : Method::direct);
    side["domain"] = "space";
  }
  write_signal(o.output, F, side);
  out << std::setprecision(17) << "wrote " << o.output << " (" << F.nx() << "x" << F.ny() << ")\n";
  if (o.verify) {
    const double dev = max_rel_deviation(alt, F);
    out << "max relative deviation between direct and fast paths: " << dev << '\n';
    if (!(dev <= o.verify_tol))
      throw VerifyFailed("deviation " + number_text(dev) + " exceeds tolerance " + number_text(o.verify_tol));
  }
  return kOk;
}

struct ProlateOptions {
  double tau = 2, sigma = 2, drift_tol = kMuDriftTolerance;
  int nmax = 6, nquad = 64;
  bool refine = false;
  std::string output;
};

int cmd_prolate(const ProlateOptions& o, std::ostream& out) {
  const int modes = std::max(o.nmax, 1);
  if (o.nquad < 4 * modes) throw UsageError("--nquad must be at least 4 times the mode count");
  const ProlateBasis b = solve_pswf_1d(o.tau, o.sigma, o.nquad, modes);
  out << std::setprecision(17);
  out << "tau = " << b.tau << ", sigma = " << b.sigma << ", c = " << b.c_ratio << ", n_quad = " << b.n_quad() << '\n';
  out << "n,mu\n";
  for (Eigen::Index n = 0; n < b.modes(); ++n) out << n << ',' << b.mu(n) << '\n';
  const Eigen::MatrixXd rg = restricted_gram(b) - Eigen::MatrixXd(b.mu.asDiagonal());
  out << "restricted orthogonality residual: " << rg.cwiseAbs().maxCoeff() << '\n';
  const Eigen::MatrixXd wg = whole_line_gram(b, 3 * b.tau, b.tau / 40) - Eigen::MatrixXd::Identity(b.modes(), b.modes());
  out << "whole-line orthonormality residual: " << wg.cwiseAbs().maxCoeff() << '\n';
  if (o.refine) out << "refined n_quad = " << 2 * b.n_quad() << ", mu drift = " << b.drift << '\n';
  if (!o.output.empty()) {
    write_basis(o.output, b);
    out << "wrote " << o.output << '\n';
  }
  if (!(b.drift <= o.drift_tol))
    throw NotConverged("mu drift " + number_text(b.drift) + " under quadrature doubling exceeds " +
                       number_text(o.drift_tol));
  return kOk;
}

struct ConcentrateOptions {
  std::string preset, matrix1, matrix2, scenario = "bandlimited", output, curve_output;
  bool curve = false;
  std::optional<double> mu0;
  double tau = 2, sigma = 2, grid_step = 1.0 / 16, min_margin = -kMarginTolerance;
  int grid_n = 768, nquad = 64, curve_points = 21;
};

int cmd_concentrate(const ConcentrateOptions& o, std::ostream& out) {
  std::vector<ComparisonCase> cases;
  if (!o.preset.empty()) cases = preset_cases(o.preset);
  if (!o.matrix1.empty() || !o.matrix2.empty()) {
    ComparisonCase cs;
    cs.label = "custom";
    cs.A1 = parse_matrix(o.matrix1.empty() ? "0,1,-1,0" : o.matrix1, "--matrix1");
    cs.A2 = parse_matrix(o.matrix2.empty() ? o.matrix1 : o.matrix2, "--matrix2");
    if (o.scenario == "bandlimited") cs.scenario = Scenario::bandlimited;
    else if (o.scenario == "time-limited") cs.scenario = Scenario::time_limited;
    else throw UsageError("--scenario must be bandlimited or time-limited");
    cases.push_back(cs);
  }
  if (cases.empty() && !o.curve) throw UsageError("nothing to compute: give --preset, --matrix1 or --curve");

  out << std::setprecision(17);
  bool ok = true;
  std::optional<double> mu0 = o.mu0;
  if (!cases.empty()) {
    ComparisonGeometry geo;
    geo.tau = o.tau;
    geo.sigma = o.sigma;
    geo.n_quad = o.nquad;
    geo.grid = Grid2D::centered(o.grid_step, o.grid_n);
    ConcentrationReport rep = comparison_report(cases, geo);
    print_report_table(out, rep);
    if (!o.output.empty()) {
      std::ofstream os(o.output);
      if (!os) throw std::runtime_error("cannot open '" + o.output + "'");
      write_report_csv(os, rep);
      out << "wrote " << o.output << '\n';
    }
    out << "min bound margin: " << rep.min_margin << '\n';
    for (const ComparisonRow& r : rep.rows)
      if (!r.ordering_ok) {
        out << "ordering violated in " << r.params.label << '\n';
        ok = false;
      }
    if (rep.min_margin < o.min_margin) {
      out << "bound margin " << rep.min_margin << " below " << o.min_margin << '\n';
      ok = false;
    }
    if (!mu0) mu0 = rep.mu0;
  }
  if (o.curve) {
    if (!mu0) {
      const ProlateBasis b = solve_pswf_1d(o.tau, o.sigma, o.nquad, 1);
      mu0 = b.mu(0) * b.mu(0);
    }
    if (o.curve_points < 2) throw UsageError("--curve-points must be at least 2");
    std::vector<double> alphas;
    for (int k = 0; k < o.curve_points; ++k)
      alphas.push_back(*mu0 + (1 - *mu0) * double(k) / double(o.curve_points - 1));
    const std::vector<RatioPair> curve = extremal_curve(*mu0, alphas);
    if (o.curve_output.empty()) write_curve_csv(out, curve);
    else {
      std::ofstream os(o.curve_output);
      if (!os) throw std::runtime_error("cannot open '" + o.curve_output + "'");
      write_curve_csv(os, curve);
      out << "wrote " << o.curve_output << '\n';
    }
    for (std::size_t k = 1; k < curve.size(); ++k)
      if (!(curve[k].beta < curve[k - 1].beta)) {
        out << "extremal curve not decreasing at alpha = " << curve[k].alpha << '\n';
        ok = false;
      }
  }
  if (!ok) throw AssertionFailed("concentration assertions failed");
  return kOk;
}

// Quick invariant suite on small grids.
int cmd_verify(std::ostream& out) {
  out << std::setprecision(6);
  bool all = true;
  auto report = [&](const std::string& name, double value, double limit) {
    const bool pass = value < limit;
    all = all && pass;
    out << (pass ? "PASS " : "FAIL ") << name << ": " << value << " (limit " << limit << ")\n";
  };
  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<double> unit(-1, 1);
  auto bumps = [&](const Grid2D& g, double spread) {
    std::vector<std::array<double, 7>> p(4);
    for (auto& b : p) b = {spread * unit(rng), spread * unit(rng), 0.8 + 0.2 * unit(rng), unit(rng), unit(rng), unit(rng), unit(rng)};
    return QSignald::sample(g, [&](double x, double y) {
      Quaterniond q;
      for (const auto& b : p) {
        const double e = std::exp(-((x - b[0]) * (x - b[0]) + (y - b[1]) * (y - b[1])) / (b[2] * b[2]));
        q = q + Quaterniond(b[3], b[4], b[5], b[6]) * e;
      }
      return q;
    });
  };

  const Grid2D g64 = Grid2D::centered(16.0 / 63, 64);
  double parseval = 0;
  for (int t = 0; t < 3; ++t) {
    const double b = 0.75 + 0.5 * (unit(rng) + 1), a = 0.5 * unit(rng), d = 0.5 * unit(rng);
    const ParamMatrix A(a, b, (a * d - 1) / b, d);
    const QSignald f = bumps(g64, 1.5);
    parseval = std::max(parseval, std::abs(energy(qlct_forward_fast(f, A, A)) - energy(f)) / energy(f));
  }
  report("parseval", parseval, 1e-6);

  const Grid2D g16 = Grid2D::centered(0.5, 16);
  const ParamMatrix chirped(0.3, 1, -1, 0);
  const QSignald f16 = bumps(g16, 1.0);
  report("fast vs direct",
         max_rel_deviation(qlct_forward_fast(f16, chirped, chirped),
                           qlct_forward_direct(f16, chirped, chirped, induced_freq_grid(g16, chirped, chirped))),
         1e-8);

  const double X = -g16.x_min;
  const QSignald gk = QSignald::sample(g16, [X](double x, double y) {
    const double wx = 1 - x * x / (X * X), wy = 1 - y * y / (X * X);
    return Quaterniond(wx * wx * wy * wy * (1 + 0.3 * y));
  });
  const ConvolutionReport conv = verify_convolution_theorem(f16, gk);
  report("convolution", conv.residual, 1e-8);

  const ProlateBasis basis = solve_pswf_1d(2, 2, 64, 6);
  double mono = -std::numeric_limits<double>::infinity();
  for (Eigen::Index n = 1; n < basis.modes(); ++n) mono = std::max(mono, basis.mu(n) - basis.mu(n - 1));
  report("prolate ordering (max successive increase)", mono, 0);
  report("prolate drift", basis.drift, 1e-8);
  report("restricted orthogonality",
         (restricted_gram(basis) - Eigen::MatrixXd(basis.mu.asDiagonal())).cwiseAbs().maxCoeff(), 1e-6);

  const Grid2D g96 = Grid2D::centered(2.0 / 15, 96);
  const QSignald psi0 = build_qpswf(basis, 0, g96);
  report("lowpass n=0", lowpass_residual(psi0, basis, 0), 1e-4);
  const double mu0 = basis.mu(0) * basis.mu(0);
  report("alpha(psi0) - mu0", std::abs(alpha_ratio(psi0, Box(2)) - mu0), 1e-4);

  out << (all ? "all invariants hold\n" : "invariant failures\n");
  if (!all) throw VerifyFailed("invariant suite failed");
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quaternion linear canonical transforms and prolate concentration tools", "qsp"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--config", "JSON file of option values; command-line flags take precedence");

  TransformOptions t;
  auto* tr = app.add_subcommand("transform", "Forward or inverse two-sided transform of a signal file");
  tr->add_option("--input,-i", t.input, "Signal CSV (with JSON sidecar)")->required();
  tr->add_option("--output,-o", t.output, "Output signal CSV")->required();
  tr->add_option("--matrix1", t.matrix1, "Left parameters a,b,c,d")->capture_default_str();
  tr->add_option("--matrix2", t.matrix2, "Right parameters a,b,c,d")->capture_default_str();
  tr->add_option("--method", t.method, "direct or fast")
      ->check(CLI::IsMember({"direct", "fast"}))
      ->capture_default_str();
  tr->add_flag("--inverse", t.inverse, "Apply the inverse transform");
  tr->add_flag("--verify", t.verify, "Cross-check the direct and fast paths");
  tr->add_option("--verify-tol", t.verify_tol, "Maximum relative deviation accepted by --verify")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  ProlateOptions p;
  auto* pr = app.add_subcommand("prolate", "Solve the sinc-kernel eigenproblem and export the basis");
  pr->add_option("--tau", p.tau, "Time half-width")->check(CLI::PositiveNumber)->capture_default_str();
  pr->add_option("--sigma", p.sigma, "Band half-width")->check(CLI::PositiveNumber)->capture_default_str();
  pr->add_option("--nmax", p.nmax, "Number of modes (0 keeps the first only)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  pr->add_option("--nquad", p.nquad, "Gauss-Legendre nodes")->check(CLI::PositiveNumber)->capture_default_str();
  pr->add_flag("--refine", p.refine, "Report the eigenvalue drift against twice the nodes");
  pr->add_option("--drift-tol", p.drift_tol, "Largest accepted eigenvalue drift")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  pr->add_option("--output,-o", p.output, "Basis CSV (with JSON sidecar)");

  ConcentrateOptions c;
  auto* co = app.add_subcommand("concentrate", "Energy-ratio comparison report and extremal curve");
  co->add_option("--preset", c.preset, "fig1, fig2, fig2-caption, fig3, fig4 or fig-all");
  co->add_option("--matrix1", c.matrix1, "Custom case, left parameters a,b,c,d");
  co->add_option("--matrix2", c.matrix2, "Custom case, right parameters (defaults to --matrix1)");
  co->add_option("--scenario", c.scenario, "Custom case scenario: bandlimited or time-limited")->capture_default_str();
  co->add_flag("--curve", c.curve, "Emit extremal-curve samples");
  co->add_option("--mu0", c.mu0, "Largest 2D eigenvalue for --curve (solved when absent)")
      ->check(CLI::Range(0.0, 1.0));
  co->add_option("--curve-points", c.curve_points, "Samples on the extremal curve")->capture_default_str();
  co->add_option("--tau", c.tau, "Spatial box half-width")->check(CLI::PositiveNumber)->capture_default_str();
  co->add_option("--sigma", c.sigma, "Frequency box half-width")->check(CLI::PositiveNumber)->capture_default_str();
  co->add_option("--grid-step", c.grid_step, "Spatial grid spacing")->check(CLI::PositiveNumber)->capture_default_str();
  co->add_option("--grid-n", c.grid_n, "Spatial nodes per axis")->check(CLI::PositiveNumber)->capture_default_str();
  co->add_option("--nquad", c.nquad, "Gauss-Legendre nodes for the eigensolve")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  co->add_option("--min-margin", c.min_margin, "Smallest accepted bound margin")->capture_default_str();
  co->add_option("--output,-o", c.output, "Report CSV");
  co->add_option("--curve-output", c.curve_output, "Extremal-curve CSV (stdout when absent)");

  app.add_subcommand("verify", "Run the invariant suite on small grids");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
    if (tr->parsed()) return cmd_transform(t, out);
    if (pr->parsed()) return cmd_prolate(p, out);
    if (co->parsed()) return cmd_concentrate(c, out);
    return cmd_verify(out);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidMatrix& e) {
    err << "invalid matrix: " << e.what() << '\n';
    return kInvalidMatrix;
  } catch (const VerifyFailed& e) {
    err << "verification failed: " << e.what() << '\n';
    return kVerifyFailed;
  } catch (const NotConverged& e) {
    err << "not converged: " << e.what() << '\n';
    return kNotConverged;
  } catch (const AssertionFailed& e) {
    err << "assertion failed: " << e.what() << '\n';
    return kAssertionFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace qsp::cli
