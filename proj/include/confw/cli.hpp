#pragma once

// Command-line front end: argument parsing (CLI11) and dispatch. `run`
// writes one JSON object or one CSV table and returns the process exit code.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "confw/conformal_maps.hpp"
#include "confw/disc_field.hpp"
#include "confw/embedding_lab.hpp"
#include "confw/error.hpp"
#include "confw/poisson_transfer.hpp"
#include "confw/quadrature.hpp"
#include "confw/verify.hpp"
#include "confw/weight_engine.hpp"

namespace confw::cli {

using json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerdict = 1;
inline constexpr int kExitUsage = 2;

enum class Command { Weight, Brennan, InverseBrennan, Kpq, Exponents, Constant, Solve, Verify };
enum class OutputFormat { Json, Csv };

inline std::string_view command_name(Command c) {
  switch (c) {
    case Command::Weight: return "weight";
    case Command::Brennan: return "brennan";
    case Command::InverseBrennan: return "inverse-brennan";
    case Command::Kpq: return "kpq";
    case Command::Exponents: return "exponents";
    case Command::Constant: return "constant";
    case Command::Solve: return "solve";
    case Command::Verify: return "verify";
  }
  return "?";
}

struct CliConfig {
  Command command = Command::Verify;
  DomainFamily domain = DomainFamily::DiscIdentity;
  OutputFormat output = OutputFormat::Json;
  std::optional<std::string> out_path;
  std::uint64_t seed = kDefaultSeed;

  // weight
  Complex at{0.0, 0.0};
  Complex moebius_a{0.0, 0.0};
  double moebius_rotation = 0.0;
  // quadrature
  double s = 2.0;
  double alpha = 0.0;
  double p = 2.0;
  double q = 1.0;
  int levels = kDefaultMaxLevels;
  double tol = kDefaultTol;
  // exponents
  double alpha0 = kDefaultAlpha0;
  // constant
  double r = 2.0;
  // grids
  int n_r = 128;
  int n_theta = 128;
  // solve
  std::string rhs = "const:-4";
};

/// Every field the command reads, fully resolved.
inline json config_json(const CliConfig& c) {
  json j;
  j["command"] = command_name(c.command);
  auto cpx = [](Complex z) { return json::array({z.real(), z.imag()}); };
  switch (c.command) {
    case Command::Weight:
      j["domain"] = family_name(c.domain);
      j["at"] = cpx(c.at);
      j["moebius_a"] = cpx(c.moebius_a);
      j["moebius_rotation"] = c.moebius_rotation;
      break;
    case Command::Brennan:
      j["domain"] = family_name(c.domain);
      j["s"] = c.s;
      break;
    case Command::InverseBrennan:
      j["domain"] = family_name(c.domain);
      j["alpha"] = c.alpha;
      break;
    case Command::Kpq:
      j["domain"] = family_name(c.domain);
      j["p"] = c.p;
      j["q"] = c.q;
      break;
    case Command::Exponents:
      j["p"] = c.p;
      j["alpha0"] = c.alpha0;
      break;
    case Command::Constant:
      j["r"] = c.r;
      j["nr"] = c.n_r;
      j["ntheta"] = c.n_theta;
      j["seed"] = c.seed;
      break;
    case Command::Solve:
      j["domain"] = family_name(c.domain);
      j["f"] = Rhs::parse(c.rhs).describe();
      j["nr"] = c.n_r;
      j["ntheta"] = c.n_theta;
      break;
    case Command::Verify: j["seed"] = c.seed; break;
  }
  if (c.command == Command::Brennan || c.command == Command::InverseBrennan || c.command == Command::Kpq) {
    j["levels"] = c.levels;
    j["tol"] = c.tol;
  }
  j["output"] = c.output == OutputFormat::Json ? "json" : "csv";
  if (c.out_path) j["out"] = *c.out_path;
  return j;
}

namespace detail {

inline Complex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("complex value", "expected 're,im', got '" + text + "'");
  try {
    std::size_t u1 = 0, u2 = 0;
    const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
    const double re = std::stod(a, &u1), im = std::stod(b, &u2);
    if (u1 != a.size() || u2 != b.size()) throw std::invalid_argument("trailing");
    return {re, im};
  } catch (const std::exception&) {
    throw CLI::ValidationError("complex value", "expected 're,im', got '" + text + "'");
  }
}

inline std::string format17(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

// Flat (key, value) row of a JSON object, for CSV output of scalar commands.
inline void flatten(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  for (const auto& [k, v] : j.items()) {
    const std::string key = prefix.empty() ? k : prefix + "." + k;
    if (v.is_object())
      flatten(v, key, out);
    else if (v.is_number_float())
      out.emplace_back(key, format17(v.get<double>()));
    else if (v.is_string())
      out.emplace_back(key, v.get<std::string>());
    else
      out.emplace_back(key, v.dump());
  }
}

inline json quad_json(const QuadResult& q) {
  json levels = json::array();
  for (double v : q.level_values) levels.push_back(v);
  return {{"value", q.value},
          {"error_estimate", q.error_estimate},
          {"verdict", to_string(q.verdict)},
          {"levels_used", q.levels_used},
          {"increment_ratio", q.increment_ratio},
          {"extrapolated", q.extrapolated},
          {"level_values", levels}};
}

}  // namespace detail

struct HelpRequested {
  std::string text;
};

/// Parses argv into a config. Throws CLI::ParseError (HelpRequested for --help) and confw::Error for bad names.
inline CliConfig parse(int argc, const char* const* argv) {
  CLI::App app{"Conformal weights toolkit", "cw"};
  app.require_subcommand(1);
  CliConfig c;
  std::string domain = "disc", at = "0,0", a = "0,0", output, out;
  std::optional<std::uint64_t> seed;

  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--output", output, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", out, "write to this file instead of stdout");
  };
  auto add_domain = [&](CLI::App* sub) {
    sub->add_option("--domain", domain, "disc|exterior|halfplane|strip|cardioid|slitplane")->required();
  };
  auto add_quad = [&](CLI::App* sub) {
    sub->add_option("--levels", c.levels, "refinement levels")->check(CLI::Range(1, 12));
    sub->add_option("--tol", c.tol, "convergence tolerance")->check(CLI::PositiveNumber);
  };

  auto* weight = app.add_subcommand("weight", "h = |phi'|^2 at a point");
  add_domain(weight);
  weight->add_option("--at", at, "point re,im")->required();
  weight->add_option("--moebius-a", a, "zero of a post-composed disc automorphism, re,im");
  weight->add_option("--moebius-rotation", c.moebius_rotation, "rotation angle of that automorphism");
  add_output(weight);

  auto* brennan = app.add_subcommand("brennan", "int_Omega |phi'|^s");
  add_domain(brennan);
  brennan->add_option("--s", c.s, "exponent")->required();
  add_quad(brennan);
  add_output(brennan);

  auto* inv = app.add_subcommand("inverse-brennan", "int_D |psi'|^alpha");
  add_domain(inv);
  inv->add_option("--alpha", c.alpha, "exponent")->required();
  add_quad(inv);
  add_output(inv);

  auto* kpq = app.add_subcommand("kpq", "dilatation constant K_{p,q}");
  add_domain(kpq);
  kpq->add_option("--p", c.p)->required();
  kpq->add_option("--q", c.q)->required();
  add_quad(kpq);
  add_output(kpq);

  auto* expo = app.add_subcommand("exponents", "admissible q and r for given p and alpha0");
  expo->add_option("--p", c.p)->required();
  expo->add_option("--alpha0", c.alpha0, "inverse Brennan threshold, in [-2, 0)");
  add_output(expo);

  auto* cons = app.add_subcommand("constant", "Poincare constant of the disc");
  cons->add_option("--r", c.r, "Lebesgue exponent of the left-hand side");
  cons->add_option("--nr", c.n_r)->check(CLI::PositiveNumber);
  cons->add_option("--ntheta", c.n_theta)->check(CLI::PositiveNumber);
  cons->add_option("--seed", seed, "bump family seed");
  add_output(cons);

  auto* sol = app.add_subcommand("solve", "Dirichlet problem Lap u = f h on Omega");
  add_domain(sol);
  sol->add_option("--f", c.rhs, "const:<c> or quartic");
  sol->add_option("--nr", c.n_r)->check(CLI::PositiveNumber);
  sol->add_option("--ntheta", c.n_theta)->check(CLI::PositiveNumber);
  sol->add_option("--output", output, "csv (default) or json")->check(CLI::IsMember({"json", "csv"}));
  sol->add_option("--out", out, "write to this file instead of stdout");

  auto* ver = app.add_subcommand("verify", "run the invariant suite");
  ver->add_option("--seed", seed, "bump family seed");
  add_output(ver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    throw HelpRequested{sub->help()};
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  const Command cmds[] = {Command::Weight, Command::Brennan, Command::InverseBrennan, Command::Kpq,
                          Command::Exponents, Command::Constant, Command::Solve, Command::Verify};
  for (Command k : cmds)
    if (command_name(k) == name) c.command = k;

  if (output.empty()) output = c.command == Command::Solve ? "csv" : "json";
  c.output = output == "csv" ? OutputFormat::Csv : OutputFormat::Json;
  if (!out.empty()) c.out_path = out;
  c.domain = parse_family(domain);
  c.at = detail::parse_complex(at);
  c.moebius_a = detail::parse_complex(a);
  if (c.command == Command::Solve) (void)Rhs::parse(c.rhs);

  if (seed) {
    c.seed = *seed;
  } else if (const char* env = std::getenv("CW_SEED")) {
    try {
      std::size_t used = 0;
      c.seed = std::stoull(env, &used, 0);
      if (env[used] != '\0') throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, std::string("CW_SEED is not an integer: ") + env);
    }
  }
  return c;
}

namespace detail {

struct Outcome {
  json body;
  int code = kExitOk;
};

inline Outcome run_weight(const CliConfig& c) {
  std::optional<MoebiusAutomorphism> eta;
  if (c.moebius_a != Complex{} || c.moebius_rotation != 0.0) eta = MoebiusAutomorphism(c.moebius_a, c.moebius_rotation);
  const WeightField w{ConformalMap(c.domain, MapDirection::ToDisc, eta)};
  return {{{"h", w(c.at)}}};
}

inline Outcome run_quadrature(const QuadResult& q) {
  return {quad_json(q), q.verdict == Verdict::Converged ? kExitOk : kExitVerdict};
}

inline Outcome run_exponents(const CliConfig& c) {
  try {
    const auto b = exponent_bounds(c.p, c.alpha0);
    return {{{"feasible", true},
             {"p_min", b.p_min},
             {"q_max", b.q_max},
             {"q_ceiling", b.q_ceiling},
             {"r_max", b.r_max},
             {"r_ceiling", b.r_ceiling},
             {"conjectural", b.conjectural}}};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ExponentOutOfRange) throw;
    json body = {{"feasible", false}, {"reason", e.what()}};
    if (c.alpha0 >= -2.0 && c.alpha0 < 0.0) body["p_min"] = p_min(c.alpha0);
    return {body, kExitVerdict};
  }
}

inline Outcome run_constant(const CliConfig& c) {
  const auto est = poincare_constant_disc(c.r, PolarGrid{c.n_r, c.n_theta}, 64, c.seed);
  json body = {{"K", est.value},
               {"method", to_string(est.method)},
               {"lower_bound_only", est.lower_bound_only},
               {"iterations", est.iterations}};
  if (est.method == ConstantMethod::EigenRayleigh) {
    body["eigenvalue"] = est.eigenvalue;
    body["tolerance"] = est.tolerance;
    body["residual"] = est.residual;
  }
  return {body};
}

inline Outcome run_verify(const CliConfig& c) {
  json report = verify::to_json(verify::run_all(c.seed));
  const bool ok = report["all_passed"].get<bool>();
  return {report, ok ? kExitOk : kExitVerdict};
}

}  // namespace detail

/// Solve output as CSV: every grid node pushed forward to Omega, "x,y,u".
inline void write_solution_csv(std::ostream& os, const DiscSolution& sol) {
  const PolarGrid& g = sol.grid();
  const ConformalMap psi = sol.map.inverse();
  os << "x,y,u\n";
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_theta; ++j) {
      const Complex w = g.node(i, j);
      if (!psi.accepts(w)) continue;
      const Complex z = psi.apply(w);
      os << detail::format17(z.real()) << ',' << detail::format17(z.imag()) << ','
         << detail::format17(sol.v.at(i, j)) << '\n';
    }
}

/// Executes the command and writes its output to `os` (or the --out file).
inline int run(const CliConfig& c, std::ostream& os, std::ostream& err = std::cerr) {
  std::ofstream file;
  std::ostream* out = &os;
  if (c.out_path) {
    file.open(*c.out_path, std::ios::binary);
    if (!file) {
      err << "cw: cannot open " << *c.out_path << " for writing\n";
      return kExitUsage;
    }
    out = &file;
  }
  try {
    const json config = config_json(c);
    if (c.command == Command::Solve) {
      const DirichletProblem prob{ConformalMap(c.domain), Rhs::parse(c.rhs)};
      const DiscSolution sol = solve(prob, PolarGrid{c.n_r, c.n_theta});
      std::optional<double> err_exact;
      if (prob.rhs.exact(Complex{})) err_exact = max_error_vs_exact(sol, prob.rhs);
      if (c.output == OutputFormat::Csv) {
        *out << "# config: " << config.dump() << '\n';
        if (err_exact) *out << "# max_error_vs_exact: " << detail::format17(*err_exact) << '\n';
        write_solution_csv(*out, sol);
      } else {
        json body = {{"config", config}};
        if (err_exact) body["max_error_vs_exact"] = *err_exact;
        json x = json::array(), y = json::array(), u = json::array();
        const ConformalMap psi = sol.map.inverse();
        for (int i = 0; i < sol.grid().n_r; ++i)
          for (int j = 0; j < sol.grid().n_theta; ++j) {
            const Complex w = sol.grid().node(i, j);
            if (!psi.accepts(w)) continue;
            const Complex z = psi.apply(w);
            x.push_back(z.real());
            y.push_back(z.imag());
            u.push_back(sol.v.at(i, j));
          }
        body["x"] = x;
        body["y"] = y;
        body["u"] = u;
        *out << body.dump() << '\n';
      }
      return kExitOk;
    }

    detail::Outcome o;
    switch (c.command) {
      case Command::Weight: o = detail::run_weight(c); break;
      case Command::Brennan:
        o = detail::run_quadrature(brennan_direct(ConformalMap(c.domain), c.s, {}, c.levels, c.tol));
        break;
      case Command::InverseBrennan:
        o = detail::run_quadrature(inverse_brennan(ConformalMap(c.domain), c.alpha, {}, c.levels, c.tol));
        break;
      case Command::Kpq: {
        o = detail::run_quadrature(kpq_norm(ConformalMap(c.domain), c.p, c.q, {}, c.levels, c.tol));
        o.body["K"] = o.body["value"];
        o.body["exponent_s"] = kpq_exponent(c.p, c.q);
        break;
      }
      case Command::Exponents: o = detail::run_exponents(c); break;
      case Command::Constant: o = detail::run_constant(c); break;
      case Command::Verify: o = detail::run_verify(c); break;
      case Command::Solve: break;
    }
    if (c.output == OutputFormat::Json) {
      json body = {{"config", config}};
      for (const auto& [k, v] : o.body.items()) body[k] = v;
      *out << body.dump(c.command == Command::Verify ? 2 : -1) << '\n';
    } else {
      *out << "# config: " << config.dump() << '\n';
      if (c.command == Command::Verify) {
        *out << "name,passed\n";
        for (const auto& chk : o.body["checks"]) *out << chk["name"].get<std::string>() << ',' << chk["passed"] << '\n';
      } else {
        std::vector<std::pair<std::string, std::string>> row;
        detail::flatten(o.body, "", row);
        for (std::size_t k = 0; k < row.size(); ++k) *out << (k ? "," : "") << row[k].first;
        *out << '\n';
        for (std::size_t k = 0; k < row.size(); ++k) {
          std::string v = row[k].second;
          if (v.find(',') != std::string::npos) v = '"' + v + '"';
          *out << (k ? "," : "") << v;
        }
        *out << '\n';
      }
    }
    return o.code;
  } catch (const Error& e) {
    err << "cw: " << to_string(e.code()) << ": " << e.what() << '\n';
    const bool numerical = e.code() == ErrorCode::IterationDivergence || e.code() == ErrorCode::KpqDivergent;
    return numerical ? kExitVerdict : kExitUsage;
  }
}

/// Full entry point: parse, run, map parse failures to exit 2.
inline int main(int argc, const char* const* argv, std::ostream& os = std::cout, std::ostream& err = std::cerr) {
  CliConfig c;
  try {
    c = parse(argc, argv);
  } catch (const HelpRequested& h) {
    os << h.text;
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return kExitOk;
    err << "cw: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "cw: " << to_string(e.code()) << ": " << e.what() << '\n';
    return kExitUsage;
  }
  return run(c, os, err);
}

}  // namespace confw::cli
