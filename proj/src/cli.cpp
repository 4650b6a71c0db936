#include "qmc/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "qmc/classical.hpp"
#include "qmc/entropy.hpp"
#include "qmc/errors.hpp"
#include "qmc/families.hpp"
#include "qmc/io.hpp"
#include "qmc/optimizer.hpp"
#include "qmc/verify.hpp"

namespace qmc {

std::string format_number(double v) {
  if (std::abs(v) < 5e-13) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", v);
  return buf;
}

std::string format_csv_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

struct OptFlags {
  std::size_t restarts = OptConfig{}.restarts;
  std::size_t max_iters = OptConfig{}.max_iters;
  double tol = OptConfig{}.tol;
  std::uint64_t seed = OptConfig{}.seed;
  std::string shape = "auto";

  void attach(CLI::App* cmd, bool with_shape) {
    cmd->add_option("--restarts", restarts, "Random restarts per shape")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iters", max_iters, "Iteration budget per restart");
    cmd->add_option("--tol", tol, "Stop when the simplex spread drops below this")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "Random seed");
    if (with_shape)
      cmd->add_option("--shape", shape, "Summand shapes searched")
          ->check(CLI::IsMember({"auto", "trivial", "enumerate", "full"}));
  }

  OptConfig config() const {
    OptConfig cfg;
    cfg.restarts = restarts;
    cfg.max_iters = max_iters;
    cfg.tol = tol;
    cfg.seed = seed;
    if (shape == "trivial") cfg.shape_mode = ShapeMode::trivial;
    if (shape == "enumerate") cfg.shape_mode = ShapeMode::enumerate;
    if (shape == "full") cfg.shape_mode = ShapeMode::full;
    return cfg;
  }
};

void write_or_print(const std::string& path, const json& j, std::ostream& out) {
  if (path.empty())
    out << j.dump(2) << '\n';
  else
    write_json_file(path, j);
}

// Bipartite input for ep: a two-factor file, or a tripartite file whose B is traced out.
ComplexMatrix load_bipartite(const json& j, std::size_t& d_a, std::size_t& d_c) {
  const json* dims = j.is_object() && j.contains("dims") ? &j["dims"] : nullptr;
  if (dims && dims->is_array() && dims->size() == 2) {
    json padded = j;
    padded["dims"] = json::array({(*dims)[0], 1, (*dims)[1]});
    const LoadedState s = state_from_json(padded);
    d_a = s.state.dims().a;
    d_c = s.state.dims().c;
    return s.state.matrix();
  }
  const LoadedState s = state_from_json(j);
  d_a = s.state.dims().a;
  d_c = s.state.dims().c;
  const std::size_t keep[] = {0, 2};
  const std::vector<std::size_t> all = s.state.dims().list();
  return partial_trace(s.state.matrix(), all, keep);
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }), item.end());
    if (item.empty()) continue;
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (res.ec != std::errc{} || res.ptr != item.data() + item.size())
      throw ParseError("grid", "cannot read '" + item + "' as a number");
    grid.push_back(v);
  }
  if (grid.empty()) throw ParseError("grid", "empty grid");
  return grid;
}

FamilyPoint make_family(const std::string& family, double param) {
  if (family == "psi-x") return psi_x(param);
  if (family == "zeta-d") {
    if (param < 2.0 || param != std::floor(param)) throw ParseError("d", "expected an integer >= 2");
    return zeta_d(static_cast<std::size_t>(param));
  }
  throw ParseError("family", "unknown family '" + family + "' (psi-x or zeta-d)");
}

// Upper estimate for a family point: shape search where d_B allows, trivial otherwise.
OptResult family_delta(const FamilyPoint& p, OptConfig cfg) {
  if (cfg.shape_mode == ShapeMode::automatic && p.state.dims().b > cfg.max_input_dim)
    cfg.shape_mode = ShapeMode::trivial;
  return minimize_delta(p.state, cfg);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conditional mutual information and distance to quantum Markov states", "qmc"};
  app.require_subcommand(1);

  std::string state_path, out_path, csv_path, family, grid_text, suite = "all", params_path;
  double x = 0.0;
  std::size_t d = 0;
  bool project = false, pure_route = false;
  std::uint64_t verify_seed = 1;
  OptFlags delta_flags, ep_flags, scan_flags;

  CLI::App* cmi = app.add_subcommand("cmi", "Print I(A:C|B) of a state file");
  cmi->add_option("state", state_path, "State file")->required();

  CLI::App* delta = app.add_subcommand("delta", "Bracket the distance to Markov states");
  delta->add_option("state", state_path, "State file")->required();
  delta->add_option("--out", out_path, "Write the optimizer result here");
  delta->add_flag("--pure", pure_route, "Use the measurement + purification route (pure inputs)");
  delta_flags.attach(delta, true);

  CLI::App* classical = app.add_subcommand("classical", "Classical I(X:Z|Y) and closest Markov chain");
  classical->add_option("dist", state_path, "Joint distribution file")->required();
  classical->add_flag("--project", project, "Write the closest Markov chain");
  classical->add_option("--out", out_path, "Where --project writes (default stdout)");

  CLI::App* ep = app.add_subcommand("ep", "Upper estimate of the entanglement of purification");
  ep->add_option("state", state_path, "Bipartite (or tripartite, B traced out) state file")->required();
  ep->add_option("--out", out_path, "Write the optimizer result here");
  ep_flags.attach(ep, false);

  CLI::App* fam = app.add_subcommand("family", "Generate a member of an example family");
  fam->add_option("family", family, "psi-x, zeta-d or cq")->required();
  fam->add_option("--x", x, "Parameter of psi-x");
  fam->add_option("--d", d, "Parameter of zeta-d");
  fam->add_option("--params", params_path, "Family parameter file (required for cq)");
  fam->add_option("--out", out_path, "Write the state file here (default stdout)");

  CLI::App* scan = app.add_subcommand("scan", "Closed forms and upper estimates over a grid");
  scan->add_option("family", family, "psi-x or zeta-d")->required();
  scan->add_option("--grid", grid_text, "Comma-separated parameter values")->required();
  scan->add_option("--csv", csv_path, "Write the CSV here (default stdout)");
  scan_flags.attach(scan, true);

  CLI::App* verify = app.add_subcommand("verify", "Run the invariant suites");
  verify->add_option("--suite", suite, "entropy, classical, markov, optimizer or all")
      ->check(CLI::IsMember({"entropy", "classical", "markov", "optimizer", "all"}));
  verify->add_option("--seed", verify_seed, "Random seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*cmi) {
      const LoadedState s = state_from_json(read_json_file(state_path));
      out << format_number(conditional_mutual_information(s.state)) << '\n';
      return kExitOk;
    }
    if (*delta) {
      const LoadedState s = state_from_json(read_json_file(state_path));
      const OptConfig cfg = delta_flags.config();
      const OptResult r = pure_route ? pure_delta(s.state, cfg) : minimize_delta(s.state, cfg);
      if (!out_path.empty()) write_json_file(out_path, opt_result_to_json(r));
      out << "lower " << format_number(r.lower_bound) << '\n' << "upper " << format_number(r.value) << '\n';
      if (!r.converged) {
        err << "warning: no restart converged within the iteration budget\n";
        return kExitNotConverged;
      }
      return kExitOk;
    }
    if (*classical) {
      const ClassicalJoint p = classical_from_json(read_json_file(state_path));
      const ClassicalJoint q = closest_markov(p);
      const EntropyReport rel = classical_relative_entropy(p, q);
      if (project) write_or_print(out_path, classical_to_json(q), out);
      out << "cmi " << format_number(classical_cmi(p)) << '\n'
          << "D " << (rel.finite ? format_number(rel.value) : std::string("inf")) << '\n';
      return kExitOk;
    }
    if (*ep) {
      std::size_t d_a = 0, d_c = 0;
      const ComplexMatrix rho_ac = load_bipartite(read_json_file(state_path), d_a, d_c);
      const OptResult r = minimize_ep(rho_ac, d_a, d_c, ep_flags.config());
      if (!out_path.empty()) write_json_file(out_path, opt_result_to_json(r));
      out << format_number(r.value) << '\n';
      if (!r.converged) {
        err << "warning: no restart converged within the iteration budget\n";
        return kExitNotConverged;
      }
      return kExitOk;
    }
    if (*fam) {
      FamilyPoint p = [&] {
        if (!params_path.empty()) return family_from_json(read_json_file(params_path));
        if (family == "psi-x") {
          if (fam->count("--x") == 0) throw ParseError("x", "psi-x needs --x");
          return psi_x(x);
        }
        if (family == "zeta-d") {
          if (fam->count("--d") == 0) throw ParseError("d", "zeta-d needs --d");
          return zeta_d(d);
        }
        if (family == "cq") throw ParseError("params", "cq needs --params with probs and states");
        throw ParseError("family", "unknown family '" + family + "'");
      }();
      write_or_print(out_path, family_to_json(p), out);
      if (!out_path.empty())
        for (const auto& [name, value] : p.closed_forms) out << name << ' ' << format_number(value) << '\n';
      return kExitOk;
    }
    if (*scan) {
      const std::vector<double> grid = parse_grid(grid_text);
      std::ostringstream csv;
      csv << "param,S_A,S_B,cmi,delta_lower,delta_upper,delta_hat,ratio\n";
      bool converged = true;
      for (double param : grid) {
        const FamilyPoint p = make_family(family, param);
        const OptResult r = family_delta(p, scan_flags.config());
        converged = converged && r.converged;
        const auto& cf = p.closed_forms;
        csv << format_csv_number(param) << ',' << format_csv_number(cf.at("S_A")) << ','
            << format_csv_number(cf.at("S_B")) << ',' << format_csv_number(cf.at("cmi")) << ','
            << format_csv_number(cf.at("delta_lower")) << ',' << format_csv_number(cf.at("delta_upper")) << ','
            << format_csv_number(r.value) << ',' << format_csv_number(r.value / cf.at("cmi")) << '\n';
      }
      if (csv_path.empty()) {
        out << csv.str();
      } else {
        std::ofstream f(csv_path);
        if (!f) throw ParseError("csv", "cannot write " + csv_path);
        f << csv.str();
      }
      if (!converged) {
        err << "warning: some grid points did not converge\n";
        return kExitNotConverged;
      }
      return kExitOk;
    }
    if (*verify) {
      const VerifyReport report = run_verify(suite, verify_seed);
      report.print(out);
      return report.ok() ? kExitOk : 1;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace qmc
