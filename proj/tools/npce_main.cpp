// Command-line front end: instance generation, solving, certification,
// oracle cross-checks and the rate/complexity experiment.
//
// Exit codes are a stable contract:
//   0  success (solve: converged; verify: all gaps within tolerance)
//   1  verify: some certificate gap exceeds the tolerance
//   2  bad flags or malformed files
//   3  generation failure (bad moduli, kappa shaping miss)
//   4  solve hit the iteration cap without converging
//   5  inadmissible step
//   6  pgp with auto step on a delta = 0 instance
//   7  oracle dimension cap exceeded

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "npce/instance_io.hpp"
#include "npce/npce.hpp"

namespace {

using npce::json;

bool verbose() {
  const char* env = std::getenv("NPCE_VERBOSE");
  return env != nullptr && env[0] != '\0' && env[0] != '0';
}

json bundle_to_json(const npce::ModulusBundle& mb) {
  return json{{"alpha", mb.alpha},   {"beta", mb.beta},   {"gamma", mb.gamma},
              {"delta", mb.delta},   {"L", mb.lipschitz}, {"kappa", mb.kappa}};
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << j.dump(2) << "\n";
  else
    npce::save_json(j, out_path);
}

struct GenerateOptions {
  int n = 1, m = 1;
  std::uint64_t seed = 0;
  double density = 0.5;
  double alpha = 1.0, beta = 1.0, gamma = 1.0;
  std::string plant = "interior";
  double boundary_fraction = 0.25;
  double spread = 3.0;
  std::string reference;
  std::string out;
};

int run_generate(const GenerateOptions& opt) {
  npce::Instance inst;
  if (!opt.reference.empty()) {
    if (opt.reference == "r1")
      inst = npce::reference::r1();
    else if (opt.reference == "r2")
      inst = npce::reference::r2();
    else if (opt.reference == "r3")
      inst = npce::reference::r3();
    else
      throw CLI::ValidationError("--reference must be r1, r2 or r3");
  } else {
    npce::GenSpec spec;
    spec.n = opt.n;
    spec.m = opt.m;
    spec.seed = opt.seed;
    spec.density = opt.density;
    spec.alpha = opt.alpha;
    spec.beta = opt.beta;
    spec.gamma = opt.gamma;
    spec.boundary_fraction = opt.boundary_fraction;
    spec.spread_ratio = opt.spread;
    if (opt.plant == "interior")
      spec.planting = npce::Planting::Interior;
    else if (opt.plant == "boundary")
      spec.planting = npce::Planting::Boundary;
    else if (opt.plant == "none")
      spec.planting = npce::Planting::None;
    else
      throw CLI::ValidationError("--plant must be interior, boundary or none");
    inst = npce::planted_instance(spec);
  }
  npce::save_instance(inst, opt.out);
  std::cout << bundle_to_json(npce::modulus_bundle(inst.eco, inst.ops)).dump(2) << "\n";
  return 0;
}

struct SolveOptions {
  std::string instance;
  std::string method = "pgp";
  std::string step = "auto";
  double tol = 1e-8;
  long max_iters = 200000;
  long log_every = 1;
  std::string log;
  std::string out;
};

int run_solve(const SolveOptions& opt) {
  const npce::Instance inst = npce::load_instance(opt.instance);
  npce::SolverConfig cfg;
  if (opt.method == "pgp")
    cfg.method = npce::Method::Pgp;
  else if (opt.method == "epg")
    cfg.method = npce::Method::Epg;
  else
    throw CLI::ValidationError("--method must be pgp or epg");
  if (opt.step != "auto") {
    char* end = nullptr;
    const double t = std::strtod(opt.step.c_str(), &end);
    if (end == opt.step.c_str() || *end != '\0')
      throw CLI::ValidationError("--step must be 'auto' or a number");
    cfg.step = t;
  }
  cfg.tol = opt.tol;
  cfg.max_iters = opt.max_iters;
  cfg.log_every = opt.log_every;
  if (verbose()) std::cerr << "solving " << opt.instance << " with " << opt.method << "\n";
  const npce::SolveResult res = npce::solve(inst.eco, inst.ops, cfg, inst.planted);
  if (!opt.log.empty()) npce::save_text(npce::run_log_csv(res), opt.log);
  emit(npce::result_to_json(res, inst.eco.n, inst.eco.m), opt.out);
  if (verbose())
    std::cerr << "iterations: " << res.iterations << ", converged: " << res.converged << "\n";
  return res.converged ? 0 : 4;
}

struct VerifyOptions {
  std::string instance;
  std::string point;
  double tol = 1e-8;
};

int run_verify(const VerifyOptions& opt) {
  const npce::Instance inst = npce::load_instance(opt.instance);
  const npce::Point p = npce::load_point(opt.point, inst.eco.n, inst.eco.m);
  const npce::ModulusBundle mb = npce::modulus_bundle(inst.eco, inst.ops);
  const npce::Certificate cert =
      npce::certify(inst.eco, inst.ops, p, npce::certificate_reference_step(mb));
  std::cout << npce::certificate_to_json(cert, inst.eco.n, inst.eco.m).dump(2) << "\n";
  const bool pass = cert.feasibility_violation <= opt.tol &&
                    cert.complementarity_gap <= opt.tol && cert.budget_gap <= opt.tol &&
                    cert.natural_residual <= opt.tol;
  return pass ? 0 : 1;
}

struct OracleOptions {
  std::string instance;
  double tol = npce::kOracleDefaultTol;
};

std::string flat_label(int index, int n) {
  if (index < n) return "x" + std::to_string(index + 1);
  if (index < 2 * n) return "lambda" + std::to_string(index - n + 1);
  return "v" + std::to_string(index - 2 * n + 1);
}

int run_oracle(const OracleOptions& opt) {
  const npce::Instance inst = npce::load_instance(opt.instance);
  const npce::OracleSolution sol = npce::enumerate_equilibria(inst.eco, inst.ops, opt.tol);
  json points = json::array();
  for (size_t i = 0; i < sol.points.size(); ++i) {
    json active = json::array();
    for (int idx : sol.active_sets[i]) active.push_back(flat_label(idx, inst.eco.n));
    points.push_back(json{{"point", npce::point_to_json(sol.points[i])},
                          {"active_set", active},
                          {"gaps",
                           {{"feasibility_violation", sol.residuals[i].feasibility_violation},
                            {"complementarity_gap", sol.residuals[i].complementarity_gap},
                            {"budget_gap", sol.residuals[i].budget_gap},
                            {"natural_residual", sol.residuals[i].natural_residual}}}});
  }
  std::cout << json{{"count", sol.points.size()}, {"equilibria", points}}.dump(2) << "\n";
  return 0;
}

struct RatesOptions {
  std::string kappas = "0.4,0.2,0.1";
  int n = 3, m = 2;
  std::uint64_t seed = 1;
  double tol = 1e-10;
  std::string out;
};

int run_rates(const RatesOptions& opt) {
  std::vector<double> kappas;
  std::stringstream ss(opt.kappas);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double k = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0' || !(k > 0.0 && k < 1.0))
      throw CLI::ValidationError("--kappas must be a comma list of values in (0,1)");
    kappas.push_back(k);
  }
  if (kappas.empty()) throw CLI::ValidationError("--kappas is empty");
  const auto rows = npce::run_rates(kappas, opt.n, opt.m, opt.seed, opt.tol);
  const std::string csv = npce::rates_csv(rows);
  if (opt.out.empty())
    std::cout << csv;
  else
    npce::save_text(csv, opt.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Production-consumption equilibrium solver"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* cmd_generate = app.add_subcommand("generate", "Generate a test instance");
  cmd_generate->add_option("--n", gen.n, "product count");
  cmd_generate->add_option("--m", gen.m, "factor count");
  cmd_generate->add_option("--seed", gen.seed, "generator seed");
  cmd_generate->add_option("--density", gen.density, "fill density in (0,1]");
  cmd_generate->add_option("--alpha", gen.alpha, "target modulus of p");
  cmd_generate->add_option("--beta", gen.beta, "target modulus of c");
  cmd_generate->add_option("--gamma", gen.gamma, "target modulus of r");
  cmd_generate->add_option("--plant", gen.plant, "interior|boundary|none");
  cmd_generate->add_option("--boundary-fraction", gen.boundary_fraction,
                           "share of components planted at zero");
  cmd_generate->add_option("--spread", gen.spread, "eigenvalue spread relative to the modulus");
  cmd_generate->add_option("--reference", gen.reference,
                           "emit a fixed reference instance (r1, r2 or r3) instead of sampling");
  cmd_generate->add_option("--out", gen.out, "output instance path")->required();

  SolveOptions sol;
  auto* cmd_solve = app.add_subcommand("solve", "Run PGP or EPG on an instance");
  cmd_solve->add_option("--instance", sol.instance, "instance path")->required();
  cmd_solve->add_option("--method", sol.method, "pgp|epg");
  cmd_solve->add_option("--step", sol.step, "auto or a positive step length");
  cmd_solve->add_option("--tol", sol.tol, "natural-residual stop threshold");
  cmd_solve->add_option("--max-iters", sol.max_iters, "iteration cap");
  cmd_solve->add_option("--log-every", sol.log_every, "history sampling stride");
  cmd_solve->add_option("--log", sol.log, "per-iteration CSV log path");
  cmd_solve->add_option("--out", sol.out, "result JSON path (stdout when omitted)");

  VerifyOptions ver;
  auto* cmd_verify = app.add_subcommand("verify", "Certify a point against an instance");
  cmd_verify->add_option("--instance", ver.instance, "instance path")->required();
  cmd_verify->add_option("--point", ver.point, "point JSON path")->required();
  cmd_verify->add_option("--tol", ver.tol, "pass/fail gap threshold");

  OracleOptions ora;
  auto* cmd_oracle = app.add_subcommand("oracle", "Enumerate all equilibria of a small instance");
  cmd_oracle->add_option("--instance", ora.instance, "instance path")->required();
  cmd_oracle->add_option("--tol", ora.tol, "oracle acceptance tolerance");

  RatesOptions rat;
  auto* cmd_rates = app.add_subcommand("rates", "Rate/complexity experiment over kappa targets");
  cmd_rates->add_option("--kappas", rat.kappas, "comma list of condition numbers in (0,1)");
  cmd_rates->add_option("--n", rat.n, "product count");
  cmd_rates->add_option("--m", rat.m, "factor count");
  cmd_rates->add_option("--seed", rat.seed, "base seed (incremented per kappa)");
  cmd_rates->add_option("--tol", rat.tol, "solve tolerance");
  cmd_rates->add_option("--out", rat.out, "CSV output path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cmd_generate->parsed()) return run_generate(gen);
    if (cmd_solve->parsed()) return run_solve(sol);
    if (cmd_verify->parsed()) return run_verify(ver);
    if (cmd_oracle->parsed()) return run_oracle(ora);
    if (cmd_rates->parsed()) return run_rates(rat);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const npce::BadModuli& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const npce::GenerationFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const npce::ZeroDelta& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 6;
  } catch (const npce::StepInadmissible& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const npce::NonpositiveStep& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const npce::TooLarge& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 7;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
