// fockgen command-line front end: state generation, statistics, N-scaling
// sweeps, Husimi grids, engineering recipes and loss-fidelity sweeps, all as
// file-based workflows. Errors leave as structured JSON on stderr so scripts
// can react to the code instead of parsing prose.
#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <ctime>
#include <iostream>
#include <string>
#include <vector>

#include "fockgen/engineer.hpp"
#include "fockgen/io.hpp"
#include "fockgen/lossy.hpp"
#include "fockgen/random_state.hpp"
#include "fockgen/stats.hpp"

namespace {

using fock::Json;

std::string iso_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

Json base_meta(const std::string& command, Json config) {
  return Json{{"tool", fock::kToolName},
              {"version", fock::kToolVersion},
              {"prng", fock::kPrngId},
              {"command", command},
              {"config", std::move(config)},
              {"generated_at", iso_timestamp()}};
}

Json spec_config(const fock::RandomStateSpec& spec) {
  return Json{{"n", spec.n_top},
              {"theta", spec.theta},
              {"seed", spec.seed},
              {"distribution", fock::to_string(spec.law)}};
}

struct GenArgs {
  std::int64_t n = -1;
  double theta = 0.0;
  std::uint64_t seed = 1;
  std::string spec_path;
  std::string out;
};

void run_gen(const GenArgs& args) {
  fock::RandomStateSpec spec;
  if (!args.spec_path.empty()) {
    spec = fock::spec_from_json(fock::read_json_file(args.spec_path));
  } else {
    if (args.n < 0)
      throw fock::Error(fock::ErrorCode::ConfigInvalid,
                        "gen needs --n or --spec");
    spec.n_top = args.n;
    spec.theta = args.theta;
    spec.seed = args.seed;
  }
  const fock::State state = fock::generate_random_state(spec);
  const Eigen::VectorXd moduli = fock::draw_moduli(spec);
  Json meta = base_meta("gen", spec_config(spec));
  meta["spec"] = spec_config(spec);
  meta["leading_modulus"] = moduli[spec.n_top];
  fock::atomic_write(args.out, fock::state_json(state, meta));
}

struct StatsArgs {
  std::string in;
  std::string out;
};

void run_stats(const StatsArgs& args) {
  const fock::State state =
      fock::state_from_json(fock::read_json_file(args.in));
  const fock::StatsReport report = fock::compute_report(state);
  const Json meta = base_meta("stats", Json{{"in", args.in}});
  const std::string doc = fock::report_json(report, meta);
  if (args.out.empty())
    std::cout << doc;
  else
    fock::atomic_write(args.out, doc);
}

struct SweepArgs {
  std::string n_list;
  double theta = 0.0;
  std::uint64_t seed = 1;
  int realizations = 30;
  std::string out;
};

void run_sweep(const SweepArgs& args) {
  const std::vector<int> n_values = fock::parse_n_list(args.n_list);
  fock::EnsembleSpec ensemble;
  ensemble.base.theta = args.theta;
  ensemble.base.seed = args.seed;
  ensemble.realizations = args.realizations;
  const auto rows = fock::scaling_sweep(n_values, ensemble);
  const Json meta = base_meta(
      "sweep", Json{{"n", args.n_list},
                    {"theta", args.theta},
                    {"seed", args.seed},
                    {"realizations", args.realizations}});
  fock::atomic_write(args.out, fock::sweep_csv(rows, meta));
}

struct HusimiArgs {
  std::string in;
  int resolution = 101;
  std::string window = "auto";
  std::string out;
};

void run_husimi(const HusimiArgs& args) {
  const fock::State state =
      fock::state_from_json(fock::read_json_file(args.in));
  const auto grid =
      fock::husimi(state, fock::parse_window(args.window), args.resolution);
  const Json meta = base_meta("husimi", Json{{"in", args.in},
                                             {"grid", args.resolution},
                                             {"window", args.window}});
  fock::atomic_write(args.out, fock::husimi_csv(grid, meta));
}

struct PlanArgs {
  std::string in;
  std::string t_grid = "0.5:0.99:0.001";
  double fixed_t = 0.0;
  bool has_fixed_t = false;
  std::int64_t dim = 0;
  std::string out;
  std::string table_out;
};

void run_plan(const PlanArgs& args) {
  const fock::State target =
      fock::state_from_json(fock::read_json_file(args.in));
  fock::PlanOptions options;
  options.grid = fock::parse_t_grid(args.t_grid);
  if (args.has_fixed_t) options.fixed_transmittance = args.fixed_t;
  if (args.dim > 0) options.workspace_dim = args.dim;
  const fock::Recipe recipe = fock::plan(target, options);

  Json config{{"in", args.in}, {"t_grid", args.t_grid}};
  if (args.has_fixed_t) config["fixed_t"] = args.fixed_t;
  if (args.dim > 0) config["dim"] = args.dim;
  const Json meta = base_meta("plan", config);

  const std::string table = fock::format_recipe_table(recipe);
  std::cout << table;
  fock::atomic_write(args.out, fock::recipe_json(recipe, meta));
  if (!args.table_out.empty()) fock::atomic_write(args.table_out, table);
}

struct FidelityArgs {
  std::string in;
  std::vector<double> etas;
  std::string out;
};

void run_fidelity(const FidelityArgs& args) {
  const fock::Recipe recipe =
      fock::recipe_from_json(fock::read_json_file(args.in));
  std::vector<double> etas = args.etas;
  if (etas.empty())
    for (int k = 0; k <= 10; ++k) etas.push_back(0.90 + 0.01 * k);

  const Eigen::Index dim = fock::auto_workspace_dim(recipe);
  const auto branches = fock::branch_states(recipe, dim);
  std::vector<std::pair<double, double>> rows;
  for (double eta : etas) {
    if (!fock::eta_within_model_validity(eta))
      std::cerr << "warning: eta = " << eta
                << " is below the trusted range (>= "
                << fock::kTrustedEtaMin
                << "); dropped terms are no longer negligible\n";
    rows.emplace_back(eta, fock::fidelity_from_branches(branches, eta));
  }
  const Json meta =
      base_meta("fidelity", Json{{"in", args.in}, {"eta", etas}});
  fock::atomic_write(args.out, fock::fidelity_csv(rows, meta));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Truncated Fock-state toolkit: generation, statistics, "
               "conditional-measurement engineering, loss fidelity"};
  app.set_version_flag("--version", fock::kToolVersion);
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand(
      "gen", "Generate a random-coefficient state and write it as JSON");
  gen_cmd->add_option("--n", gen.n, "Top Fock index N");
  gen_cmd->add_option("--theta", gen.theta, "Phase step theta (radians)");
  gen_cmd->add_option("--seed", gen.seed, "PRNG seed");
  gen_cmd->add_option("--spec", gen.spec_path,
                      "Spec JSON file (overrides the flags above)");
  gen_cmd->add_option("--out", gen.out, "Output state file")->required();

  StatsArgs stats;
  auto* stats_cmd =
      app.add_subcommand("stats", "Full statistics report for a state file");
  stats_cmd->add_option("--in", stats.in, "Input state file")->required();
  stats_cmd->add_option("--out", stats.out,
                        "Output report file (stdout when omitted)");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "Observables vs N over a seeded ensemble, written as CSV");
  sweep_cmd->add_option("--n", sweep.n_list, "N values, e.g. 2:200 or 5,10")
      ->required();
  sweep_cmd->add_option("--theta", sweep.theta, "Phase step theta");
  sweep_cmd->add_option("--seed", sweep.seed, "Base PRNG seed");
  sweep_cmd->add_option("--realizations", sweep.realizations,
                        "Realizations per N");
  sweep_cmd->add_option("--out", sweep.out, "Output CSV")->required();

  HusimiArgs husimi;
  auto* husimi_cmd =
      app.add_subcommand("husimi", "Husimi Q grid for a state file");
  husimi_cmd->add_option("--in", husimi.in, "Input state file")->required();
  husimi_cmd->add_option("--grid", husimi.resolution,
                         "Grid resolution per axis");
  husimi_cmd->add_option("--window", husimi.window,
                         "auto or re0:re1:im0:im1");
  husimi_cmd->add_option("--out", husimi.out, "Output CSV")->required();

  PlanArgs plan;
  auto* plan_cmd = app.add_subcommand(
      "plan", "Engineering recipe (roots, alphas, transmittance) for a state");
  plan_cmd->add_option("--in", plan.in, "Target state file")->required();
  plan_cmd->add_option("--t-grid", plan.t_grid, "Transmittance grid lo:hi:step");
  auto* fixed = plan_cmd->add_option("--fixed-t", plan.fixed_t,
                                     "Skip optimization, use this T");
  plan_cmd->add_option("--dim", plan.dim, "Workspace dim override");
  plan_cmd->add_option("--out", plan.out, "Output recipe JSON")->required();
  plan_cmd->add_option("--table", plan.table_out,
                       "Also write the text table here");

  FidelityArgs fidelity;
  auto* fidelity_cmd = app.add_subcommand(
      "fidelity", "Loss-model fidelity of a recipe over detector efficiencies");
  fidelity_cmd->add_option("--in", fidelity.in, "Recipe JSON")->required();
  fidelity_cmd->add_option("--eta", fidelity.etas,
                           "Detector efficiency (repeatable)");
  fidelity_cmd->add_option("--out", fidelity.out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
    plan.has_fixed_t = fixed->count() > 0;
    if (gen_cmd->parsed()) run_gen(gen);
    if (stats_cmd->parsed()) run_stats(stats);
    if (sweep_cmd->parsed()) run_sweep(sweep);
    if (husimi_cmd->parsed()) run_husimi(husimi);
    if (plan_cmd->parsed()) run_plan(plan);
    if (fidelity_cmd->parsed()) run_fidelity(fidelity);
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    std::cerr << Json{{"error",
                       {{"code", "ConfigInvalid"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return 1;
  } catch (const fock::Error& e) {
    std::cerr << Json{{"error",
                       {{"code", to_string(e.code())},
                        {"message", e.message()}}}}
                     .dump()
              << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error",
                       {{"code", "Internal"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return 3;
  }
}
