#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "clplan/engine.hpp"

namespace {

void write_or_print(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw clplan::IoError("cannot open '" + out_path + "' for writing");
  f << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clplan - C+L-band multi-period optical network planner"};
  app.require_subcommand(1);

  // plan
  auto* plan = app.add_subcommand("plan", "Run planning flows and write report CSVs");
  std::string config_path;
  plan->add_option("--config", config_path, "run configuration JSON")->required();
  std::optional<std::string> opt_flow;
  std::optional<int> opt_periods, opt_realizations, opt_jobs;
  std::optional<std::uint64_t> opt_seed;
  std::optional<double> opt_oh;
  std::optional<std::string> opt_out;
  bool opt_snapshots = false;
  plan->add_option("--flow", opt_flow, "proactive|incremental|incremental_max|all");
  plan->add_option("--periods", opt_periods, "planning periods");
  plan->add_option("--realizations", opt_realizations, "traffic growth realizations");
  plan->add_option("--seed", opt_seed, "random seed");
  plan->add_option("--oh", opt_oh, "planning overhead for the proactive initial stage");
  plan->add_option("--out", opt_out, "output directory");
  plan->add_option("--jobs", opt_jobs, "worker threads (default: available parallelism)");
  plan->add_flag("--snapshots", opt_snapshots, "export per-period state snapshots (realization 0)");

  // gen-demands
  auto* gen = app.add_subcommand("gen-demands", "Generate a demand matrix from node weights");
  std::string gen_topology, gen_weights, gen_out;
  double gen_scale = 0.0;
  std::uint64_t gen_seed = 0;
  gen->add_option("--topology", gen_topology, "SNDlib topology file")->required();
  gen->add_option("--weights", gen_weights, "node weight CSV")->required();
  gen->add_option("--scale", gen_scale, "total traffic scale, Gbit/s")->required();
  gen->add_option("--seed", gen_seed, "accepted for interface stability; generator is deterministic");
  gen->add_option("--out", gen_out, "output CSV path (default: stdout)");

  // dump-topology
  auto* dumpt = app.add_subcommand("dump-topology", "Print the canonical topology listing");
  std::string dt_topology, dt_out;
  dumpt->add_option("--topology", dt_topology, "SNDlib topology file")->required();
  dumpt->add_option("--out", dt_out, "output path (default: stdout)");

  // dump-catalog
  auto* dumpc = app.add_subcommand("dump-catalog", "Print the preselected transceiver catalog");
  std::string dc_config, dc_out;
  dumpc->add_option("--config", dc_config, "run configuration JSON for catalog parameters");
  dumpc->add_option("--out", dc_out, "output CSV path (default: stdout)");

  try {
    app.parse(argc, argv);

    if (*plan) {
      clplan::RunConfig cfg = clplan::load_run_config(config_path);
      if (opt_flow) cfg.flow = *opt_flow;
      if (opt_periods) cfg.periods = *opt_periods;
      if (opt_realizations) cfg.realizations = *opt_realizations;
      if (opt_seed) cfg.seed = *opt_seed;
      if (opt_oh) cfg.oh = *opt_oh;
      if (opt_out) cfg.out_dir = *opt_out;
      if (opt_jobs) cfg.jobs = *opt_jobs;
      if (opt_snapshots) cfg.export_snapshots = true;
      cfg.validate();
      const auto result = clplan::run_experiment(cfg);
      for (const auto& line : result.flow_summaries) std::cout << line << "\n";
      std::cout << result.files.size() << " files written to " << cfg.out_dir << "\n";
    } else if (*gen) {
      const auto topo = clplan::parse_topology(clplan::read_text_file(gen_topology));
      const auto weights =
          clplan::read_node_weights(clplan::read_text_file(gen_weights), topo);
      const auto demands = clplan::generate_demands(topo, weights, gen_scale);
      write_or_print(gen_out, clplan::write_demand_matrix(demands));
    } else if (*dumpt) {
      const auto topo = clplan::parse_topology(clplan::read_text_file(dt_topology));
      write_or_print(dt_out, clplan::dump_topology(topo));
    } else if (*dumpc) {
      clplan::CatalogParams params;
      if (!dc_config.empty()) params = clplan::load_run_config(dc_config).xcvr;
      write_or_print(dc_out, clplan::dump_catalog_csv(
                                 clplan::preselect(clplan::generate_catalog(params))));
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const clplan::OccupancyError& e) {
    std::cerr << "occupancy error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
