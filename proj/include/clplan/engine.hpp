#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "clplan/config.hpp"
#include "clplan/demands.hpp"
#include "clplan/planner.hpp"
#include "clplan/report.hpp"
#include "clplan/sndlib.hpp"

namespace clplan {

// Called once per realization after all workers joined, in realization order.
using RealizationInspector = std::function<void(Flow, int, const FlowResult&)>;

// Runs every realization of one flow on a worker pool. Results are joined by
// realization index, so scheduling never changes the outcome.
inline std::vector<FlowResult> run_flow_batch(const Topology& topo,
                                              const std::vector<Demand>& demands, Flow flow,
                                              const RunConfig& cfg, const RcsaContext& ctx,
                                              bool collect_snapshots_r0 = false) {
  const int n = cfg.realizations;
  int jobs = cfg.jobs > 0 ? cfg.jobs : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(1, std::min(jobs, n));

  GrowthModel growth = cfg.growth;
  growth.seed = cfg.seed;

  std::vector<std::optional<FlowResult>> results(static_cast<std::size_t>(n));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
  std::atomic<int> next{0};
  auto worker = [&] {
    while (true) {
      const int r = next.fetch_add(1);
      if (r >= n) break;
      try {
        const bool snaps = collect_snapshots_r0 && r == 0;
        results[static_cast<std::size_t>(r)] =
            run_flow(topo, demands, flow, cfg.periods, cfg.oh, growth, ctx, r, snaps);
      } catch (...) {
        errors[static_cast<std::size_t>(r)] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<FlowResult> out;
  out.reserve(static_cast<std::size_t>(n));
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

struct ExperimentOutput {
  std::vector<std::pair<std::string, Aggregate>> aggregates;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> flow_summaries;  // one line per flow
};

inline std::vector<Flow> selected_flows(const std::string& flow) {
  if (flow == "proactive") return {Flow::proactive};
  if (flow == "incremental") return {Flow::incremental};
  if (flow == "incremental_max") return {Flow::incremental_max};
  return {Flow::proactive, Flow::incremental, Flow::incremental_max};
}

inline std::vector<Demand> load_demands(const RunConfig& cfg, const Topology& topo) {
  if (!cfg.demand_matrix_path.empty()) {
    return read_demand_matrix(read_text_file(cfg.demand_matrix_path), topo);
  }
  const auto weights = read_node_weights(read_text_file(cfg.weights_path), topo);
  return generate_demands(topo, weights, cfg.generator_scale);
}

inline RcsaContext make_context(const RunConfig& cfg) {
  RcsaContext ctx;
  ctx.catalog = preselect(generate_catalog(cfg.xcvr));
  ctx.qot = cfg.qot;
  ctx.xcvr = cfg.xcvr;
  ctx.reserve_inactive_spectrum = cfg.reserve_inactive_spectrum;
  return ctx;
}

// Full experiment: selected flows x realizations, aggregation, file emission.
inline ExperimentOutput run_experiment(const RunConfig& cfg,
                                       const RealizationInspector& inspect = {}) {
  cfg.validate();
  const Topology topo = parse_topology(read_text_file(cfg.topology_path), cfg.span);
  const std::vector<Demand> demands = load_demands(cfg, topo);
  const RcsaContext ctx = make_context(cfg);

  ExperimentOutput out;
  for (Flow flow : selected_flows(cfg.flow)) {
    auto results = run_flow_batch(topo, demands, flow, cfg, ctx, cfg.export_snapshots);
    std::vector<std::vector<PeriodMetrics>> metrics;
    metrics.reserve(results.size());
    for (const auto& r : results) metrics.push_back(r.metrics);
    Aggregate agg = aggregate(metrics);

    if (cfg.export_snapshots && !results.empty()) {
      const auto snap_dir = std::filesystem::path(cfg.out_dir) / "snapshots";
      std::filesystem::create_directories(snap_dir);
      for (const auto& snap : results.front().snapshots) {
        const auto path =
            snap_dir / (std::string(flow_name(flow)) + "_r0_p" + std::to_string(snap.period) +
                        ".jsonl");
        std::ofstream f(path, std::ios::binary);
        f << snapshot_to_jsonl(snap);
        out.files.push_back(path);
      }
    }
    if (inspect) {
      for (std::size_t r = 0; r < results.size(); ++r) {
        inspect(flow, static_cast<int>(r), results[r]);
      }
    }

    auto files = emit(cfg.out_dir, flow_name(flow), agg);
    out.files.insert(out.files.end(), files.begin(), files.end());

    const std::size_t last = static_cast<std::size_t>(agg.periods) - 1;
    std::ostringstream line;
    line << flow_name(flow) << ": final_lps=" << format_sig(agg.lps_mean[last])
         << " lasers_saved=" << format_sig(agg.lasers_mean[last])
         << " l_band_onset=" << format_sig(agg.onset_mean);
    out.flow_summaries.push_back(line.str());
    out.aggregates.emplace_back(flow_name(flow), std::move(agg));
  }
  out.files.push_back(emit_summary(cfg.out_dir, out.aggregates));
  return out;
}

}  // namespace clplan
