#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "clplan/rcsa.hpp"
#include "clplan/report.hpp"
#include "clplan/rng.hpp"

namespace clplan {

enum class Flow { proactive, incremental, incremental_max };

inline const char* flow_name(Flow f) {
  switch (f) {
    case Flow::proactive: return "proactive";
    case Flow::incremental: return "incremental";
    case Flow::incremental_max: return "incremental_max";
  }
  return "?";
}

struct GrowthModel {
  double mean = 0.25;
  double std_dev = 0.10;
  std::uint64_t seed = 42;
};

// Per-demand multiplicative growth, drawn independently per demand and period
// from the counter-based stream. Negative draws are not clamped.
inline void grow_traffic(PlanState& state, int period, const GrowthModel& model,
                         int realization) {
  if (period < 2) throw ValidationError("grow_traffic: growth starts at period 2");
  for (auto& d : state.demands) {
    const double z = normal_draw(model.seed, static_cast<std::uint64_t>(realization),
                                 static_cast<std::uint64_t>(period),
                                 static_cast<std::uint64_t>(d.id));
    const double g = model.mean + model.std_dev * z;
    d.art_gbps *= 1.0 + g;
  }
}

// Expected traffic in the final period plus planning overhead.
inline double estimate_final_traffic(double initial_art_gbps, int periods, double mean_growth,
                                     double oh) {
  if (periods < 1) throw ValidationError("estimate_final_traffic: periods must be >= 1");
  if (oh < 0.0) throw ValidationError("estimate_final_traffic: overhead must be >= 0");
  return initial_art_gbps * std::pow(1.0 + mean_growth, periods - 1) * (1.0 + oh);
}

// Walks the demand's lightpaths in placement order and marks everything after
// the requested rate is reached as inactive. Inactive lightpaths keep their
// spectrum reservation unless the context says otherwise; comb lines always
// keep theirs (the fixed-FSR block stays rigid).
inline void deactivate_overprovisioned(PlanState& state, const RcsaContext& ctx, int demand_id,
                                       double requested_gbps) {
  auto& d = state.demands[static_cast<std::size_t>(demand_id)];
  double accumulated = 0.0;
  for (int lp_id : d.lightpaths) {
    auto& lp = state.lightpaths[static_cast<std::size_t>(lp_id)];
    if (accumulated < requested_gbps - 1e-9) {
      accumulated += lp.config.net_rate_gbps;
      continue;
    }
    if (lp.active) {
      lp.active = false;
      if (!ctx.reserve_inactive_spectrum && lp.mws_group < 0) {
        state.grid.release(lp.link_ids, lp.assignment);
      }
    }
  }
}

// Activates inactive lightpaths in descending net-rate order (ties broken by
// placement order) until the demand is met or none remain. Reserved
// lightpaths just flip their flag; non-reserving ones must re-claim their
// recorded slots and abort on conflict.
inline std::vector<int> activate_inactive(PlanState& state, const RcsaContext& ctx,
                                          int demand_id) {
  auto& d = state.demands[static_cast<std::size_t>(demand_id)];
  std::vector<int> inactive;
  for (int lp_id : d.lightpaths) {
    if (!state.lightpaths[static_cast<std::size_t>(lp_id)].active) inactive.push_back(lp_id);
  }
  std::sort(inactive.begin(), inactive.end(), [&](int x, int y) {
    const auto& lx = state.lightpaths[static_cast<std::size_t>(x)];
    const auto& ly = state.lightpaths[static_cast<std::size_t>(y)];
    if (lx.config.net_rate_gbps != ly.config.net_rate_gbps) {
      return lx.config.net_rate_gbps > ly.config.net_rate_gbps;
    }
    return x < y;
  });
  std::vector<int> activated;
  for (int lp_id : inactive) {
    if (state.active_rate(d) + 1e-9 >= d.art_gbps) break;
    auto& lp = state.lightpaths[static_cast<std::size_t>(lp_id)];
    if (!ctx.reserve_inactive_spectrum && lp.mws_group < 0) {
      state.grid.allocate(lp.link_ids, lp.assignment);  // throws if the slot was taken
    }
    lp.active = true;
    activated.push_back(lp_id);
  }
  return activated;
}

struct FlowResult {
  std::vector<PeriodMetrics> metrics;
  std::vector<Snapshot> snapshots;
  PlanState state;  // final-period state, for post-hoc checks
};

// Runs one flow over `periods` periods for one traffic realization.
// demands must carry period-1 ART in both art_gbps and initial_art_gbps.
inline FlowResult run_flow(const Topology& topo, const std::vector<Demand>& demands, Flow flow,
                           int periods, double oh, const GrowthModel& growth,
                           const RcsaContext& ctx, int realization,
                           bool collect_snapshots = true) {
  if (periods < 1) throw ValidationError("run_flow: periods must be >= 1");
  PlanState state(topo);
  state.demands = demands;
  init_routing(state, ctx);
  const std::vector<int> order = order_demands(state);
  const SelectionMode per_period_mode =
      flow == Flow::incremental_max ? SelectionMode::highest : SelectionMode::just_enough;

  if (flow == Flow::proactive) {
    // Initial planning stage at the estimated final-period traffic.
    for (auto& d : state.demands) {
      d.art_gbps = estimate_final_traffic(d.initial_art_gbps, periods, growth.mean, oh);
    }
    for (int id : order) place_demand(state, ctx, id, SelectionMode::just_enough, 0);
    for (auto& d : state.demands) d.art_gbps = d.initial_art_gbps;
    for (const auto& d : state.demands) {
      deactivate_overprovisioned(state, ctx, d.id, d.initial_art_gbps);
    }
  }

  FlowResult result{.metrics = {}, .snapshots = {}, .state = std::move(state)};
  PlanState& st = result.state;

  for (int t = 1; t <= periods; ++t) {
    st.period = t;
    if (t >= 2) grow_traffic(st, t, growth, realization);
    for (int id : order) {
      auto& d = st.demands[static_cast<std::size_t>(id)];
      if (flow == Flow::proactive && st.active_rate(d) + 1e-9 < d.art_gbps) {
        activate_inactive(st, ctx, id);
      }
      if (st.active_rate(d) + 1e-9 < d.art_gbps) {
        place_demand(st, ctx, id, per_period_mode, t);
      } else {
        d.underprovisioned = false;
        d.shortfall_gbps = 0.0;
      }
    }
    Snapshot snap = make_snapshot(st, flow_name(flow), t);
    result.metrics.push_back(compute_metrics(snap));
    if (collect_snapshots) result.snapshots.push_back(std::move(snap));
  }
  return result;
}

}  // namespace clplan
