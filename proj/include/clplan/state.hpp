#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "clplan/paths.hpp"
#include "clplan/spectrum.hpp"
#include "clplan/topology.hpp"
#include "clplan/xcvr.hpp"

namespace clplan {

struct Demand {
  int id = -1;
  std::string src;
  std::string dst;
  double art_gbps = 0.0;          // current-period aggregate requested traffic
  double initial_art_gbps = 0.0;  // period-1 value, basis for growth and estimates
  std::vector<int> lightpaths;    // in placement order
  bool underprovisioned = false;
  double shortfall_gbps = 0.0;

  // Routing context, filled once per run.
  double sp_length_km = 0.0;
  std::vector<Path> k_paths;
};

struct Lightpath {
  int id = -1;
  int demand_id = -1;
  std::vector<int> link_ids;
  XcvrConfig config;
  SpectrumAssignment assignment;
  bool active = true;
  int mws_group = -1;  // -1 when driven by its own laser
  int placement_period = 0;
};

// A 4-line fixed-FSR comb. All member lightpaths share demand, path, band and
// configuration; the four spectral blocks are contiguous and always held in
// the grid, whether or not the fourth line carries traffic yet.
struct MwsGroup {
  int id = -1;
  int demand_id = -1;
  std::vector<int> link_ids;
  XcvrConfig config;
  Band band = Band::c;
  int block_start_slot = 0;          // start of the 4*width block
  std::vector<int> member_lps;       // 3 or 4 used lines
  bool has_spare_block = false;      // true while the 4th block is unused
  int spare_start_slot = 0;
};

// Full network state evolved across periods; the unit of determinism. One
// planning run mutates one PlanState; independent realizations own their own.
struct PlanState {
  const Topology* topo = nullptr;
  SpectrumGrid grid;
  std::vector<Demand> demands;
  std::vector<Lightpath> lightpaths;
  std::vector<MwsGroup> groups;
  int period = 0;

  // EOL noise cache: (ase_w, nli_w) keyed by candidate placement. Valid for a
  // whole run because EOL noise depends only on path, position and the fixed
  // launch profile.
  std::unordered_map<std::uint64_t, std::pair<double, double>> eol_noise_cache;

  explicit PlanState(const Topology& t) : topo(&t), grid(t.link_count()) {}

  double active_rate(const Demand& d) const {
    double sum = 0.0;
    for (int lp : d.lightpaths) {
      if (lightpaths[static_cast<std::size_t>(lp)].active) {
        sum += lightpaths[static_cast<std::size_t>(lp)].config.net_rate_gbps;
      }
    }
    return sum;
  }

  int add_lightpath(Lightpath lp) {
    lp.id = static_cast<int>(lightpaths.size());
    demands[static_cast<std::size_t>(lp.demand_id)].lightpaths.push_back(lp.id);
    lightpaths.push_back(std::move(lp));
    return lightpaths.back().id;
  }

  // Active carriers sharing a link, as QoT interferers.
  std::vector<int> active_lps_on_link(int link) const {
    std::vector<int> out;
    for (const auto& lp : lightpaths) {
      if (!lp.active) continue;
      for (int lid : lp.link_ids) {
        if (lid == link) {
          out.push_back(lp.id);
          break;
        }
      }
    }
    return out;
  }
};

}  // namespace clplan
