#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "clplan/errors.hpp"
#include "clplan/planner.hpp"
#include "clplan/qot.hpp"
#include "clplan/topology.hpp"
#include "clplan/xcvr.hpp"

namespace clplan {

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct RunConfig {
  std::string topology_path;
  std::string demand_matrix_path;  // either this ...
  std::string weights_path;        // ... or generator weights + scale
  double generator_scale = 0.0;
  std::string flow = "all";  // proactive | incremental | incremental_max | all
  int periods = 10;
  int realizations = 30;
  std::uint64_t seed = 42;
  double oh = 0.25;
  GrowthModel growth;
  bool reserve_inactive_spectrum = true;
  std::string out_dir = "results";
  int jobs = 0;  // 0 = hardware concurrency
  bool export_snapshots = false;
  SpanParams span;
  QotParams qot;
  CatalogParams xcvr;

  void validate() const {
    if (realizations < 1) throw ValidationError("realizations must be >= 1");
    if (periods < 1) throw ValidationError("periods must be >= 1");
    if (oh < 0.0) throw ValidationError("oh must be >= 0");
    if (topology_path.empty()) throw ValidationError("topology path is required");
    if (demand_matrix_path.empty() && weights_path.empty()) {
      throw ValidationError("either demands.matrix or demands.generator must be given");
    }
    if (flow != "all" && flow != "proactive" && flow != "incremental" &&
        flow != "incremental_max") {
      throw ValidationError("unknown flow '" + flow + "'");
    }
  }
};

namespace detail {

template <typename T>
void maybe(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

inline void maybe_band_pair(const nlohmann::json& j, const char* key,
                            std::array<double, 2>& out) {
  if (!j.contains(key)) return;
  const auto& v = j.at(key);
  if (v.contains("c")) out[0] = v.at("c").get<double>();
  if (v.contains("l")) out[1] = v.at("l").get<double>();
}

}  // namespace detail

inline RunConfig parse_run_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  RunConfig c;
  detail::maybe(j, "topology", c.topology_path);
  if (j.contains("demands")) {
    const auto& d = j.at("demands");
    detail::maybe(d, "matrix", c.demand_matrix_path);
    if (d.contains("generator")) {
      const auto& g = d.at("generator");
      detail::maybe(g, "weights", c.weights_path);
      detail::maybe(g, "scale", c.generator_scale);
    }
  }
  detail::maybe(j, "flow", c.flow);
  detail::maybe(j, "periods", c.periods);
  detail::maybe(j, "realizations", c.realizations);
  detail::maybe(j, "seed", c.seed);
  detail::maybe(j, "oh", c.oh);
  if (j.contains("growth")) {
    detail::maybe(j.at("growth"), "mean", c.growth.mean);
    detail::maybe(j.at("growth"), "std", c.growth.std_dev);
  }
  detail::maybe(j, "reserve_inactive_spectrum", c.reserve_inactive_spectrum);
  detail::maybe(j, "out", c.out_dir);
  detail::maybe(j, "jobs", c.jobs);
  detail::maybe(j, "export_snapshots", c.export_snapshots);
  if (j.contains("netgraph")) {
    detail::maybe(j.at("netgraph"), "span_km", c.span.span_km);
  }
  if (j.contains("qot")) {
    const auto& q = j.at("qot");
    detail::maybe_band_pair(q, "attenuation_db_per_km", c.qot.attenuation_db_per_km);
    detail::maybe_band_pair(q, "noise_figure_db", c.qot.noise_figure_db);
    detail::maybe_band_pair(q, "launch_offset_dbm", c.qot.launch_offset_dbm);
    detail::maybe_band_pair(q, "band_center_thz", c.qot.band_center_thz);
    detail::maybe(q, "launch_tilt_db_per_thz", c.qot.launch_tilt_db_per_thz);
    detail::maybe(q, "aging_margin_db", c.qot.aging_margin_db);
    detail::maybe(q, "isrs_coeff", c.qot.isrs_coeff);
    detail::maybe(q, "osnr_tx_db", c.qot.osnr_tx_db);
    detail::maybe(q, "mws_penalty_db", c.qot.mws_penalty_db);
    detail::maybe(q, "dispersion_ps2_per_km", c.qot.abs_dispersion_ps2_per_km);
    detail::maybe(q, "gamma_per_w_km", c.qot.gamma_per_w_km);
    detail::maybe(q, "eol_fill_channel_ghz", c.qot.eol_fill_channel_ghz);
  }
  if (j.contains("xcvr")) {
    const auto& x = j.at("xcvr");
    detail::maybe(x, "roll_off", c.xcvr.roll_off);
    detail::maybe(x, "entropy_min", c.xcvr.entropy_min);
    detail::maybe(x, "entropy_max", c.xcvr.entropy_max);
    detail::maybe(x, "entropy_step", c.xcvr.entropy_step);
    detail::maybe(x, "fec_overhead_bits", c.xcvr.fec_overhead_bits);
    detail::maybe(x, "snr_gap_db", c.xcvr.snr_gap_db);
    detail::maybe(x, "rate_granularity_gbps", c.xcvr.rate_granularity_gbps);
  }
  // Keep the derived coupling: span physics mirror the QoT configuration.
  c.span.attenuation_db_per_km = c.qot.attenuation_db_per_km;
  c.span.noise_figure_db = c.qot.noise_figure_db;
  c.xcvr.ref_bandwidth_hz = c.qot.ref_bandwidth_hz;
  return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  try {
    return parse_run_config(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace clplan
