#pragma once

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "clplan/errors.hpp"
#include "clplan/format.hpp"
#include "clplan/state.hpp"

namespace clplan {

// A frozen view of one period's plan state: everything metrics need, nothing
// the planner still mutates.
struct Snapshot {
  std::string flow;
  int period = 0;
  struct DemandRec {
    int id = -1;
    std::string src;
    std::string dst;
    double art_gbps = 0.0;
  };
  std::vector<DemandRec> demands;
  std::vector<Lightpath> lightpaths;
  std::vector<MwsGroup> groups;
};

inline Snapshot make_snapshot(const PlanState& state, const std::string& flow, int period) {
  Snapshot s;
  s.flow = flow;
  s.period = period;
  for (const auto& d : state.demands) s.demands.push_back({d.id, d.src, d.dst, d.art_gbps});
  s.lightpaths = state.lightpaths;
  s.groups = state.groups;
  return s;
}

struct PeriodMetrics {
  int period = 0;
  double art_total_gbps = 0.0;
  double provisioned_gbps = 0.0;  // active lightpaths only
  double ratio = 0.0;             // provisioned / ART
  int active_lps = 0;
  int lasers_saved = 0;  // transmitter side: sum over combs of (active lines - 1)
  std::array<int, 10> bandwidth_hist{};
  bool l_band_in_use = false;
  int underprovisioned_demands = 0;
  double shortfall_total_gbps = 0.0;
};

inline PeriodMetrics compute_metrics(const Snapshot& snap) {
  PeriodMetrics m;
  m.period = snap.period;
  for (const auto& d : snap.demands) m.art_total_gbps += d.art_gbps;

  std::map<int, double> provisioned_by_demand;
  for (const auto& lp : snap.lightpaths) {
    if (!lp.active) continue;
    ++m.active_lps;
    m.provisioned_gbps += lp.config.net_rate_gbps;
    provisioned_by_demand[lp.demand_id] += lp.config.net_rate_gbps;
    m.bandwidth_hist[static_cast<std::size_t>(bandwidth_bin(lp.config.bandwidth_ghz))] += 1;
    if (lp.assignment.band == Band::l) m.l_band_in_use = true;
  }
  for (const auto& g : snap.groups) {
    int active_lines = 0;
    for (int lp : g.member_lps) {
      if (snap.lightpaths[static_cast<std::size_t>(lp)].active) ++active_lines;
    }
    m.lasers_saved += std::max(0, active_lines - 1);
  }
  for (const auto& d : snap.demands) {
    const double got = provisioned_by_demand.count(d.id) ? provisioned_by_demand[d.id] : 0.0;
    if (got + 1e-9 < d.art_gbps) {
      ++m.underprovisioned_demands;
      m.shortfall_total_gbps += d.art_gbps - got;
    }
  }
  m.ratio = m.art_total_gbps > 0.0 ? m.provisioned_gbps / m.art_total_gbps : 0.0;
  return m;
}

// Cross-realization aggregate: per-period sample mean and standard deviation
// for each metric, plus the L-band onset distribution.
struct Aggregate {
  int periods = 0;
  int realizations = 0;
  std::vector<double> art_mean, art_std;
  std::vector<double> provisioned_mean, provisioned_std;
  std::vector<double> ratio_mean;
  std::vector<double> lps_mean, lps_std;
  std::vector<double> lasers_mean, lasers_std;
  std::vector<std::array<double, 10>> hist_mean;
  std::vector<double> underprov_mean;
  std::vector<double> shortfall_mean;
  std::vector<int> onsets;  // per realization; periods + 1 when L never used
  double onset_mean = 0.0;
};

namespace detail {

inline std::pair<double, double> mean_std(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var = xs.size() > 1 ? var / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var)};
}

}  // namespace detail

inline Aggregate aggregate(const std::vector<std::vector<PeriodMetrics>>& realizations) {
  if (realizations.empty()) throw ValidationError("aggregate: no realizations");
  const std::size_t periods = realizations.front().size();
  for (const auto& r : realizations) {
    if (r.size() != periods) throw ValidationError("aggregate: mismatched period counts");
  }
  Aggregate a;
  a.periods = static_cast<int>(periods);
  a.realizations = static_cast<int>(realizations.size());

  auto collect = [&](auto getter, std::vector<double>& mean_out, std::vector<double>* std_out) {
    for (std::size_t t = 0; t < periods; ++t) {
      std::vector<double> xs;
      xs.reserve(realizations.size());
      for (const auto& r : realizations) xs.push_back(getter(r[t]));
      const auto [m, s] = detail::mean_std(xs);
      mean_out.push_back(m);
      if (std_out) std_out->push_back(s);
    }
  };
  collect([](const PeriodMetrics& m) { return m.art_total_gbps; }, a.art_mean, &a.art_std);
  collect([](const PeriodMetrics& m) { return m.provisioned_gbps; }, a.provisioned_mean,
          &a.provisioned_std);
  collect([](const PeriodMetrics& m) { return m.ratio; }, a.ratio_mean, nullptr);
  collect([](const PeriodMetrics& m) { return static_cast<double>(m.active_lps); }, a.lps_mean,
          &a.lps_std);
  collect([](const PeriodMetrics& m) { return static_cast<double>(m.lasers_saved); },
          a.lasers_mean, &a.lasers_std);
  collect([](const PeriodMetrics& m) { return static_cast<double>(m.underprovisioned_demands); },
          a.underprov_mean, nullptr);
  collect([](const PeriodMetrics& m) { return m.shortfall_total_gbps; }, a.shortfall_mean,
          nullptr);
  for (std::size_t t = 0; t < periods; ++t) {
    std::array<double, 10> h{};
    for (const auto& r : realizations) {
      for (std::size_t b = 0; b < 10; ++b) h[b] += static_cast<double>(r[t].bandwidth_hist[b]);
    }
    for (auto& v : h) v /= static_cast<double>(realizations.size());
    a.hist_mean.push_back(h);
  }
  for (const auto& r : realizations) {
    int onset = static_cast<int>(periods) + 1;
    for (std::size_t t = 0; t < periods; ++t) {
      if (r[t].l_band_in_use) {
        onset = r[t].period;
        break;
      }
    }
    a.onsets.push_back(onset);
  }
  double sum = 0.0;
  for (int o : a.onsets) sum += o;
  a.onset_mean = sum / static_cast<double>(a.onsets.size());
  return a;
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace detail

// Emits the four per-flow CSV panels. Numbers use 6 significant digits with a
// '.' decimal separator so outputs are byte-stable across platforms.
inline std::vector<std::filesystem::path> emit(const std::filesystem::path& out_dir,
                                               const std::string& flow, const Aggregate& a) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;

  {
    std::ostringstream csv;
    csv << "period,art_gbps_mean,art_gbps_std,provisioned_gbps_mean,provisioned_gbps_std,"
           "provisioned_over_mean_art,underprovisioned_demands_mean,shortfall_gbps_mean\n";
    for (int t = 0; t < a.periods; ++t) {
      const std::size_t i = static_cast<std::size_t>(t);
      const double scaled = a.art_mean[i] > 0.0 ? a.provisioned_mean[i] / a.art_mean[i] : 0.0;
      csv << (t + 1) << "," << format_sig(a.art_mean[i]) << "," << format_sig(a.art_std[i]) << ","
          << format_sig(a.provisioned_mean[i]) << "," << format_sig(a.provisioned_std[i]) << ","
          << format_sig(scaled) << "," << format_sig(a.underprov_mean[i]) << ","
          << format_sig(a.shortfall_mean[i]) << "\n";
    }
    written.push_back(out_dir / (flow + "_provisioned_traffic.csv"));
    detail::write_file(written.back(), csv.str());
  }
  {
    std::ostringstream csv;
    csv << "period,active_lps_mean,active_lps_std\n";
    for (int t = 0; t < a.periods; ++t) {
      const std::size_t i = static_cast<std::size_t>(t);
      csv << (t + 1) << "," << format_sig(a.lps_mean[i]) << "," << format_sig(a.lps_std[i])
          << "\n";
    }
    written.push_back(out_dir / (flow + "_lightpaths.csv"));
    detail::write_file(written.back(), csv.str());
  }
  {
    std::ostringstream csv;
    csv << "period,lasers_saved_mean,lasers_saved_std\n";
    for (int t = 0; t < a.periods; ++t) {
      const std::size_t i = static_cast<std::size_t>(t);
      csv << (t + 1) << "," << format_sig(a.lasers_mean[i]) << "," << format_sig(a.lasers_std[i])
          << "\n";
    }
    written.push_back(out_dir / (flow + "_lasers_saved.csv"));
    detail::write_file(written.back(), csv.str());
  }
  {
    std::ostringstream csv;
    csv << "period";
    for (int b = 0; b < 10; ++b) csv << ",bw_" << format_sig(bin_bandwidth_ghz(b));
    csv << "\n";
    for (int t = 0; t < a.periods; ++t) {
      csv << (t + 1);
      for (int b = 0; b < 10; ++b) {
        csv << "," << format_sig(a.hist_mean[static_cast<std::size_t>(t)][static_cast<std::size_t>(b)]);
      }
      csv << "\n";
    }
    written.push_back(out_dir / (flow + "_bandwidth_histogram.csv"));
    detail::write_file(written.back(), csv.str());
  }
  return written;
}

// Final-period cross-flow comparison, one plain-text summary per run.
inline std::filesystem::path emit_summary(
    const std::filesystem::path& out_dir,
    const std::vector<std::pair<std::string, Aggregate>>& flows) {
  std::filesystem::create_directories(out_dir);
  std::ostringstream out;
  out << "final-period comparison (mean over realizations)\n";
  for (const auto& [flow, a] : flows) {
    const std::size_t last = static_cast<std::size_t>(a.periods) - 1;
    out << flow << ": active_lps=" << format_sig(a.lps_mean[last])
        << " lasers_saved=" << format_sig(a.lasers_mean[last])
        << " provisioned_gbps=" << format_sig(a.provisioned_mean[last])
        << " art_gbps=" << format_sig(a.art_mean[last])
        << " underprovisioned=" << format_sig(a.underprov_mean[last])
        << " l_band_onset_mean=" << format_sig(a.onset_mean) << "\n";
  }
  auto find = [&](const std::string& name) -> const Aggregate* {
    for (const auto& [flow, a] : flows) {
      if (flow == name) return &a;
    }
    return nullptr;
  };
  const Aggregate* pro = find("proactive");
  const Aggregate* inc = find("incremental");
  const Aggregate* max = find("incremental_max");
  if (pro && inc && max) {
    const std::size_t last = static_cast<std::size_t>(pro->periods) - 1;
    out << "lp_ratio_incremental_vs_proactive="
        << format_sig(inc->lps_mean[last] / pro->lps_mean[last]) << "\n";
    out << "laser_ratio_proactive_vs_best_incremental="
        << format_sig(pro->lasers_mean[last] /
                      std::max(1.0, std::max(inc->lasers_mean[last], max->lasers_mean[last])))
        << "\n";
    out << "l_band_onset_means incremental_max=" << format_sig(max->onset_mean)
        << " proactive=" << format_sig(pro->onset_mean)
        << " incremental=" << format_sig(inc->onset_mean) << "\n";
  }
  const auto path = out_dir / "summary.txt";
  detail::write_file(path, out.str());
  return path;
}

// Line-delimited snapshot records; metrics recomputed from a reloaded file
// must reproduce the emitted CSVs byte for byte.
inline std::string snapshot_to_jsonl(const Snapshot& snap) {
  std::ostringstream out;
  nlohmann::json head{{"type", "period"}, {"flow", snap.flow}, {"period", snap.period}};
  out << head.dump() << "\n";
  for (const auto& d : snap.demands) {
    nlohmann::json j{{"type", "demand"}, {"id", d.id},       {"src", d.src},
                     {"dst", d.dst},     {"art", d.art_gbps}};
    out << j.dump() << "\n";
  }
  for (const auto& lp : snap.lightpaths) {
    nlohmann::json j{{"type", "lp"},
                     {"id", lp.id},
                     {"demand", lp.demand_id},
                     {"links", lp.link_ids},
                     {"band", band_name(lp.assignment.band)},
                     {"start", lp.assignment.start_slot},
                     {"width", lp.assignment.width_slots},
                     {"bandwidth_ghz", lp.config.bandwidth_ghz},
                     {"symbol_rate_gbd", lp.config.symbol_rate_gbd},
                     {"entropy", lp.config.entropy_bits},
                     {"rate_gbps", lp.config.net_rate_gbps},
                     {"req_snr_db", lp.config.req_snr_db},
                     {"active", lp.active},
                     {"group", lp.mws_group},
                     {"period", lp.placement_period}};
    out << j.dump() << "\n";
  }
  for (const auto& g : snap.groups) {
    nlohmann::json j{{"type", "mws"},
                     {"id", g.id},
                     {"demand", g.demand_id},
                     {"links", g.link_ids},
                     {"band", band_name(g.band)},
                     {"block_start", g.block_start_slot},
                     {"width", g.config.width_slots},
                     {"bandwidth_ghz", g.config.bandwidth_ghz},
                     {"rate_gbps", g.config.net_rate_gbps},
                     {"members", g.member_lps},
                     {"spare", g.has_spare_block},
                     {"spare_start", g.spare_start_slot}};
    out << j.dump() << "\n";
  }
  return out.str();
}

inline Snapshot snapshot_from_jsonl(const std::string& text) {
  Snapshot snap;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("snapshot line " + std::to_string(lineno) + ": " + e.what());
    }
    const std::string type = j.at("type");
    if (type == "period") {
      snap.flow = j.at("flow");
      snap.period = j.at("period");
    } else if (type == "demand") {
      snap.demands.push_back({j.at("id"), j.at("src"), j.at("dst"), j.at("art")});
    } else if (type == "lp") {
      Lightpath lp;
      lp.id = j.at("id");
      lp.demand_id = j.at("demand");
      lp.link_ids = j.at("links").get<std::vector<int>>();
      lp.assignment.band = j.at("band") == "C" ? Band::c : Band::l;
      lp.assignment.start_slot = j.at("start");
      lp.assignment.width_slots = j.at("width");
      lp.config.bandwidth_ghz = j.at("bandwidth_ghz");
      lp.config.width_slots = lp.assignment.width_slots;
      lp.config.symbol_rate_gbd = j.at("symbol_rate_gbd");
      lp.config.entropy_bits = j.at("entropy");
      lp.config.net_rate_gbps = j.at("rate_gbps");
      lp.config.req_snr_db = j.at("req_snr_db");
      lp.active = j.at("active");
      lp.mws_group = j.at("group");
      lp.placement_period = j.at("period");
      snap.lightpaths.push_back(std::move(lp));
    } else if (type == "mws") {
      MwsGroup g;
      g.id = j.at("id");
      g.demand_id = j.at("demand");
      g.link_ids = j.at("links").get<std::vector<int>>();
      g.band = j.at("band") == "C" ? Band::c : Band::l;
      g.block_start_slot = j.at("block_start");
      g.config.width_slots = j.at("width");
      g.config.bandwidth_ghz = j.at("bandwidth_ghz");
      g.config.net_rate_gbps = j.at("rate_gbps");
      g.member_lps = j.at("members").get<std::vector<int>>();
      g.has_spare_block = j.at("spare");
      g.spare_start_slot = j.at("spare_start");
      snap.groups.push_back(std::move(g));
    } else {
      throw ParseError("snapshot line " + std::to_string(lineno) + ": unknown record type '" +
                       type + "'");
    }
  }
  return snap;
}

}  // namespace clplan
