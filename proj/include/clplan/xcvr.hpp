#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "clplan/errors.hpp"
#include "clplan/format.hpp"
#include "clplan/units.hpp"

namespace clplan {

// One bandwidth-variable transceiver operating point. Required SNR is referred
// to the reference bandwidth (12.5 GHz), matching the QoT reports.
struct XcvrConfig {
  double bandwidth_ghz = 0.0;  // occupied slot bandwidth, 37.5..150
  int width_slots = 0;
  double symbol_rate_gbd = 0.0;
  double entropy_bits = 0.0;  // bit/symbol per polarization (PS-QAM continuum)
  double net_rate_gbps = 0.0;
  double req_snr_db = 0.0;

  bool operator==(const XcvrConfig&) const = default;
};

struct CatalogParams {
  double roll_off = 0.0625;
  double entropy_min = 2.0;
  double entropy_max = 6.0;
  double entropy_step = 0.25;
  double fec_overhead_bits = 0.8;  // entropy spent on FEC, bit/symbol
  double snr_gap_db = 1.5;         // gap to the Shannon limit
  double rate_granularity_gbps = 50.0;
  double ref_bandwidth_hz = 12.5e9;
};

// Full operating-point grid: 10 slot bandwidths x the entropy grid. Net rate
// follows a gap-adjusted Shannon law, rounded down to the rate granularity.
inline std::vector<XcvrConfig> generate_catalog(const CatalogParams& p = {}) {
  if (p.roll_off < 0.0 || p.roll_off > 0.2) {
    throw ValidationError("roll-off outside [0, 0.2]");
  }
  if (!(p.entropy_step > 0.0) || p.entropy_min < 2.0 || p.entropy_max > 6.0 ||
      p.entropy_min > p.entropy_max) {
    throw ValidationError("entropy grid outside [2, 6] bit/symbol");
  }
  std::vector<XcvrConfig> catalog;
  for (int w = 3; w <= 12; ++w) {
    const double bw_ghz = w * kSlotGhz;
    const double rs_gbd = bw_ghz / (1.0 + p.roll_off);
    const int steps = static_cast<int>(std::round((p.entropy_max - p.entropy_min) / p.entropy_step));
    for (int e = 0; e <= steps; ++e) {
      const double entropy = p.entropy_min + e * p.entropy_step;
      const double info_bits = entropy - p.fec_overhead_bits;
      if (info_bits <= 0.0) continue;
      XcvrConfig cfg;
      cfg.bandwidth_ghz = bw_ghz;
      cfg.width_slots = w;
      cfg.symbol_rate_gbd = rs_gbd;
      cfg.entropy_bits = entropy;
      cfg.net_rate_gbps =
          std::floor(2.0 * rs_gbd * info_bits / p.rate_granularity_gbps + 1e-9) *
          p.rate_granularity_gbps;
      if (cfg.net_rate_gbps <= 0.0) continue;
      const double snr_at_rs_db = lin_to_db(std::pow(2.0, entropy) - 1.0) + p.snr_gap_db;
      cfg.req_snr_db = snr_at_rs_db + lin_to_db(rs_gbd * 1e9 / p.ref_bandwidth_hz);
      catalog.push_back(cfg);
    }
  }
  std::sort(catalog.begin(), catalog.end(), [](const XcvrConfig& x, const XcvrConfig& y) {
    if (x.bandwidth_ghz != y.bandwidth_ghz) return x.bandwidth_ghz < y.bandwidth_ghz;
    if (x.net_rate_gbps != y.net_rate_gbps) return x.net_rate_gbps < y.net_rate_gbps;
    return x.req_snr_db < y.req_snr_db;
  });
  return catalog;
}

// Keeps only Pareto-optimal configurations per bandwidth: no other config with
// at least the rate and at most the required SNR, and for duplicate
// (bandwidth, rate) pairs only the lowest-SNR entry.
inline std::vector<XcvrConfig> preselect(const std::vector<XcvrConfig>& catalog) {
  if (catalog.empty()) throw ValidationError("preselect: empty catalog");
  std::vector<XcvrConfig> out;
  for (const auto& cfg : catalog) {
    bool dominated = false;
    for (const auto& other : catalog) {
      if (&other == &cfg || other.bandwidth_ghz != cfg.bandwidth_ghz) continue;
      const bool geq_rate = other.net_rate_gbps >= cfg.net_rate_gbps;
      const bool leq_snr = other.req_snr_db <= cfg.req_snr_db;
      if (geq_rate && leq_snr && (other.net_rate_gbps > cfg.net_rate_gbps ||
                                  other.req_snr_db < cfg.req_snr_db)) {
        dominated = true;
        break;
      }
    }
    if (dominated) continue;
    const bool duplicate_pair =
        std::any_of(out.begin(), out.end(), [&](const XcvrConfig& o) {
          return o.bandwidth_ghz == cfg.bandwidth_ghz && o.net_rate_gbps == cfg.net_rate_gbps;
        });
    if (!duplicate_pair) out.push_back(cfg);
  }
  return out;
}

inline std::string dump_catalog_csv(const std::vector<XcvrConfig>& catalog) {
  std::ostringstream out;
  out << "bandwidth_ghz,symbol_rate_gbd,entropy,net_rate_gbps,req_snr_db\n";
  for (const auto& cfg : catalog) {
    out << format_sig(cfg.bandwidth_ghz) << "," << format_sig(cfg.symbol_rate_gbd) << ","
        << format_sig(cfg.entropy_bits) << "," << format_sig(cfg.net_rate_gbps) << ","
        << format_sig(cfg.req_snr_db) << "\n";
  }
  return out.str();
}

// Histogram bin for a bandwidth value (10 bins, 37.5..150 GHz).
inline int bandwidth_bin(double bandwidth_ghz) {
  return static_cast<int>(std::lround((bandwidth_ghz - 37.5) / kSlotGhz));
}

inline double bin_bandwidth_ghz(int bin) { return 37.5 + bin * kSlotGhz; }

}  // namespace clplan
