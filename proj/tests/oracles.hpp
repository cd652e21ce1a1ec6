#pragma once

// Independent reference implementations used to check the production code.
// Everything here is deliberately brute force and shares no code with the
// library paths it validates.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "clplan/qot.hpp"
#include "clplan/spectrum.hpp"
#include "clplan/topology.hpp"

namespace oracles {

// Linear scan over every (band, start) in first-fit order.
inline std::optional<std::pair<clplan::Band, int>> brute_first_fit(
    const clplan::SpectrumGrid& grid, const std::vector<int>& links, int width) {
  for (clplan::Band band : clplan::kBands) {
    for (int start = 0; start + width <= clplan::kSlotsPerBand; ++start) {
      bool ok = true;
      for (int link : links) {
        for (int s = start; s < start + width; ++s) {
          if (grid.occupancy(link, band).test(static_cast<std::size_t>(s))) {
            ok = false;
            break;
          }
        }
        if (!ok) break;
      }
      if (ok) return std::make_pair(band, start);
    }
  }
  return std::nullopt;
}

// All simple paths between two nodes, ordered by (length, node sequence).
inline std::vector<clplan::Path> enumerate_simple_paths(const clplan::Topology& topo, int src,
                                                        int dst) {
  std::vector<clplan::Path> out;
  std::vector<int> nodes{src};
  std::vector<int> links;
  std::vector<char> visited(static_cast<std::size_t>(topo.node_count()), 0);
  visited[static_cast<std::size_t>(src)] = 1;
  double length = 0.0;

  std::function<void(int)> dfs = [&](int u) {
    if (u == dst) {
      clplan::Path p;
      p.node_ids = nodes;
      p.link_ids = links;
      p.length_km = length;
      out.push_back(std::move(p));
      return;
    }
    for (const auto& [v, lid] : topo.neighbors(u)) {
      if (visited[static_cast<std::size_t>(v)]) continue;
      visited[static_cast<std::size_t>(v)] = 1;
      nodes.push_back(v);
      links.push_back(lid);
      length += topo.link(lid).length_km;
      dfs(v);
      length -= topo.link(lid).length_km;
      links.pop_back();
      nodes.pop_back();
      visited[static_cast<std::size_t>(v)] = 0;
    }
  };
  dfs(src);
  std::sort(out.begin(), out.end(), [](const clplan::Path& x, const clplan::Path& y) {
    if (std::abs(x.length_km - y.length_km) > 1e-12) return x.length_km < y.length_km;
    return x.node_ids < y.node_ids;
  });
  return out;
}

// Numerical integration of the Gaussian-noise reference formula over
// rectangular channel spectra, accumulated incoherently per span. The
// candidate channel must be included in `channels`. Returns noise power in
// the reference bandwidth. ISRS is not modeled here; comparisons run with the
// ISRS coefficient set to zero.
inline double gn_integral_noise_w(const clplan::Channel& cut,
                                  const std::vector<clplan::Channel>& channels,
                                  const std::vector<clplan::Span>& spans, clplan::Band band,
                                  const clplan::QotParams& p, double step_hz = 0.5e9) {
  const double beta2 = p.abs_dispersion_ps2_per_km * 1e-27;
  const double gamma = p.gamma_per_w_km * 1e-3;

  // Rectangular PSD of the multiplexed signal.
  auto psd = [&](double f_hz) {
    for (const auto& ch : channels) {
      const double c = ch.center_thz * 1e12;
      if (f_hz >= c - ch.signal_bw_hz / 2.0 && f_hz <= c + ch.signal_bw_hz / 2.0) {
        return ch.power_w / ch.signal_bw_hz;
      }
    }
    return 0.0;
  };

  double lo = 1e300;
  double hi = -1e300;
  for (const auto& ch : channels) {
    lo = std::min(lo, ch.center_thz * 1e12 - ch.signal_bw_hz / 2.0);
    hi = std::max(hi, ch.center_thz * 1e12 + ch.signal_bw_hz / 2.0);
  }
  const double f = cut.center_thz * 1e12;

  double total_psd = 0.0;
  for (const auto& span : spans) {
    const double a =
        span.attenuation_db_per_km[clplan::band_index(band)] * std::log(10.0) / 10.0 / 1e3;
    const double length_m = span.length_km * 1e3;
    const double e1 = std::exp(-a * length_m);

    double integral = 0.0;
    const int n = static_cast<int>((hi - lo) / step_hz) + 1;
    for (int i = 0; i < n; ++i) {
      const double f1 = lo + (i + 0.5) * step_hz;
      const double g1 = psd(f1);
      if (g1 == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        const double f2 = lo + (j + 0.5) * step_hz;
        const double g2 = psd(f2);
        if (g2 == 0.0) continue;
        const double g3 = psd(f1 + f2 - f);
        if (g3 == 0.0) continue;
        const double kappa = 4.0 * M_PI * M_PI * beta2 * (f1 - f) * (f2 - f);
        const double num = 1.0 + e1 * e1 - 2.0 * e1 * std::cos(kappa * length_m);
        const double den = a * a + kappa * kappa;
        integral += g1 * g2 * g3 * num / den * step_hz * step_hz;
      }
    }
    total_psd += (16.0 / 27.0) * gamma * gamma * integral;
  }
  return total_psd * p.ref_bandwidth_hz;
}

}  // namespace oracles
