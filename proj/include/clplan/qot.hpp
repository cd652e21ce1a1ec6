#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "clplan/errors.hpp"
#include "clplan/topology.hpp"
#include "clplan/units.hpp"

namespace clplan {

// Physical-layer parameters. All values are configuration with documented
// defaults; the planner only relies on their qualitative behaviour (noise
// grows with distance, load and symbol rate).
struct QotParams {
  std::array<double, 2> attenuation_db_per_km{0.20, 0.22};  // [C, L]
  std::array<double, 2> noise_figure_db{5.0, 6.0};          // [C, L]
  std::array<double, 2> launch_offset_dbm{1.0, 1.0};        // [C, L]
  double launch_tilt_db_per_thz = 0.0;
  std::array<double, 2> band_center_thz{193.4, 187.9};      // [C, L]
  double ref_bandwidth_hz = 12.5e9;                         // equals the slot width
  double aging_margin_db = 1.0;
  // NLI tilt per watt of total launch power, per km of effective length and
  // per THz of offset from the mean launch frequency (Raman gain slope proxy).
  double isrs_coeff = 0.03;
  double osnr_tx_db = 26.0;
  double mws_penalty_db = 1.0;
  double abs_dispersion_ps2_per_km = 21.7;
  double gamma_per_w_km = 1.2;
  double eol_fill_channel_ghz = 75.0;

  double band_start_thz(Band b) const {
    return band_center_thz[band_index(b)] - kBandSpanThz / 2.0;
  }
  double band_end_thz(Band b) const {
    return band_center_thz[band_index(b)] + kBandSpanThz / 2.0;
  }
};

// One optical carrier as the QoT model sees it: where it sits, how much of
// the grid it occupies, how wide its signal is and how much power it launches.
struct Channel {
  double center_thz = 0.0;
  double signal_bw_hz = 0.0;  // symbol-rate bandwidth used by the GN kernel
  double slot_bw_hz = 0.0;    // occupied grid width
  double power_w = 0.0;
};

struct SnrReport {
  double snr_total_db = 0.0;
  double snr_ase_db = 0.0;
  double snr_nli_db = 0.0;
  double osnr_tx_used_db = 0.0;
  bool eol = false;
};

inline std::optional<Band> band_of(const QotParams& p, double f_thz) {
  constexpr double kEps = 1e-9;
  for (Band b : kBands) {
    if (f_thz >= p.band_start_thz(b) - kEps && f_thz <= p.band_end_thz(b) + kEps) return b;
  }
  return std::nullopt;
}

// Launch power profile: per-band offset plus a linear tilt across the band.
inline double launch_power_dbm(const QotParams& p, double f_thz) {
  const auto band = band_of(p, f_thz);
  if (!band) {
    throw DomainError("frequency " + std::to_string(f_thz) + " THz is outside both bands");
  }
  return p.launch_offset_dbm[band_index(*band)] +
         p.launch_tilt_db_per_thz * (f_thz - p.band_center_thz[band_index(*band)]);
}

inline double channel_center_thz(const QotParams& p, Band band, int start_slot, int width_slots) {
  return p.band_start_thz(band) +
         (static_cast<double>(start_slot) + static_cast<double>(width_slots) / 2.0) * kSlotGhz *
             1e-3;
}

inline Channel make_channel(const QotParams& p, Band band, int start_slot, int width_slots,
                            double signal_bw_hz) {
  Channel ch;
  ch.center_thz = channel_center_thz(p, band, start_slot, width_slots);
  ch.signal_bw_hz = signal_bw_hz;
  ch.slot_bw_hz = width_slots * kSlotGhz * 1e9;
  ch.power_w = dbm_to_w(launch_power_dbm(p, ch.center_thz));
  return ch;
}

// Amplified spontaneous emission accumulated over a span list, referred to the
// reference bandwidth. Each span's amplifier exactly compensates its loss.
inline double ase_noise_w(const std::vector<Span>& spans, Band band, double f_thz,
                          const QotParams& p) {
  if (spans.empty()) throw ValidationError("ase_noise: empty span list");
  const double nu = f_thz * 1e12;
  double total = 0.0;
  for (const auto& s : spans) {
    const double nf_lin = db_to_lin(s.noise_figure_db[band_index(band)]);
    const double gain_lin = db_to_lin(s.gain_db(band));
    total += kPlanckJs * nu * nf_lin * (gain_lin - 1.0) * p.ref_bandwidth_hz;
  }
  return total;
}

// Synthetic worst-case load: both bands tiled with equal-width carriers at
// profile power. Carriers overlapping the candidate's own slot are skipped.
inline std::vector<Channel> full_fill_interferers(const QotParams& p, const Channel& cand) {
  std::vector<Channel> set;
  const double fill_thz = p.eol_fill_channel_ghz * 1e-3;
  for (Band b : kBands) {
    const int n = static_cast<int>(std::floor(kBandSpanThz / fill_thz + 1e-9));
    for (int k = 0; k < n; ++k) {
      Channel ch;
      ch.center_thz = p.band_start_thz(b) + (static_cast<double>(k) + 0.5) * fill_thz;
      ch.signal_bw_hz = p.eol_fill_channel_ghz * 1e9;
      ch.slot_bw_hz = ch.signal_bw_hz;
      const double min_gap_thz = (cand.slot_bw_hz + ch.slot_bw_hz) / 2.0 * 1e-12;
      if (std::abs(ch.center_thz - cand.center_thz) < min_gap_thz - 1e-12) continue;
      ch.power_w = dbm_to_w(launch_power_dbm(p, ch.center_thz));
      set.push_back(ch);
    }
  }
  return set;
}

namespace detail {

// Incoherent per-span Gaussian-noise kernel: closed-form self- and
// cross-channel terms, each scaled by a per-channel ISRS power-tilt factor
// derived from the total launched power.
inline double nli_psd_span(const Channel& cut, const std::vector<Channel>& interferers,
                           const Span& span, Band band, const QotParams& p) {
  const double alpha_db = span.attenuation_db_per_km[band_index(band)];
  const double a = alpha_db * std::log(10.0) / 10.0 / 1e3;  // power attenuation, 1/m
  const double length_m = span.length_km * 1e3;
  const double l_eff = (1.0 - std::exp(-a * length_m)) / a;
  const double l_asym = 1.0 / a;
  const double beta2 = p.abs_dispersion_ps2_per_km * 1e-27;  // s^2/m
  const double gamma = p.gamma_per_w_km * 1e-3;              // 1/(W m)

  const double g_cut = cut.power_w / cut.signal_bw_hz;
  const double prefactor =
      (16.0 / 27.0) * gamma * gamma * l_eff * l_eff / (2.0 * M_PI * beta2 * l_asym);

  double sum = g_cut * g_cut * std::asinh(0.5 * M_PI * M_PI * l_asym * beta2 *
                                          cut.signal_bw_hz * cut.signal_bw_hz);
  for (const auto& ch : interferers) {
    const double g = ch.power_w / ch.signal_bw_hz;
    const double df = (cut.center_thz - ch.center_thz) * 1e12;
    const double k = M_PI * M_PI * l_asym * beta2 * cut.signal_bw_hz;
    const double psi =
        std::asinh(k * (df + 0.5 * ch.signal_bw_hz)) - std::asinh(k * (df - 0.5 * ch.signal_bw_hz));
    sum += g * g * psi;
  }

  double tilt = 1.0;
  if (p.isrs_coeff != 0.0) {
    double p_tot = cut.power_w;
    double f_weighted = cut.power_w * cut.center_thz;
    for (const auto& ch : interferers) {
      p_tot += ch.power_w;
      f_weighted += ch.power_w * ch.center_thz;
    }
    const double f_mean = f_weighted / p_tot;
    // exponent = coeff * P_tot[W] * L_eff[km] * (f_mean - f_cut)[THz]
    tilt = std::exp(p.isrs_coeff * p_tot * (l_eff / 1e3) * (f_mean - cut.center_thz));
  }

  return tilt * prefactor * g_cut * sum;
}

}  // namespace detail

// Nonlinear interference power in the reference bandwidth, accumulated
// incoherently per span. With full_fill set, the co-propagating set is
// replaced by the synthetic fully loaded grid in both bands.
inline double nli_noise_w(const Channel& cand, const std::vector<Channel>& co_propagating,
                          const std::vector<Span>& spans, const QotParams& p, bool full_fill) {
  const auto band = band_of(p, cand.center_thz);
  if (!band) {
    throw DomainError("candidate frequency " + std::to_string(cand.center_thz) +
                      " THz is outside both bands");
  }
  std::vector<Channel> synthetic;
  if (full_fill) synthetic = full_fill_interferers(p, cand);
  const std::vector<Channel>& set = full_fill ? synthetic : co_propagating;
  double psd = 0.0;
  for (const auto& span : spans) {
    psd += detail::nli_psd_span(cand, set, span, *band, p);
  }
  return psd * p.ref_bandwidth_hz;
}

// Inverse-SNR combination of link noise and transceiver noise. Under EOL every
// component is derated by the aging margin, so the combining identity
// 1/total = 1/ase + 1/nli + 1/tx holds for the reported values and the total
// equals the un-aged total minus the margin.
inline SnrReport combine_snr(double p_ch_w, double ase_w, double nli_w, double osnr_tx_db,
                             bool eol, const QotParams& p) {
  const double derate = eol ? db_to_lin(p.aging_margin_db) : 1.0;
  const double snr_ase = p_ch_w / (ase_w * derate);
  const double snr_nli =
      nli_w > 0.0 ? p_ch_w / (nli_w * derate) : std::numeric_limits<double>::infinity();
  const double tx =
      std::isinf(osnr_tx_db) ? std::numeric_limits<double>::infinity() : db_to_lin(osnr_tx_db) / derate;

  const double inv = 1.0 / snr_ase + 1.0 / snr_nli + 1.0 / tx;
  SnrReport r;
  r.snr_ase_db = lin_to_db(snr_ase);
  r.snr_nli_db = lin_to_db(snr_nli);
  r.osnr_tx_used_db = lin_to_db(tx);
  r.snr_total_db = lin_to_db(1.0 / inv);
  r.eol = eol;
  return r;
}

// End-to-end SNR of a candidate carrier over a span list with one
// co-propagating set. EOL evaluation uses the full-fill interferer set and
// applies the aging margin; MWS comb lines pay the OSNR_TX penalty.
inline SnrReport estimate_snr(const std::vector<Span>& spans, const Channel& cand,
                              const std::vector<Channel>& co_propagating, const QotParams& p,
                              bool eol, bool mws_line) {
  const auto band = band_of(p, cand.center_thz);
  if (!band) {
    throw DomainError("candidate frequency " + std::to_string(cand.center_thz) +
                      " THz is outside both bands");
  }
  const double ase = ase_noise_w(spans, *band, cand.center_thz, p);
  const double nli = nli_noise_w(cand, co_propagating, spans, p, eol);
  const double tx = p.osnr_tx_db - (mws_line ? p.mws_penalty_db : 0.0);
  return combine_snr(cand.power_w, ase, nli, tx, eol, p);
}

}  // namespace clplan
