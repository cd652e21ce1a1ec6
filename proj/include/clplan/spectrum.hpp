#pragma once

#include <bitset>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clplan/errors.hpp"
#include "clplan/topology.hpp"

namespace clplan {

// One contiguous block of slots on every link of a path. Widths are in
// 12.5 GHz slots; a single transceiver uses 3..12 slots, a 4-line comb block
// up to 48.
struct SpectrumAssignment {
  Band band = Band::c;
  int start_slot = 0;
  int width_slots = 0;

  bool operator==(const SpectrumAssignment&) const = default;
};

// Per-link, per-band slot occupancy. The C and L bands are disjoint arrays,
// so an allocation can never straddle the guard band by construction.
class SpectrumGrid {
 public:
  SpectrumGrid() = default;
  explicit SpectrumGrid(int link_count) : slots_(static_cast<std::size_t>(link_count)) {}

  int link_count() const { return static_cast<int>(slots_.size()); }

  const std::bitset<kSlotsPerBand>& occupancy(int link, Band band) const {
    return slots_[static_cast<std::size_t>(link)][static_cast<std::size_t>(band_index(band))];
  }

  bool is_free(int link, Band band, int start, int width) const {
    const auto& occ = occupancy(link, band);
    for (int s = start; s < start + width; ++s) {
      if (occ.test(static_cast<std::size_t>(s))) return false;
    }
    return true;
  }

  // Lowest-frequency contiguous run of `width` slots free on all `links`,
  // scanning the C band fully before the L band.
  std::optional<std::pair<Band, int>> first_fit(std::span<const int> links, int width) const {
    if (width < 3 || width > 48) {
      throw ValidationError("first_fit: width " + std::to_string(width) +
                            " outside supported slot range");
    }
    if (links.empty()) throw ValidationError("first_fit: empty path");
    for (Band band : kBands) {
      std::bitset<kSlotsPerBand> merged;
      for (int link : links) merged |= occupancy(link, band);
      int run = 0;
      for (int s = 0; s < kSlotsPerBand; ++s) {
        run = merged.test(static_cast<std::size_t>(s)) ? 0 : run + 1;
        if (run == width) return std::make_pair(band, s - width + 1);
      }
    }
    return std::nullopt;
  }

  void allocate(std::span<const int> links, const SpectrumAssignment& a) {
    check_bounds(a);
    for (int link : links) {
      if (!is_free(link, a.band, a.start_slot, a.width_slots)) {
        throw OccupancyError("double allocation on link " + std::to_string(link) + " band " +
                             band_name(a.band) + " slots [" + std::to_string(a.start_slot) +
                             "," + std::to_string(a.start_slot + a.width_slots) + ")");
      }
    }
    for (int link : links) set_range(link, a, true);
  }

  void release(std::span<const int> links, const SpectrumAssignment& a) {
    check_bounds(a);
    for (int link : links) {
      const auto& occ = occupancy(link, a.band);
      for (int s = a.start_slot; s < a.start_slot + a.width_slots; ++s) {
        if (!occ.test(static_cast<std::size_t>(s))) {
          throw OccupancyError("release of free slot " + std::to_string(s) + " on link " +
                               std::to_string(link));
        }
      }
    }
    for (int link : links) set_range(link, a, false);
  }

  bool operator==(const SpectrumGrid&) const = default;

 private:
  void check_bounds(const SpectrumAssignment& a) const {
    if (a.width_slots <= 0 || a.start_slot < 0 || a.start_slot + a.width_slots > kSlotsPerBand) {
      throw ValidationError("assignment outside band: start " + std::to_string(a.start_slot) +
                            " width " + std::to_string(a.width_slots));
    }
  }

  void set_range(int link, const SpectrumAssignment& a, bool value) {
    auto& occ = slots_[static_cast<std::size_t>(link)][static_cast<std::size_t>(band_index(a.band))];
    for (int s = a.start_slot; s < a.start_slot + a.width_slots; ++s) {
      occ.set(static_cast<std::size_t>(s), value);
    }
  }

  std::vector<std::array<std::bitset<kSlotsPerBand>, 2>> slots_;
};

inline std::optional<std::pair<Band, int>> first_fit(const SpectrumGrid& grid,
                                                     std::span<const int> links, int width) {
  return grid.first_fit(links, width);
}

}  // namespace clplan
