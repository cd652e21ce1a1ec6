#pragma once

#include <cmath>

namespace clplan {

inline constexpr double kPlanckJs = 6.62607015e-34;

// Flex-grid geometry shared by every module.
inline constexpr double kSlotGhz = 12.5;
inline constexpr int kSlotsPerBand = 400;
inline constexpr double kBandSpanThz = 5.0;  // 400 x 12.5 GHz
inline constexpr double kGuardGhz = 500.0;

inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_w(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double w_to_dbm(double w) { return 10.0 * std::log10(w / 1e-3); }

}  // namespace clplan
