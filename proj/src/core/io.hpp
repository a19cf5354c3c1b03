#pragma once

#include "trajectory.hpp"
#include "weakform.hpp"

#include <string>

namespace msdiff {

/// 17 significant digits: round-trip exact for 64-bit floats, so repeated
/// runs emit byte-identical files.
std::string format_g17(double value);

/// Write via a temp file in the same directory, then rename.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

/// entropy_series.csv: t, entropy, dissipation_rate, cumulative_dissipation,
/// residual, pairing_gap, min_c, repair_magnitude, mass_1..mass_n.
std::string entropy_series_csv(const Trajectory& trajectory);

/// Snapshot CSV: x, c_1..c_n (one row per cell).
std::string snapshot_csv(const Snapshot& snapshot, const Grid1D& grid);

std::string audit_report_json(const AuditReport& report);

} // namespace msdiff
