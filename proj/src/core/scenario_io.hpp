#pragma once

#include "pde.hpp"

#include <string>

namespace msdiff {

/// Parse the flat key-value scenario format (dotted keys, '#' comments):
///
///   grid.cells = 64
///   grid.length = 1.0
///   species = 2
///   d.1.2 = 1.0
///   initial.preset = cosine_perturbation
///   initial.amplitudes = 0.3, -0.3
///   t_end = 0.1
///
/// Optional keys: cfl (default 0.25), integrator (euler|heun, default euler),
/// output_stride (default 0 = auto), flux_truncation (default 0),
/// initial.interface_width (default 2 dx, materialized at parse time so
/// refinement keeps the physical width fixed), initial.table_file (custom
/// preset; path relative to base_dir).
///
/// Unknown keys, missing keys, asymmetric or nonpositive diffusivities and
/// preset parameters leaving the simplex are rejected with the key name and
/// line number.
Scenario parse_scenario(const std::string& text, const std::string& base_dir = ".");

Scenario load_scenario_file(const std::string& path);

/// Canonical round-trip of a scenario back to the key-value format (17
/// significant digits, fixed key order).
std::string scenario_to_text(const Scenario& scenario,
                             const std::string& custom_table_path = "");

} // namespace msdiff
