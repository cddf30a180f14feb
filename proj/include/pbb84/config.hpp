#pragma once

#include <string>
#include <vector>

#include "pbb84/engine.hpp"

namespace pbb84::config {

/// Parse a key-value config with [section] headers and '#' comments, applying
/// recognized keys on top of `base`. Unknown keys raise ConfigError naming the
/// key. Distribution values ("source.p") are comma- or space-separated lists.
engine::SweepConfig apply_config_text(engine::SweepConfig base, const std::string& text);

/// Load and apply a config file on top of `base`.
engine::SweepConfig load_config_file(engine::SweepConfig base, const std::string& path);

/// Built-in presets carrying the default experimental constants
/// (alpha = 0.2 dB/km, eta_B = 0.1, eps_A = eps_B = 1e-6, q = 1/2,
/// f_ec = 1.22) plus per-scenario source parameters and distance grids.
engine::SweepConfig preset(const std::string& name);

std::vector<std::string> preset_names();

/// Render a config in the same format accepted by apply_config_text.
std::string to_config_text(const engine::SweepConfig& config);

} // namespace pbb84::config
