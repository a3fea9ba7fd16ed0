#ifndef EXCINET_CONFIG_HPP
#define EXCINET_CONFIG_HPP

#include <filesystem>
#include <string>

#include "excinet/network.hpp"

namespace excinet {

/// Parses a network description from the TOML-style key-value format:
///
///   n_sites = 7
///   initial_site = 1
///   sink_sites = [3]
///   sink_rate = 6.283
///   hbar = 5.3022
///   local_energies = [0, 0, 0, 0, 0, 0, 0]
///   dephasing_rates = [...]
///   loss_rates = [...]
///   couplings = [
///     [0, -104.1, ...],
///     ...
///   ]
///
/// Scalars are integers or floats; arrays may span multiple lines; `#` starts
/// a comment. All fields are required, unknown keys are rejected, and every
/// diagnostic carries the offending line number and field name (ConfigError).
NetworkSpec parse_network_config(const std::string& text);
NetworkSpec load_network_config(const std::filesystem::path& path);

/// Canonical serialization: fixed key order, shortest round-trip number
/// formatting. parse(dump(spec)) reproduces `spec` exactly, and dumping a
/// parsed canonical file reproduces the file byte for byte.
std::string dump_network_config(const NetworkSpec& spec);

}  // namespace excinet

#endif  // EXCINET_CONFIG_HPP
