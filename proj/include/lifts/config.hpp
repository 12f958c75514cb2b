#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "lifts/model.hpp"

namespace lifts {

/// Malformed configuration or flag value (reported with exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One `key = value` entry of a config file.
struct ConfigEntry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

/**
 * Parses the line-oriented experiment format:
 *
 *   # comment
 *   [domain]
 *   spec = interval:0,1
 *
 * Keys must belong to their section (see config_flag); anything else throws
 * ConfigError naming the line.
 */
std::vector<ConfigEntry> parse_config(const std::string& text);
std::vector<ConfigEntry> load_config(const std::string& path);

/// Command-line flag (without dashes) that a section/key pair sets; throws on unknown keys.
std::string config_flag(const std::string& section, const std::string& key);

/// interval:a,b | box:l1,u1,l2,u2,... | ball:r;c1,...,cd | ellipsoid:a1,...,ad;c1,...,cd |
/// halfspaces:a11,...,a1d,b1;a21,...,a2d,b2;...
ConvexDomain parse_domain(const std::string& spec);

/// uniform | quadratic:c1,...,cd;p1,...,pd
Potential parse_potential(const std::string& spec, int dimension, std::optional<double> rho = std::nullopt);

std::vector<double> parse_list(const std::string& text);

}  // namespace lifts
