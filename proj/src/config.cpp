#include "lifts/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace lifts {

namespace {

const std::map<std::string, std::vector<std::string>>& allowed_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"domain", {"spec"}},
      {"potential", {"spec", "m", "rho"}},
      {"process", {"name", "gamma", "dt", "horizon"}},
      {"experiment",
       {"T", "modes", "frequencies", "trials", "diameters", "chains", "grid", "gamma_rule",
        "gamma_value", "horizon_factor", "dt_factor", "start_fraction", "bootstrap", "d", "rate",
        "start", "expect_slope", "slope_tol"}},
      {"run", {"seed", "output", "threads"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

Vector to_vector(const std::string& s) {
  const auto values = parse_list(s);
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(to_double(item));
  if (out.empty()) throw ConfigError("empty number list");
  return out;
}

std::string config_flag(const std::string& section, const std::string& key) {
  const auto& keys = allowed_keys();
  const auto it = keys.find(section);
  if (it == keys.end()) throw ConfigError("unknown config section [" + section + "]");
  if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
    throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
  if (key == "spec") return section;
  if (section == "process" && key == "name") return "process";
  std::string flag = key;
  std::replace(flag.begin(), flag.end(), '_', '-');
  return flag;
}

std::vector<ConfigEntry> parse_config(const std::string& text) {
  std::vector<ConfigEntry> entries;
  std::istringstream in(text);
  std::string line, section;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(number) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!allowed_keys().contains(section))
        throw ConfigError("line " + std::to_string(number) + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    if (section.empty()) throw ConfigError("line " + std::to_string(number) + ": key outside a section");
    ConfigEntry e{section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), number};
    try {
      config_flag(e.section, e.key);
    } catch (const ConfigError& err) {
      throw ConfigError("line " + std::to_string(number) + ": " + err.what());
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<ConfigEntry> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

ConvexDomain parse_domain(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("domain '" + spec + "' lacks ':' parameters");
  const std::string kind = trim(spec.substr(0, colon));
  const std::string rest = spec.substr(colon + 1);
  try {
    if (kind == "interval") {
      const auto v = parse_list(rest);
      if (v.size() != 2) throw ConfigError("interval needs a,b");
      return ConvexDomain::interval(v[0], v[1]);
    }
    if (kind == "box") {
      const auto v = parse_list(rest);
      if (v.size() < 2 || v.size() % 2 != 0) throw ConfigError("box needs l1,u1,l2,u2,...");
      const auto d = static_cast<Eigen::Index>(v.size() / 2);
      Vector lo(d), hi(d);
      for (Eigen::Index i = 0; i < d; ++i) {
        lo(i) = v[2 * i];
        hi(i) = v[2 * i + 1];
      }
      return ConvexDomain::box(lo, hi);
    }
    if (kind == "ball" || kind == "ellipsoid") {
      const auto parts = split(rest, ';');
      if (parts.size() != 2) throw ConfigError(kind + " needs '<size>;<center>'");
      const Vector center = to_vector(parts[1]);
      if (kind == "ball") {
        const auto r = parse_list(parts[0]);
        if (r.size() != 1) throw ConfigError("ball radius must be a single number");
        return ConvexDomain::ball(center, r[0]);
      }
      return ConvexDomain::ellipsoid(center, to_vector(parts[0]));
    }
    if (kind == "halfspaces") {
      const auto rows = split(rest, ';');
      std::vector<std::vector<double>> values;
      for (const auto& r : rows) values.push_back(parse_list(r));
      const std::size_t width = values.front().size();
      if (width < 2) throw ConfigError("halfspace rows need a1,...,ad,b");
      Matrix A(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(width - 1));
      Vector b(static_cast<Eigen::Index>(values.size()));
      for (std::size_t j = 0; j < values.size(); ++j) {
        if (values[j].size() != width) throw ConfigError("halfspace rows differ in length");
        for (std::size_t i = 0; i + 1 < width; ++i) A(j, i) = values[j][i];
        b(j) = values[j].back();
      }
      return ConvexDomain::halfspaces(A, b);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid domain: ") + e.what());
  }
  throw ConfigError("unknown domain kind '" + kind + "'");
}

Potential parse_potential(const std::string& spec, int dimension, std::optional<double> rho) {
  const std::string s = trim(spec);
  try {
    if (s == "uniform") return Potential::uniform();
    if (s.rfind("quadratic:", 0) == 0) {
      const auto parts = split(s.substr(10), ';');
      if (parts.size() != 2) throw ConfigError("quadratic needs 'c1,...;p1,...'");
      const Vector c = to_vector(parts[0]), p = to_vector(parts[1]);
      if (c.size() != dimension || p.size() != dimension)
        throw ConfigError("quadratic potential dimension does not match the domain");
      return Potential::quadratic(c, p, rho);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid potential: ") + e.what());
  }
  throw ConfigError("unknown potential '" + s + "'");
}

}  // namespace lifts
