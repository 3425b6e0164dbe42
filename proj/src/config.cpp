#include "klsat/config.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "klsat/text.hpp"

namespace klsat {

namespace {

constexpr std::array<std::string_view, 30> kKnownKeys = {
    "b",        "base_seed", "c",        "c1",      "c2",
    "c_grid",   "c_max",     "d",        "eps_feas", "fallback",
    "graph",    "grid_step", "instance", "l",       "mode",
    "n",        "n_list",    "nu",       "out",     "pool",
    "replacement", "samples", "seed",    "seeds",   "subcommand",
    "svg",      "tol",       "version",  "wdist",   "workers"};

}  // namespace

bool Config::known_key(std::string_view key) {
  return std::find(kKnownKeys.begin(), kKnownKeys.end(), key) !=
         kKnownKeys.end();
}

Config Config::parse(std::string_view content) {
  Config cfg;
  std::vector<std::string_view> lines = text::split(content, '\n');
  for (size_t ln = 0; ln < lines.size(); ++ln) {
    std::string_view line = text::trim(lines[ln]);
    if (line.empty()) continue;
    bool commented = false;
    while (!line.empty() && line[0] == '#') {
      commented = true;
      line = text::trim(line.substr(1));
    }
    size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      if (commented) continue;  // plain comment
      throw std::invalid_argument("config line " + std::to_string(ln + 1) +
                                  ": expected key = value");
    }
    std::string key(text::trim(line.substr(0, eq)));
    std::string value(text::trim(line.substr(eq + 1)));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(ln + 1) +
                                  ": empty key");
    if (!known_key(key))
      throw std::invalid_argument("config: unknown key '" + key + "'");
    cfg.values_[key] = value;
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  return parse(text::read_file(path));
}

bool Config::has(const std::string& key) const {
  return values_.count(key) != 0;
}

void Config::set(const std::string& key, std::string value) {
  if (!known_key(key))
    throw std::invalid_argument("config: unknown key '" + key + "'");
  values_[key] = std::move(value);
}

std::string Config::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end())
    throw std::invalid_argument("config: missing key '" + key + "'");
  return it->second;
}

double Config::get_double(const std::string& key) const {
  try {
    return text::parse_double(get_string(key));
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key +
                                "' is not a number");
  }
}

long long Config::get_int(const std::string& key) const {
  try {
    return text::parse_int(get_string(key));
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key +
                                "' is not an integer");
  }
}

std::uint64_t Config::get_u64(const std::string& key) const {
  try {
    return text::parse_u64(get_string(key));
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key +
                                "' is not an unsigned integer");
  }
}

bool Config::get_bool(const std::string& key) const {
  std::string v = get_string(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("config: key '" + key + "' is not a boolean");
}

std::vector<double> Config::get_double_list(const std::string& key) const {
  std::string v = get_string(key);
  std::vector<double> out;
  for (std::string_view part : text::split(v, ',')) {
    std::string_view p = text::trim(part);
    if (p.empty())
      throw std::invalid_argument("config: key '" + key +
                                  "' has an empty list entry");
    try {
      out.push_back(text::parse_double(p));
    } catch (const std::exception&) {
      throw std::invalid_argument("config: key '" + key +
                                  "' is not a number list");
    }
  }
  if (out.empty())
    throw std::invalid_argument("config: key '" + key + "' is an empty list");
  return out;
}

std::vector<int> Config::get_int_list(const std::string& key) const {
  std::string v = get_string(key);
  std::vector<int> out;
  for (std::string_view part : text::split(v, ',')) {
    std::string_view p = text::trim(part);
    if (p.empty())
      throw std::invalid_argument("config: key '" + key +
                                  "' has an empty list entry");
    try {
      out.push_back(static_cast<int>(text::parse_int(p)));
    } catch (const std::exception&) {
      throw std::invalid_argument("config: key '" + key +
                                  "' is not an integer list");
    }
  }
  if (out.empty())
    throw std::invalid_argument("config: key '" + key + "' is an empty list");
  return out;
}

std::string Config::get_string(const std::string& key,
                               std::string fallback) const {
  return has(key) ? get_string(key) : std::move(fallback);
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long Config::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& key,
                              std::uint64_t fallback) const {
  return has(key) ? get_u64(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  return has(key) ? get_bool(key) : fallback;
}

void Config::require(const std::vector<std::string>& keys) const {
  std::string missing;
  for (const std::string& key : keys) {
    if (has(key)) continue;
    if (!missing.empty()) missing += ", ";
    missing += key;
  }
  if (!missing.empty())
    throw std::invalid_argument("config: missing required keys: " + missing);
}

std::string Config::metadata_block() const {
  std::string out;
  for (const auto& [key, value] : values_) {
    out += "# ";
    out += key;
    out += " = ";
    out += value;
    out += '\n';
  }
  return out;
}

}  // namespace klsat
