#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace klsat {

// Flat `key = value` configuration. Lines may carry a leading "# " so the
// metadata comment block emitted at the top of every output file parses
// back with the same reader. Unknown keys are rejected by name.
class Config {
 public:
  static Config parse(std::string_view text);
  static Config load(const std::string& path);

  bool has(const std::string& key) const;
  void set(const std::string& key, std::string value);

  // Throw std::invalid_argument naming the key on absence or bad type.
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  long long get_int(const std::string& key) const;
  std::uint64_t get_u64(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<int> get_int_list(const std::string& key) const;

  // Typed defaults for optional keys.
  std::string get_string(const std::string& key, std::string fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Throws listing every missing key at once.
  void require(const std::vector<std::string>& keys) const;

  // `# key = value` lines, keys sorted; parse() accepts the block as-is.
  std::string metadata_block() const;

  const std::map<std::string, std::string>& values() const { return values_; }

  static bool known_key(std::string_view key);

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace klsat
