#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cdlab/errors.hpp"

namespace cdlab {

// Strict sectioned key-value configuration. Lines are `key = value`, sections
// `[name]`, comments start with '#'. Values are scalars or comma lists.
// Readers mark keys as consumed; finish() rejects anything left over, so
// misspelled tolerance names fail loudly instead of silently using defaults.
class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);
  std::string serialize() const;

  void set(const std::string& section, const std::string& key, const std::string& value);

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback);
  std::string require_string(const std::string& section, const std::string& key);
  double get_double(const std::string& section, const std::string& key, double fallback);
  int get_int(const std::string& section, const std::string& key, int fallback);
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback);
  bool get_bool(const std::string& section, const std::string& key, bool fallback);
  std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                  const std::vector<double>& fallback);
  std::vector<double> require_doubles(const std::string& section, const std::string& key);

  // Throws ConfigError listing every key that no reader consumed.
  void finish() const;

  bool operator==(const Config& o) const { return values_ == o.values_; }

 private:
  std::map<std::string, std::map<std::string, std::string>> values_;
  mutable std::set<std::string> consumed_;
  const std::string* find(const std::string& section, const std::string& key) const;
};

}  // namespace cdlab
