#include "cdlab/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace cdlab {

namespace {
std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}
}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError("config line " + std::to_string(lineno) +
                                             ": unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) throw ConfigError("config line " + std::to_string(lineno) +
                                             ": empty section name");
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq)), value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    auto& sec = cfg.values_[section];
    if (sec.count(key))
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    sec[key] = value;
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

std::string Config::serialize() const {
  std::ostringstream os;
  auto emit_section = [&](const std::string& name) {
    auto it = values_.find(name);
    if (it == values_.end()) return;
    if (!name.empty()) os << "[" << name << "]\n";
    for (const auto& [k, v] : it->second) os << k << " = " << v << "\n";
  };
  emit_section("");
  for (const auto& [name, sec] : values_) {
    if (name.empty()) continue;
    emit_section(name);
  }
  return os.str();
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  values_[section][key] = value;
}

const std::string* Config::find(const std::string& section, const std::string& key) const {
  auto sit = values_.find(section);
  if (sit == values_.end()) return nullptr;
  auto kit = sit->second.find(key);
  if (kit == sit->second.end()) return nullptr;
  consumed_.insert(section + "\x1f" + key);
  return &kit->second;
}

bool Config::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) {
  const std::string* v = find(section, key);
  return v ? *v : fallback;
}

std::string Config::require_string(const std::string& section, const std::string& key) {
  const std::string* v = find(section, key);
  if (!v) throw ConfigError("missing config key [" + section + "] " + key);
  return *v;
}

double Config::get_double(const std::string& section, const std::string& key, double fallback) {
  const std::string* v = find(section, key);
  if (!v) return fallback;
  try {
    std::size_t pos = 0;
    double d = std::stod(*v, &pos);
    if (trim(v->substr(pos)).size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw ConfigError("config key [" + section + "] " + key + ": not a number: " + *v);
  }
}

int Config::get_int(const std::string& section, const std::string& key, int fallback) {
  double d = get_double(section, key, static_cast<double>(fallback));
  int i = static_cast<int>(d);
  if (static_cast<double>(i) != d)
    throw ConfigError("config key [" + section + "] " + key + ": not an integer");
  return i;
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key,
                              std::uint64_t fallback) {
  const std::string* v = find(section, key);
  if (!v) return fallback;
  try {
    return std::stoull(*v);
  } catch (...) {
    throw ConfigError("config key [" + section + "] " + key + ": not an unsigned integer");
  }
}

bool Config::get_bool(const std::string& section, const std::string& key, bool fallback) {
  const std::string* v = find(section, key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1") return true;
  if (*v == "false" || *v == "0") return false;
  throw ConfigError("config key [" + section + "] " + key + ": expected true/false");
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key,
                                        const std::vector<double>& fallback) {
  const std::string* v = find(section, key);
  if (!v) return fallback;
  std::vector<double> out;
  std::stringstream ss(*v);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (...) {
      throw ConfigError("config key [" + section + "] " + key + ": bad list entry: " + tok);
    }
  }
  if (out.empty()) throw ConfigError("config key [" + section + "] " + key + ": empty list");
  return out;
}

std::vector<double> Config::require_doubles(const std::string& section, const std::string& key) {
  if (!has(section, key)) throw ConfigError("missing config key [" + section + "] " + key);
  return get_doubles(section, key, {});
}

void Config::finish() const {
  std::vector<std::string> leftover;
  for (const auto& [sec, keys] : values_)
    for (const auto& [k, v] : keys)
      if (!consumed_.count(sec + "\x1f" + k)) leftover.push_back("[" + sec + "] " + k);
  if (!leftover.empty()) {
    std::string msg = "unknown config keys:";
    for (const auto& k : leftover) msg += " " + k;
    throw ConfigError(msg);
  }
}

}  // namespace cdlab
