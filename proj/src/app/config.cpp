#include "sonata/app/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>

#include "sonata/error.hpp"

namespace sonata::app {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
  return true;
}

}  // namespace

ConfigFile ConfigFile::parse(std::istream& is, const std::string& source) {
  ConfigFile cfg;
  cfg.source_ = source;
  std::string section;
  std::string raw;
  int lineno = 0;
  auto error = [&](const std::string& msg) {
    throw Error(Errc::BadConfig, source + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(is, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') error("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_name(section)) error("bad section name '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) error("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!valid_name(key)) error("bad key '" + key + "'");
    if (section.empty()) error("key '" + key + "' appears before any [section]");
    if (!cfg.entries_.emplace(Key{section, key}, Entry{value, lineno}).second)
      error("duplicate key '" + key + "' in [" + section + "]");
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::BadConfig, "cannot open config '" + path + "'");
  return parse(is, path);
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  return entries_.count(Key{section, key}) != 0;
}

void ConfigFile::set(const std::string& section, const std::string& key, const std::string& value) {
  entries_[Key{section, key}] = Entry{value, 0};
}

const ConfigFile::Entry* ConfigFile::find(const std::string& section, const std::string& key) const {
  const auto it = entries_.find(Key{section, key});
  if (it == entries_.end()) return nullptr;
  used_.insert(it->first);
  return &it->second;
}

void ConfigFile::fail(const std::string& section, const std::string& key,
                      const std::string& message) const {
  const auto it = entries_.find(Key{section, key});
  const int line = it == entries_.end() ? 0 : it->second.line;
  std::string where = source_;
  if (line > 0) where += ":" + std::to_string(line);
  throw Error(Errc::BadConfig, where + ": [" + section + "] " + key + ": " + message);
}

std::optional<std::string> ConfigFile::get_string(const std::string& section,
                                                  const std::string& key) const {
  const Entry* e = find(section, key);
  if (e == nullptr) return std::nullopt;
  return e->value;
}

std::optional<double> ConfigFile::get_double(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (e == nullptr) return std::nullopt;
  const char* s = e->value.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s, &end);
  if (e->value.empty() || *end != '\0' || errno == ERANGE)
    fail(section, key, "expected a number, got '" + e->value + "'");
  return v;
}

std::optional<long long> ConfigFile::get_int(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (e == nullptr) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(e->value.c_str(), &end, 10);
  if (e->value.empty() || *end != '\0' || errno == ERANGE)
    fail(section, key, "expected an integer, got '" + e->value + "'");
  return v;
}

std::optional<std::uint64_t> ConfigFile::get_u64(const std::string& section,
                                                 const std::string& key) const {
  const Entry* e = find(section, key);
  if (e == nullptr) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(e->value.c_str(), &end, 10);
  if (e->value.empty() || e->value.front() == '-' || *end != '\0' || errno == ERANGE)
    fail(section, key, "expected a nonnegative integer, got '" + e->value + "'");
  return static_cast<std::uint64_t>(v);
}

std::optional<bool> ConfigFile::get_bool(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (e == nullptr) return std::nullopt;
  const std::string& v = e->value;
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  fail(section, key, "expected true or false, got '" + v + "'");
}

void ConfigFile::ensure_all_used() const {
  for (const auto& [k, e] : entries_)
    if (used_.count(k) == 0) fail(k.first, k.second, "unknown key");
}

}  // namespace sonata::app
