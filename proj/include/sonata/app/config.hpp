#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

namespace sonata::app {

/// Sectioned key-value text:
///   # comment
///   [section]
///   key = value
/// Typed getters mark keys as consumed so leftovers can be reported.
class ConfigFile {
 public:
  static ConfigFile parse(std::istream& is, const std::string& source = "<config>");
  static ConfigFile load(const std::string& path);

  const std::string& source() const { return source_; }
  bool has(const std::string& section, const std::string& key) const;
  /// Adds or replaces a value; the entry reports line 0.
  void set(const std::string& section, const std::string& key, const std::string& value);

  std::optional<std::string> get_string(const std::string& section, const std::string& key) const;
  std::optional<double> get_double(const std::string& section, const std::string& key) const;
  std::optional<long long> get_int(const std::string& section, const std::string& key) const;
  std::optional<std::uint64_t> get_u64(const std::string& section, const std::string& key) const;
  std::optional<bool> get_bool(const std::string& section, const std::string& key) const;

  /// Throws BadConfig naming the first key no getter asked for.
  void ensure_all_used() const;

  /// "source:line: [section] key: message"
  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& message) const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  using Key = std::pair<std::string, std::string>;

  const Entry* find(const std::string& section, const std::string& key) const;

  std::string source_;
  std::map<Key, Entry> entries_;
  mutable std::set<Key> used_;
};

}  // namespace sonata::app
