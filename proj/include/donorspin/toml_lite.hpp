#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace donorspin {

// Minimal TOML subset for scenario files: [section] / [section.sub] headers,
// key = value with numbers, booleans, quoted strings and single-line arrays
// of those, and '#' comments. Keys are flattened to dotted paths.
struct TomlValue {
  std::variant<double, bool, std::string, std::vector<double>, std::vector<std::string>> v;

  bool is_number() const { return std::holds_alternative<double>(v); }
  bool is_bool() const { return std::holds_alternative<bool>(v); }
  bool is_string() const { return std::holds_alternative<std::string>(v); }
};

struct TomlError {
  int line = 0;
  std::string message;
};

class TomlTable {
 public:
  static TomlTable parse(const std::string& text);
  static TomlTable parse_file(const std::string& path);

  bool contains(const std::string& key) const { return values_.count(key) > 0; }
  const TomlValue& at(const std::string& key) const;
  const std::map<std::string, TomlValue>& items() const { return values_; }

  void set(const std::string& key, TomlValue value) { values_[key] = std::move(value); }

 private:
  std::map<std::string, TomlValue> values_;
};

}  // namespace donorspin
