#include "donorspin/toml_lite.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace donorspin {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw std::runtime_error("config line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

bool parse_number(const std::string& tok, double& out) {
  if (tok.empty()) return false;
  char* end = nullptr;
  out = std::strtod(tok.c_str(), &end);
  return end == tok.c_str() + tok.size();
}

TomlValue parse_scalar(const std::string& tok, int line) {
  if (tok == "true") return TomlValue{true};
  if (tok == "false") return TomlValue{false};
  if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"')
    return TomlValue{tok.substr(1, tok.size() - 2)};
  double num;
  if (parse_number(tok, num)) return TomlValue{num};
  fail(line, "cannot parse value '" + tok + "'");
}

TomlValue parse_value(const std::string& raw, int line) {
  const std::string tok = trim(raw);
  if (tok.empty()) fail(line, "missing value");
  if (tok.front() != '[') return parse_scalar(tok, line);
  if (tok.back() != ']') fail(line, "unterminated array (arrays must be single-line)");

  std::vector<std::string> elems;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 1; i + 1 < tok.size(); ++i) {
    const char c = tok[i];
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      elems.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) elems.push_back(trim(cur));

  if (elems.empty()) return TomlValue{std::vector<double>{}};
  if (!elems[0].empty() && elems[0].front() == '"') {
    std::vector<std::string> out;
    for (const auto& e : elems) {
      const TomlValue v = parse_scalar(e, line);
      if (!v.is_string()) fail(line, "mixed array element types");
      out.push_back(std::get<std::string>(v.v));
    }
    return TomlValue{out};
  }
  std::vector<double> out;
  for (const auto& e : elems) {
    const TomlValue v = parse_scalar(e, line);
    if (!v.is_number()) fail(line, "mixed array element types");
    out.push_back(std::get<double>(v.v));
  }
  return TomlValue{out};
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.') return false;
  return true;
}

}  // namespace

TomlTable TomlTable::parse(const std::string& text) {
  TomlTable table;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(lineno, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (!valid_key(section)) fail(lineno, "bad section name '" + section + "'");
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail(lineno, "expected key = value");
    const std::string key = trim(s.substr(0, eq));
    if (!valid_key(key)) fail(lineno, "bad key '" + key + "'");
    const std::string path = section.empty() ? key : section + "." + key;
    if (table.values_.count(path)) fail(lineno, "duplicate key '" + path + "'");
    table.values_[path] = parse_value(s.substr(eq + 1), lineno);
  }
  return table;
}

TomlTable TomlTable::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read config file: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return parse(os.str());
}

const TomlValue& TomlTable::at(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw std::runtime_error("missing config key: " + key);
  return it->second;
}

}  // namespace donorspin
