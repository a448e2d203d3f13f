#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lob {

// Flat key-value config text, TOML-like: `key = value` lines with dotted
// keys, `#` comments, quoted or bare scalar values, and one level of inline
// tables (`jump = {family="pareto", k=3.0, x0=0.005}`), which are flattened
// to dotted keys.
using ConfigMap = std::map<std::string, std::string>;

namespace detail {
inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                        (s.front() == '\'' && s.back() == '\'')))
    return s.substr(1, s.size() - 2);
  return s;
}

inline std::string strip_comment(const std::string& line) {
  bool in_quote = false;
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quote) {
      if (c == quote) in_quote = false;
    } else if (c == '"' || c == '\'') {
      in_quote = true;
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

// split "a = 1, b = 2" on top-level commas, respecting quotes
inline std::vector<std::string> split_inline(const std::string& body) {
  std::vector<std::string> parts;
  std::string cur;
  bool in_quote = false;
  char quote = 0;
  for (const char c : body) {
    if (in_quote) {
      if (c == quote) in_quote = false;
      cur += c;
    } else if (c == '"' || c == '\'') {
      in_quote = true;
      quote = c;
      cur += c;
    } else if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) parts.push_back(cur);
  return parts;
}
}  // namespace detail

inline ConfigMap parse_config_text(const std::string& text) {
  ConfigMap out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::trim(detail::strip_comment(line));
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + line + "'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    if (!value.empty() && value.front() == '{') {
      if (value.back() != '}')
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": unterminated inline table for key '" + key + "'");
      for (const auto& part : detail::split_inline(value.substr(1, value.size() - 2))) {
        const std::size_t peq = part.find('=');
        if (peq == std::string::npos)
          throw std::invalid_argument("config line " + std::to_string(lineno) +
                                      ": expected 'key = value' inside table '" + key + "'");
        const std::string sub = detail::trim(part.substr(0, peq));
        out[key + "." + sub] = detail::unquote(detail::trim(part.substr(peq + 1)));
      }
    } else {
      out[key] = detail::unquote(value);
    }
  }
  return out;
}

inline ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

inline bool config_has(const ConfigMap& cfg, const std::string& key) {
  return cfg.find(key) != cfg.end();
}

inline std::string config_string(const ConfigMap& cfg, const std::string& key,
                                 const std::string& fallback) {
  const auto it = cfg.find(key);
  return it == cfg.end() ? fallback : it->second;
}

inline double config_double(const ConfigMap& cfg, const std::string& key, double fallback) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': expected a number, got '" +
                                it->second + "'");
  }
}

inline long long config_int(const ConfigMap& cfg, const std::string& key, long long fallback) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) return fallback;
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': expected an integer, got '" +
                                it->second + "'");
  }
}

inline std::uint64_t config_uint64(const ConfigMap& cfg, const std::string& key,
                                   std::uint64_t fallback) {
  const auto it = cfg.find(key);
  if (it == cfg.end()) return fallback;
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': expected an integer, got '" +
                                it->second + "'");
  }
}

}  // namespace lob
