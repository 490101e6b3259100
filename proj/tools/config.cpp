#include "config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace tcg::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Strips a trailing comment that is not inside a string.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& s, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(line, "invalid number '" + s + "'");
  }
  if (used != s.size()) fail(line, "invalid number '" + s + "'");
  return v;
}

Value parse_value(const std::string& raw, int line) {
  Value v;
  v.line = line;
  const std::string s = trim(raw);
  if (s.empty()) fail(line, "missing value");
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') fail(line, "unterminated string");
    v.kind = Value::Kind::string;
    v.text = s.substr(1, s.size() - 2);
  } else if (s == "true" || s == "false") {
    v.kind = Value::Kind::boolean;
    v.flag = s == "true";
  } else if (s.front() == '[') {
    if (s.back() != ']') fail(line, "unterminated array");
    v.kind = Value::Kind::array;
    std::stringstream items(s.substr(1, s.size() - 2));
    std::string item;
    while (std::getline(items, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      v.array.push_back(parse_number(item, line));
    }
  } else {
    v.number = parse_number(s, line);
  }
  return v;
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"model",
       {"name", "gamma", "gamma2", "lambda", "beta", "nu", "modulation", "amplitude", "period",
        "alpha1", "alpha2", "theta0", "p0", "t_start", "t_end", "eps", "omega0"}},
      {"window", {"kind", "tau"}},
      {"engine", {"order", "slow_cutoff", "coeff_floor", "grade_max", "tau"}},
      {"sweep", {"gamma", "beta", "orders", "lambda_max", "omega_min", "omega_max", "omega_steps"}},
      {"output", {"prefix"}},
  };
  return s;
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config c;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(n, "malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) fail(n, "empty section name");
      c.data_[section];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(n, "expected key = value");
    if (section.empty()) fail(n, "key outside of a section");
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) fail(n, "empty key");
    auto& sec = c.data_[section];
    if (sec.count(key)) fail(n, "duplicate key '" + section + "." + key + "'");
    sec.emplace(key, parse_value(s.substr(eq + 1), n));
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

bool Config::has(const std::string& section, const std::string& key) const {
  auto it = data_.find(section);
  return it != data_.end() && it->second.count(key) != 0;
}

const Value& Config::get(const std::string& section, const std::string& key) const {
  auto it = data_.find(section);
  if (it == data_.end() || !it->second.count(key))
    throw ConfigError("missing config key '" + section + "." + key + "'");
  return it->second.at(key);
}

double Config::number(const std::string& section, const std::string& key) const {
  const Value& v = get(section, key);
  if (v.kind != Value::Kind::number)
    throw ConfigError("config key '" + section + "." + key + "' must be a number");
  return v.number;
}

double Config::number_or(const std::string& section, const std::string& key, double fallback) const {
  return has(section, key) ? number(section, key) : fallback;
}

int Config::integer_or(const std::string& section, const std::string& key, int fallback) const {
  if (!has(section, key)) return fallback;
  const double v = number(section, key);
  if (v != static_cast<double>(static_cast<int>(v)))
    throw ConfigError("config key '" + section + "." + key + "' must be an integer");
  return static_cast<int>(v);
}

std::string Config::text(const std::string& section, const std::string& key) const {
  const Value& v = get(section, key);
  if (v.kind != Value::Kind::string)
    throw ConfigError("config key '" + section + "." + key + "' must be a string");
  return v.text;
}

std::string Config::text_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
  return has(section, key) ? text(section, key) : fallback;
}

std::vector<double> Config::array(const std::string& section, const std::string& key) const {
  const Value& v = get(section, key);
  if (v.kind == Value::Kind::number) return {v.number};
  if (v.kind != Value::Kind::array)
    throw ConfigError("config key '" + section + "." + key + "' must be a numeric array");
  return v.array;
}

std::string Config::canonical() const {
  std::ostringstream os;
  char buf[64];
  for (const auto& [sec, keys] : data_) {
    os << "[" << sec << "]\n";
    for (const auto& [k, v] : keys) {
      os << k << "=";
      switch (v.kind) {
        case Value::Kind::number:
          std::snprintf(buf, sizeof buf, "%.17g", v.number);
          os << buf;
          break;
        case Value::Kind::string:
          os << '"' << v.text << '"';
          break;
        case Value::Kind::boolean:
          os << (v.flag ? "true" : "false");
          break;
        case Value::Kind::array:
          os << "[";
          for (std::size_t i = 0; i < v.array.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", v.array[i]);
            os << (i ? "," : "") << buf;
          }
          os << "]";
          break;
      }
      os << "\n";
    }
  }
  return os.str();
}

std::uint64_t Config::hash() const { return fnv1a(canonical()); }

void validate_schema(const Config& c) {
  for (const auto& [sec, keys] : c.sections()) {
    auto it = schema().find(sec);
    if (it == schema().end()) throw ConfigError("unknown config section '" + sec + "'");
    for (const auto& [k, v] : keys)
      if (!it->second.count(k))
        throw ConfigError("config line " + std::to_string(v.line) + ": unknown key '" + sec + "." +
                          k + "'");
  }
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace tcg::cli
