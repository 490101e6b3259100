// TOML-style run configuration: sections of key = value pairs with numbers,
// strings, booleans and numeric arrays. Unknown sections and keys are errors.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcg::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Value {
  enum class Kind { number, string, boolean, array };
  Kind kind = Kind::number;
  double number = 0.0;
  std::string text;
  bool flag = false;
  std::vector<double> array;
  int line = 0;
};

class Config {
 public:
  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  double number(const std::string& section, const std::string& key) const;
  double number_or(const std::string& section, const std::string& key, double fallback) const;
  std::string text(const std::string& section, const std::string& key) const;
  std::string text_or(const std::string& section, const std::string& key,
                      const std::string& fallback) const;
  std::vector<double> array(const std::string& section, const std::string& key) const;
  int integer_or(const std::string& section, const std::string& key, int fallback) const;

  // Canonical key order and 17-digit numbers; the basis of the config hash.
  std::string canonical() const;
  std::uint64_t hash() const;

  const std::map<std::string, std::map<std::string, Value>>& sections() const { return data_; }

 private:
  const Value& get(const std::string& section, const std::string& key) const;
  std::map<std::string, std::map<std::string, Value>> data_;
};

// Rejects sections and keys outside the schema.
void validate_schema(const Config& c);

// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& s);
std::string hex(std::uint64_t v);

}  // namespace tcg::cli
