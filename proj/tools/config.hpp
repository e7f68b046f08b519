#pragma once

#include <map>
#include <string>
#include <vector>

#include "cylspec/cylspec.h"

namespace cli {

// Key-value experiment configuration: one `key = value` per line, '#' comments.
// Lists are comma separated; complex numbers use the forms "0.3i", "1+2i",
// "-0.5", "0.1-0.2i". Every access (including applied defaults) is recorded so
// the manifest can echo the fully resolved configuration.
class Config {
 public:
  static Config load(const std::string& path);
  static Config from_string(const std::string& text);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key);
  std::string get_string(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key);
  double get_double(const std::string& key, double fallback);
  int get_int(const std::string& key);
  int get_int(const std::string& key, int fallback);
  uint64_t get_seed();
  cylspec_complex get_complex(const std::string& key);
  std::vector<double> get_double_list(const std::string& key);
  std::vector<cylspec_complex> get_complex_list(const std::string& key);

  // resolved key -> value strings, in deterministic (sorted) order
  const std::map<std::string, std::string>& resolved() const { return resolved_; }
  // keys present in the file but never consumed by the study
  std::vector<std::string> unused_keys() const;

  static cylspec_complex parse_complex(const std::string& text, const std::string& key);

 private:
  std::string raw(const std::string& key);

  std::map<std::string, std::string> values_;
  std::map<std::string, bool> used_;
  std::map<std::string, std::string> resolved_;
};

[[noreturn]] void config_fail(const std::string& key, const std::string& why);

}  // namespace cli
