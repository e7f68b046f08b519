#include "config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void config_fail(const std::string& key, const std::string& why) {
  throw std::runtime_error("config error at key '" + key + "': " + why);
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config error: cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return from_string(buf.str());
}

Config Config::from_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config error: line " + std::to_string(lineno) +
                               " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) config_fail("(empty)", "missing key name");
    if (cfg.values_.count(key) != 0) config_fail(key, "duplicate key");
    cfg.values_[key] = value;
    cfg.used_[key] = false;
  }
  return cfg;
}

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

std::string Config::raw(const std::string& key) {
  auto it = values_.find(key);
  if (it == values_.end()) config_fail(key, "missing required key");
  used_[key] = true;
  return it->second;
}

std::string Config::get_string(const std::string& key) {
  const std::string v = raw(key);
  resolved_[key] = v;
  return v;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) {
  const std::string v = has(key) ? raw(key) : fallback;
  resolved_[key] = v;
  return v;
}

double Config::get_double(const std::string& key) {
  const std::string v = raw(key);
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) config_fail(key, "trailing characters in number '" + v + "'");
    resolved_[key] = format_double(x);
    return x;
  } catch (const std::invalid_argument&) {
    config_fail(key, "not a number: '" + v + "'");
  }
}

double Config::get_double(const std::string& key, double fallback) {
  if (!has(key)) {
    resolved_[key] = format_double(fallback);
    return fallback;
  }
  return get_double(key);
}

int Config::get_int(const std::string& key) {
  const double x = get_double(key);
  const int i = static_cast<int>(x);
  if (static_cast<double>(i) != x) config_fail(key, "not an integer");
  resolved_[key] = std::to_string(i);
  return i;
}

int Config::get_int(const std::string& key, int fallback) {
  if (!has(key)) {
    resolved_[key] = std::to_string(fallback);
    return fallback;
  }
  return get_int(key);
}

uint64_t Config::get_seed() {
  const int s = get_int("seed", 0);
  if (s < 0) config_fail("seed", "must be nonnegative");
  return static_cast<uint64_t>(s);
}

cylspec_complex Config::parse_complex(const std::string& text, const std::string& key) {
  const std::string v = trim(text);
  if (v.empty()) config_fail(key, "empty complex literal");
  // forms: a | bi | a+bi | a-bi (with 'i' or 'j' suffix)
  auto is_imag_tail = [](const std::string& s) {
    return !s.empty() && (s.back() == 'i' || s.back() == 'j');
  };
  try {
    if (is_imag_tail(v)) {
      // split at the last +/- that is not an exponent sign and not leading
      for (std::size_t p = v.size() - 1; p > 0; --p) {
        if ((v[p] == '+' || v[p] == '-') && v[p - 1] != 'e' && v[p - 1] != 'E') {
          const std::string re = trim(v.substr(0, p));
          std::string im = trim(v.substr(p));
          im.pop_back();  // strip i / j
          if (im == "+" || im == "-") im += "1";
          return {std::stod(re), std::stod(im)};
        }
      }
      std::string im = v;
      im.pop_back();
      if (im.empty() || im == "+" || im == "-") im += "1";
      return {0.0, std::stod(im)};
    }
    std::size_t pos = 0;
    const double re = std::stod(v, &pos);
    if (pos != v.size()) config_fail(key, "bad complex literal '" + v + "'");
    return {re, 0.0};
  } catch (const std::invalid_argument&) {
    config_fail(key, "bad complex literal '" + v + "'");
  }
}

cylspec_complex Config::get_complex(const std::string& key) {
  const cylspec_complex z = parse_complex(raw(key), key);
  resolved_[key] = format_double(z.re) + (z.im < 0 ? "" : "+") + format_double(z.im) + "i";
  return z;
}

std::vector<double> Config::get_double_list(const std::string& key) {
  const std::string v = raw(key);
  std::vector<double> out;
  std::string resolved;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) config_fail(key, "empty list element");
    try {
      out.push_back(std::stod(item));
    } catch (const std::invalid_argument&) {
      config_fail(key, "not a number: '" + item + "'");
    }
    if (!resolved.empty()) resolved += ",";
    resolved += format_double(out.back());
  }
  if (out.empty()) config_fail(key, "empty list");
  resolved_[key] = resolved;
  return out;
}

std::vector<cylspec_complex> Config::get_complex_list(const std::string& key) {
  const std::string v = raw(key);
  std::vector<cylspec_complex> out;
  std::string resolved;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(parse_complex(item, key));
    if (!resolved.empty()) resolved += ",";
    resolved += format_double(out.back().re) + (out.back().im < 0 ? "" : "+") +
                format_double(out.back().im) + "i";
  }
  if (out.empty()) config_fail(key, "empty list");
  resolved_[key] = resolved;
  return out;
}

std::vector<std::string> Config::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [key, used] : used_)
    if (!used) out.push_back(key);
  return out;
}

}  // namespace cli
