#include "pilotnn/runconfig.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pilotnn {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_field(const std::string& key, const std::string& what) {
  throw std::invalid_argument("config field '" + key + "': " + what);
}

}  // namespace

RunConfig RunConfig::parse_string(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": empty key");
    cfg.kv_[key] = value;
  }
  if (cfg.get_int("schema_version", -1) != 1)
    throw std::invalid_argument("config field 'schema_version': must be 1");
  return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

bool RunConfig::has(const std::string& key) const { return kv_.count(key) > 0; }

const std::string& RunConfig::raw(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end()) bad_field(key, "missing");
  return it->second;
}

std::string RunConfig::get_string(const std::string& key) const {
  return raw(key);
}

std::string RunConfig::get_string(const std::string& key,
                                  const std::string& fallback) const {
  return has(key) ? kv_.at(key) : fallback;
}

long long RunConfig::get_int(const std::string& key) const {
  const std::string& v = raw(key);
  errno = 0;
  char* end = nullptr;
  const long long r = std::strtoll(v.c_str(), &end, 10);
  if (errno != 0 || end == v.c_str() || *end != '\0')
    bad_field(key, "expected an integer, got '" + v + "'");
  return r;
}

long long RunConfig::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

double RunConfig::get_double(const std::string& key) const {
  const std::string& v = raw(key);
  errno = 0;
  char* end = nullptr;
  const double r = std::strtod(v.c_str(), &end);
  if (errno != 0 || end == v.c_str() || *end != '\0')
    bad_field(key, "expected a number, got '" + v + "'");
  return r;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::uint64_t RunConfig::get_u64(const std::string& key,
                                 std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string& v = raw(key);
  errno = 0;
  char* end = nullptr;
  const unsigned long long r = std::strtoull(v.c_str(), &end, 10);
  if (errno != 0 || end == v.c_str() || *end != '\0')
    bad_field(key, "expected an unsigned integer, got '" + v + "'");
  return static_cast<std::uint64_t>(r);
}

std::vector<double> RunConfig::get_double_list(const std::string& key) const {
  const std::string& v = raw(key);
  std::vector<double> out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) bad_field(key, "empty element in list '" + v + "'");
    errno = 0;
    char* end = nullptr;
    const double r = std::strtod(t.c_str(), &end);
    if (errno != 0 || end == t.c_str() || *end != '\0')
      bad_field(key, "expected a number, got '" + t + "'");
    out.push_back(r);
  }
  if (out.empty()) bad_field(key, "expected a non-empty list");
  return out;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  kv_[key] = value;
}

}  // namespace pilotnn
