#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace pilotnn {

// Flat key = value experiment configuration. Lines are `key = value`; blank
// lines and lines starting with # are skipped. Every file must carry
// schema_version = 1 and an experiment name. Typed accessors throw with the
// offending field path in the message; experiments validate all fields before
// producing any output.
class RunConfig {
 public:
  static RunConfig parse_file(const std::string& path);
  static RunConfig parse_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  // comma-separated list of doubles
  std::vector<double> get_double_list(const std::string& key) const;

  void set(const std::string& key, const std::string& value);
  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
  const std::string& raw(const std::string& key) const;
};

}  // namespace pilotnn
