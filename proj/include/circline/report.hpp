#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "circline/types.hpp"

namespace circline {

/// Line-oriented `key = value` report; deterministic bytes for identical
/// inputs (doubles formatted with %.12g).
class Report {
 public:
  void add(const std::string& key, const std::string& value);
  // keep literals from binding to the bool overload
  void add(const std::string& key, const char* value) { add(key, std::string(value)); }
  void add(const std::string& key, double value);
  void add(const std::string& key, int value);
  void add(const std::string& key, bool value);
  void add(const std::string& key, const Vec2& value);
  void blank();

  std::string str() const;
  void save(const std::string& path) const;

  static std::string num(double v);

 private:
  std::vector<std::string> lines_;
};

/// FNV-1a 64-bit hash, hex-encoded; used to fingerprint curve specs.
std::string fnv1a_hex(const std::string& data);

}  // namespace circline
