#include "circline/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace circline {

std::string Report::num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void Report::add(const std::string& key, const std::string& value) {
  lines_.push_back(key + " = " + value);
}
void Report::add(const std::string& key, double value) { add(key, num(value)); }
void Report::add(const std::string& key, int value) {
  add(key, std::to_string(value));
}
void Report::add(const std::string& key, bool value) {
  add(key, std::string(value ? "true" : "false"));
}
void Report::add(const std::string& key, const Vec2& value) {
  add(key, num(value.x()) + " " + num(value.y()));
}
void Report::blank() { lines_.push_back(""); }

std::string Report::str() const {
  std::ostringstream out;
  for (const auto& l : lines_) out << l << "\n";
  return out.str();
}

void Report::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Error::Kind::Parse, "cannot write '" + path + "'");
  f << str();
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
  return buf;
}

}  // namespace circline
