#pragma once

// Serialization: binary field snapshots, the flat key-value experiment
// config format, and CSV/summary emitters. Floating-point values are
// written in shortest round-trip decimal form so configs and reports
// reproduce the binary doubles bit for bit.
//
// Snapshot layout (little endian): magic "ADSP", version u32, d u32,
// n1 u32, n2 u32, l1 f64, l2 f64, domain u8 (0 space / 1 frequency),
// then n1*n2 (re, im) f64 pairs with the x1 index fastest.

#include "adsp/grid.hpp"

#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace adsp {

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Config-file violations; messages carry "path:line:".
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(const std::string& path, const Field& f);
Field read_snapshot(const std::string& path);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

// Flat `key = value` lines with dotted section names (grid.n1 = 512),
// '#' comments, and no nesting. Typed getters convert on demand and report
// the defining line on conversion failures; keys read at least once are
// tracked so drivers can flag typos in leftover keys.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text,
                             const std::string& origin = "<config>");

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  std::vector<std::string> unread_keys() const;
  std::string serialize() const; // round-trips raw values verbatim

 private:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool read = false;
  };
  std::string origin_;
  std::map<std::string, Entry> entries_;
  std::vector<std::string> order_;

  const Entry& require(const std::string& key) const;
  [[noreturn]] void fail(const std::string& key, const Entry& e,
                         const std::string& what) const;
};

// One CSV file with a fixed header; numeric cells use format_double.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::size_t n_columns_;
  std::ofstream out_;
};

// Line-oriented `key = value` summary, written in insertion order.
class Summary {
 public:
  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  void add(const std::string& key, bool value);
  void add(const std::string& key, long long value);
  void write(const std::string& path) const;
  const std::vector<std::pair<std::string, std::string>>& items() const {
    return items_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> items_;
};

} // namespace adsp
