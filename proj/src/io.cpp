#include "adsp/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstring>
#include <sstream>

namespace adsp {

namespace {

void require_little_endian() {
  const std::uint32_t probe = 1;
  unsigned char byte;
  std::memcpy(&byte, &probe, 1);
  if (byte != 1) throw io_error("snapshot format requires a little-endian host");
}

template <typename T>
void write_raw(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& in, const std::string& path, const char* what) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw io_error(path + ": truncated snapshot while reading " + what);
  return v;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
                    c == '.' || c == '-';
    if (!ok) return false;
  }
  return true;
}

} // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_snapshot(const std::string& path, const Field& f) {
  require_little_endian();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error(path + ": cannot open for writing");

  out.write("ADSP", 4);
  write_raw(out, kSnapshotVersion);
  write_raw(out, static_cast<std::uint32_t>(f.grid.d));
  write_raw(out, static_cast<std::uint32_t>(f.grid.n1));
  write_raw(out, static_cast<std::uint32_t>(f.grid.n2));
  write_raw(out, f.grid.l1);
  write_raw(out, f.grid.l2);
  write_raw(out, static_cast<std::uint8_t>(f.domain == Domain::Space ? 0 : 1));

  // Column-major with x1 down the columns is exactly "x1 fastest", so the
  // payload is the raw buffer.
  out.write(reinterpret_cast<const char*>(f.values.data()),
            static_cast<std::streamsize>(sizeof(Complex) * f.values.size()));
  if (!out) throw io_error(path + ": write failed");
}

Field read_snapshot(const std::string& path) {
  require_little_endian();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error(path + ": cannot open for reading");

  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "ADSP", 4) != 0)
    throw io_error(path + ": not a field snapshot (bad magic)");
  const auto version = read_raw<std::uint32_t>(in, path, "version");
  if (version != kSnapshotVersion)
    throw io_error(path + ": unsupported snapshot version " +
                   std::to_string(version));
  const auto d = read_raw<std::uint32_t>(in, path, "dimension");
  const auto n1 = read_raw<std::uint32_t>(in, path, "n1");
  const auto n2 = read_raw<std::uint32_t>(in, path, "n2");
  const auto l1 = read_raw<double>(in, path, "l1");
  const auto l2 = read_raw<double>(in, path, "l2");
  const auto dom = read_raw<std::uint8_t>(in, path, "domain");
  if (dom > 1) throw io_error(path + ": invalid domain tag");

  try {
    GridSpec grid(static_cast<int>(d), static_cast<Eigen::Index>(n1),
                  static_cast<Eigen::Index>(n2), l1, l2);
    Field f(grid, dom == 0 ? Domain::Space : Domain::Frequency);
    in.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(sizeof(Complex) * f.values.size()));
    if (!in) throw io_error(path + ": truncated snapshot payload");
    in.peek();
    if (!in.eof()) throw io_error(path + ": trailing bytes after payload");
    return f;
  } catch (const contract_error& e) {
    throw io_error(path + ": invalid grid header (" + std::string(e.what()) +
                   ")");
  } catch (const std::invalid_argument& e) {
    throw io_error(path + ": invalid grid header (" + std::string(e.what()) +
                   ")");
  }
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error(path + ": cannot open config");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_string(text.str(), path);
}

Config Config::parse_string(const std::string& text,
                            const std::string& origin) {
  Config cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;

    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw config_error(origin + ":" + std::to_string(lineno) +
                         ": expected `key = value`");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (!valid_key(key))
      throw config_error(origin + ":" + std::to_string(lineno) +
                         ": invalid key `" + key + "`");
    if (value.empty())
      throw config_error(origin + ":" + std::to_string(lineno) +
                         ": missing value for `" + key + "`");
    const auto [it, inserted] = cfg.entries_.emplace(key, Entry{value, lineno});
    if (!inserted)
      throw config_error(origin + ":" + std::to_string(lineno) +
                         ": duplicate key `" + key + "` (first defined at line " +
                         std::to_string(it->second.line) + ")");
    cfg.order_.push_back(key);
  }
  return cfg;
}

bool Config::has(const std::string& key) const {
  return entries_.count(key) != 0;
}

const Config::Entry& Config::require(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end())
    throw config_error(origin_ + ": missing required key `" + key + "`");
  it->second.read = true;
  return it->second;
}

void Config::fail(const std::string& key, const Entry& e,
                  const std::string& what) const {
  throw config_error(origin_ + ":" + std::to_string(e.line) + ": key `" + key +
                     "`: " + what);
}

std::string Config::get_string(const std::string& key) const {
  return require(key).value;
}

std::string Config::get_string(const std::string& key,
                               const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const {
  const Entry& e = require(key);
  double out = 0.0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc{} || res.ptr != last)
    fail(key, e, "cannot parse `" + e.value + "` as a real number");
  return out;
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long Config::get_int(const std::string& key) const {
  const Entry& e = require(key);
  long long out = 0;
  const char* first = e.value.data();
  const char* last = first + e.value.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc{} || res.ptr != last)
    fail(key, e, "cannot parse `" + e.value + "` as an integer");
  return out;
}

long long Config::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const Entry& e = require(key);
  std::string v = e.value;
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  fail(key, e, "cannot parse `" + e.value + "` as a boolean");
}

std::vector<std::string> Config::unread_keys() const {
  std::vector<std::string> out;
  for (const std::string& key : order_)
    if (!entries_.at(key).read) out.push_back(key);
  return out;
}

std::string Config::serialize() const {
  std::ostringstream out;
  for (const std::string& key : order_)
    out << key << " = " << entries_.at(key).value << "\n";
  return out.str();
}

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& columns)
    : path_(path), n_columns_(columns.size()), out_(path) {
  if (!out_) throw io_error(path + ": cannot open for writing");
  for (std::size_t i = 0; i < columns.size(); ++i)
    out_ << (i ? "," : "") << columns[i];
  out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != n_columns_)
    throw std::logic_error(path_ + ": row width does not match header");
  for (std::size_t i = 0; i < values.size(); ++i)
    out_ << (i ? "," : "") << format_double(values[i]);
  out_ << "\n";
  out_.flush(); // keep partial series on disk if the experiment aborts
}

void Summary::add(const std::string& key, const std::string& value) {
  items_.emplace_back(key, value);
}

void Summary::add(const std::string& key, double value) {
  items_.emplace_back(key, format_double(value));
}

void Summary::add(const std::string& key, bool value) {
  items_.emplace_back(key, value ? "true" : "false");
}

void Summary::add(const std::string& key, long long value) {
  items_.emplace_back(key, std::to_string(value));
}

void Summary::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw io_error(path + ": cannot open for writing");
  for (const auto& [key, value] : items_)
    out << key << " = " << value << "\n";
  if (!out) throw io_error(path + ": write failed");
}

} // namespace adsp
