#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdrot/log_space.hpp"

namespace fdrot {

using ordered_json = nlohmann::ordered_json;

/// Log-space number as JSON: the log is authoritative, the linear value
/// is carried alongside when it is representable (null otherwise).
inline ordered_json log_value_json(double log_v) {
  ordered_json j;
  if (std::isfinite(log_v))
    j["log_value"] = log_v;
  else
    j["log_value"] = nullptr;  // -inf encodes an exact zero
  const double lin = std::exp(log_v);
  if (std::isfinite(lin))
    j["value"] = lin;
  else
    j["value"] = nullptr;
  return j;
}

inline double log_value_from_json(const ordered_json& j) {
  if (j.is_object()) {
    const auto& lv = j.at("log_value");
    return lv.is_null() ? kNegInf : lv.get<double>();
  }
  return std::log(j.get<double>());
}

/// Double as JSON, mapping non-finite values (JSON has no inf/nan) to null.
inline ordered_json finite_or_null(double v) {
  if (std::isfinite(v)) return ordered_json(v);
  return ordered_json(nullptr);
}

/// Shortest round-trip-exact decimal form, for CSV cells.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns)
      : columns_(std::move(columns)) {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (i) text_ += ',';
      text_ += columns_[i];
    }
    text_ += '\n';
  }

  void row(const std::vector<double>& values) {
    if (values.size() != columns_.size())
      throw std::invalid_argument("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) text_ += ',';
      text_ += fmt_double(values[i]);
    }
    text_ += '\n';
  }

  const std::string& text() const { return text_; }

 private:
  std::vector<std::string> columns_;
  std::string text_;
};

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  std::string text((std::istreambuf_iterator<char>(f)),
                   std::istreambuf_iterator<char>());
  return text;
}

}  // namespace fdrot
