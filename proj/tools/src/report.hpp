#pragma once

// Result serialization: ordered JSON, CSV with a commented header, SVG fringe plots.
// Every number is written as %.16e (17 significant digits, round-trip exact).

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace geophase::cli {

std::string format_number(double v);

class Json {
 public:
  using Object = std::vector<std::pair<std::string, Json>>;
  using Array = std::vector<Json>;

  Json() : v_(Object{}) {}
  Json(double v) : v_(v) {}
  Json(int v) : v_(static_cast<long long>(v)) {}
  Json(long long v) : v_(v) {}
  Json(std::size_t v) : v_(static_cast<long long>(v)) {}
  Json(bool v) : v_(v) {}
  Json(const char* s) : v_(std::string(s)) {}
  Json(std::string s) : v_(std::move(s)) {}
  Json(Array a) : v_(std::move(a)) {}

  static Json object() { return Json(); }
  static Json array() { return Json(Array{}); }

  /// Appends a key (objects keep insertion order).
  Json& set(const std::string& key, Json value);
  Json& push(Json value);

  /// Throws ErrorKind::kNumeric if any number is not finite.
  std::string dump(int indent = 2) const;

 private:
  void write(std::string& out, int indent, int depth) const;
  std::variant<double, long long, bool, std::string, Array, Object> v_;
};

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  /// "# key: value" lines written before the column header.
  void comment(const std::string& key, const std::string& value);
  void comment(const std::string& key, double value) { comment(key, format_number(value)); }

  /// The first column may be an integer index; it is written without exponent.
  void row(std::size_t index, const std::vector<double>& values);

  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> header_;
  std::vector<std::string> rows_;
};

struct FringeCurve {
  std::vector<double> theta_analytic, p_analytic;
  std::vector<double> theta_numeric, p_numeric;
};

/// P_g against theta: analytic polyline, numeric points.
std::string fringe_svg(const FringeCurve& c, const std::string& title);

/// Writes `content` to `path`, creating parent directories.
void write_file(const std::string& path, const std::string& content);

}  // namespace geophase::cli
