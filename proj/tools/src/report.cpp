#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "geophase/error.hpp"

namespace geophase::cli {

std::string format_number(double v) {
  if (!std::isfinite(v)) fail(ErrorKind::kNumeric, "report: non-finite value in output");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

}  // namespace

Json& Json::set(const std::string& key, Json value) {
  auto* obj = std::get_if<Object>(&v_);
  if (obj == nullptr) fail(ErrorKind::kInvalidArgument, "Json::set on a non-object");
  obj->emplace_back(key, std::move(value));
  return obj->back().second;
}

Json& Json::push(Json value) {
  auto* arr = std::get_if<Array>(&v_);
  if (arr == nullptr) fail(ErrorKind::kInvalidArgument, "Json::push on a non-array");
  arr->push_back(std::move(value));
  return arr->back();
}

std::string Json::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  out += '\n';
  return out;
}

void Json::write(std::string& out, int indent, int depth) const {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string end_pad(static_cast<std::size_t>(indent * depth), ' ');
  // indent == 0 writes everything on one line.
  const std::string open_nl = indent > 0 ? "\n" : "";
  const std::string sep = indent > 0 ? ",\n" : ", ";
  if (const auto* d = std::get_if<double>(&v_)) {
    out += format_number(*d);
  } else if (const auto* i = std::get_if<long long>(&v_)) {
    out += std::to_string(*i);
  } else if (const auto* b = std::get_if<bool>(&v_)) {
    out += *b ? "true" : "false";
  } else if (const auto* s = std::get_if<std::string>(&v_)) {
    out += quote(*s);
  } else if (const auto* a = std::get_if<Array>(&v_)) {
    if (a->empty()) {
      out += "[]";
      return;
    }
    out += "[" + open_nl;
    for (std::size_t k = 0; k < a->size(); ++k) {
      out += pad;
      (*a)[k].write(out, indent, depth + 1);
      out += k + 1 < a->size() ? sep : open_nl;
    }
    out += end_pad + "]";
  } else {
    const auto& o = std::get<Object>(v_);
    if (o.empty()) {
      out += "{}";
      return;
    }
    out += "{" + open_nl;
    for (std::size_t k = 0; k < o.size(); ++k) {
      out += pad + quote(o[k].first) + ": ";
      o[k].second.write(out, indent, depth + 1);
      out += k + 1 < o.size() ? sep : open_nl;
    }
    out += end_pad + "}";
  }
}

void CsvTable::comment(const std::string& key, const std::string& value) { header_.push_back("# " + key + ": " + value); }

void CsvTable::row(std::size_t index, const std::vector<double>& values) {
  if (values.size() + 1 != columns_.size())
    fail(ErrorKind::kInvalidArgument, "CsvTable::row: value count does not match the columns");
  std::string line = std::to_string(index);
  for (double v : values) line += "," + format_number(v);
  rows_.push_back(std::move(line));
}

std::string CsvTable::str() const {
  std::string out;
  for (const auto& h : header_) out += h + "\n";
  for (std::size_t k = 0; k < columns_.size(); ++k) out += (k ? "," : "") + columns_[k];
  out += "\n";
  for (const auto& r : rows_) out += r + "\n";
  return out;
}

std::string fringe_svg(const FringeCurve& c, const std::string& title) {
  constexpr double W = 640, H = 400, L = 60, R = 20, T = 40, B = 50;
  const double pw = W - L - R, ph = H - T - B;
  auto X = [&](double th) { return L + pw * th / std::numbers::pi; };
  auto Y = [&](double p) { return T + ph * (1.0 - p); };
  char buf[160];
  std::string s;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.0f %.0f\">\n",
                W, H, W, H);
  s += buf;
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" stroke=\"black\"/>\n", L, T,
                pw, ph);
  s += buf;
  for (int k = 0; k <= 4; ++k) {
    const double p = 0.25 * k;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" text-anchor=\"end\">%.2f</text>\n", L - 6, Y(p) + 4, p);
    s += buf;
  }
  const char* ticks[] = {"0", "π/4", "π/2", "3π/4", "π"};
  for (int k = 0; k <= 4; ++k) {
    std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\" text-anchor=\"middle\">%s</text>\n",
                  X(k * std::numbers::pi / 4), T + ph + 18, ticks[k]);
    s += buf;
  }
  std::snprintf(buf, sizeof buf, "<text x=\"%.1f\" y=\"%.1f\" font-size=\"13\" text-anchor=\"middle\">θ</text>\n",
                L + pw / 2, H - 10);
  s += buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"16\" y=\"%.1f\" font-size=\"13\" transform=\"rotate(-90 16 %.1f)\" "
                "text-anchor=\"middle\">P_g</text>\n",
                T + ph / 2, T + ph / 2);
  s += buf;
  s += "<text x=\"" + std::to_string(static_cast<int>(W / 2)) + "\" y=\"24\" font-size=\"14\" text-anchor=\"middle\">" +
       title + "</text>\n";

  s += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (std::size_t k = 0; k < c.theta_analytic.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", k ? " " : "", X(c.theta_analytic[k]), Y(c.p_analytic[k]));
    s += buf;
  }
  s += "\"/>\n";
  for (std::size_t k = 0; k < c.theta_numeric.size(); ++k) {
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3.5\" fill=\"#d62728\"/>\n",
                  X(c.theta_numeric[k]), Y(c.p_numeric[k]));
    s += buf;
  }
  s += "</svg>\n";
  return s;
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::kConfig, "cannot write '" + path + "'");
  out << content;
  if (!out) fail(ErrorKind::kConfig, "write failed for '" + path + "'");
}

}  // namespace geophase::cli
