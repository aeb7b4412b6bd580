#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "bsep/version.hpp"

namespace bsep::cli {

using nlohmann::json;

namespace {

std::string number(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string cell(const json& v, bool csv) {
  if (v.is_null()) return csv ? "" : "-";
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) return number(v.get<double>(), csv ? 17 : 12);
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string header_line(const Report& r) {
  return "bsep " + std::string(kVersion) + " " + r.command;
}

}  // namespace

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string render(const Report& r, Format f) {
  std::ostringstream os;
  if (f == Format::json) {
    json doc{{"tool", "bsep"},
             {"version", std::string(kVersion)},
             {"command", r.command},
             {"config", r.config},
             {"rows", r.rows},
             {"summary", r.summary},
             {"status", r.status}};
    os << doc.dump(2) << '\n';
    return os.str();
  }

  if (f == Format::csv) {
    os << "# " << header_line(r) << '\n';
    os << "# config " << r.config.dump() << '\n';
    for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
    os << '\n';
    for (const auto& row : r.rows) {
      for (std::size_t i = 0; i < r.columns.size(); ++i) {
        os << (i ? "," : "") << csv_field(cell(row.value(r.columns[i], json()), true));
      }
      os << '\n';
    }
    return os.str();
  }

  os << header_line(r) << '\n';
  os << "config " << r.config.dump() << "\n\n";
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width(r.columns.size());
  for (std::size_t i = 0; i < r.columns.size(); ++i) width[i] = r.columns[i].size();
  for (const auto& row : r.rows) {
    auto& line = cells.emplace_back();
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
      line.push_back(cell(row.value(r.columns[i], json()), false));
      width[i] = std::max(width[i], line.back().size());
    }
  }
  auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      os << line[i];
      if (i + 1 < line.size()) os << std::string(width[i] - line[i].size() + 2, ' ');
    }
    os << '\n';
  };
  emit(r.columns);
  for (const auto& line : cells) emit(line);
  if (!r.summary.empty()) {
    os << '\n';
    for (const auto& [key, value] : r.summary.items()) os << key << ": " << cell(value, false) << '\n';
  }
  return os.str();
}

}  // namespace bsep::cli
