#include "flipflop/io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "flipflop/config.hpp"

namespace flipflop {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw ConfigError("csv", "bad number '" + s + "'");
  return v;
}

}  // namespace

void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << "\n";
  }
}

std::string to_csv(const Table& t) {
  std::ostringstream os;
  write_csv(os, t);
  return os.str();
}

std::string to_json_text(const Table& t) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : t.rows) {
    nlohmann::json o = nlohmann::json::object();
    for (std::size_t i = 0; i < r.size() && i < t.header.size(); ++i) {
      const std::string& c = r[i];
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (!c.empty() && end == c.c_str() + c.size() && std::isfinite(v)) o[t.header[i]] = v;
      else if (c == "nan") o[t.header[i]] = nullptr;
      else o[t.header[i]] = c;
    }
    arr.push_back(o);
  }
  return arr.dump(2) + "\n";
}

Table map_table(const std::vector<MapRow>& rows) {
  Table t;
  t.header = split(map_csv_header);
  for (const auto& r : rows)
    t.add({format12(r.delta_E_op), format12(r.Vt_GHz), format12(r.B0), r.target, format12(r.stat.mean_infidelity),
           format12(r.stat.std_error), format12(r.stat.mean_gate_time), std::to_string(r.stat.n),
           std::to_string(r.seed)});
  return t;
}

std::vector<MapRow> read_map_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != map_csv_header) throw ConfigError("csv", "unexpected map header");
  std::vector<MapRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != 9) throw ConfigError("csv", "expected 9 columns");
    MapRow r;
    r.delta_E_op = parse_double(c[0]);
    r.Vt_GHz = parse_double(c[1]);
    r.B0 = parse_double(c[2]);
    r.target = c[3];
    r.stat.mean_infidelity = parse_double(c[4]);
    r.stat.std_error = parse_double(c[5]);
    r.stat.mean_gate_time = parse_double(c[6]);
    r.stat.n = std::stoi(c[7]);
    r.seed = std::stoull(c[8]);
    rows.push_back(r);
  }
  return rows;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("write to stdout failed");
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

}  // namespace flipflop
