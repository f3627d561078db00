#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "flipflop/noise.hpp"

namespace flipflop {

inline constexpr const char* map_csv_header =
    "delta_E_op_kVm,Vt_GHz,B0_T,target,mean_infidelity,std_error,mean_gate_time_ns,n_samples,seed";

// Cells are already formatted; numbers go through format12.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

void write_csv(std::ostream& os, const Table& t);
std::string to_csv(const Table& t);

// Array of objects, numeric-looking cells emitted as numbers.
std::string to_json_text(const Table& t);

Table map_table(const std::vector<MapRow>& rows);
std::vector<MapRow> read_map_csv(std::istream& is);

// Writes to `path`, or stdout when empty.
void write_text(const std::string& path, const std::string& text);

}  // namespace flipflop
