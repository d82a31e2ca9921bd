#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mola/metrics.hpp"

namespace mola {

/// Rows of one (method, repeat) pair as stored in a trajectory CSV.
struct CsvSeries {
  std::string method;
  int repeat = 0;
  std::vector<TrajectoryRow> rows;

  bool operator==(const CsvSeries&) const = default;
};

inline constexpr const char* kCsvHeader = "method,repeat,iter,field_evals,cpu_s,wall_s,distance,gap";

/// Keeps iteration 0, every `every`-th row and the last row.
std::vector<TrajectoryRow> thin_rows(const std::vector<TrajectoryRow>& rows, int every);

void write_csv_header(std::ostream& out);
void write_csv_rows(std::ostream& out, const CsvSeries& series);
void write_csv(std::ostream& out, const std::vector<CsvSeries>& series);
void write_csv_file(const std::string& path, const std::vector<CsvSeries>& series);

/// Groups rows by (method, repeat) in order of first appearance.
std::vector<CsvSeries> read_csv(std::istream& in);
std::vector<CsvSeries> read_csv_file(const std::string& path);

}  // namespace mola
