#include "mola/csv.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <utility>

#include "mola/errors.hpp"
#include "mola/textio.hpp"

namespace mola {

std::vector<TrajectoryRow> thin_rows(const std::vector<TrajectoryRow>& rows, int every) {
  if (every <= 1) return rows;
  std::vector<TrajectoryRow> out;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].iter % every == 0 || i + 1 == rows.size()) out.push_back(rows[i]);
  return out;
}

void write_csv_header(std::ostream& out) { out << kCsvHeader << '\n'; }

void write_csv_rows(std::ostream& out, const CsvSeries& series) {
  for (const TrajectoryRow& r : series.rows) {
    out << series.method << ',' << series.repeat << ',' << r.iter << ',' << r.field_evals << ','
        << format_double(r.cpu_s) << ',' << format_double(r.wall_s) << ','
        << format_double(r.distance) << ',';
    if (r.gap) out << format_double(*r.gap);
    out << '\n';
  }
}

void write_csv(std::ostream& out, const std::vector<CsvSeries>& series) {
  write_csv_header(out);
  for (const CsvSeries& s : series) write_csv_rows(out, s);
}

void write_csv_file(const std::string& path, const std::vector<CsvSeries>& series) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  write_csv(out, series);
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<CsvSeries> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("csv: missing header");
  if (trim(line) != kCsvHeader) throw ParseError("csv: unexpected header '" + line + "'");
  std::vector<CsvSeries> out;
  std::map<std::pair<std::string, int>, std::size_t> index;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 8)
      throw ParseError("csv line " + std::to_string(line_no) + ": expected 8 fields");
    try {
      TrajectoryRow r;
      const int repeat = static_cast<int>(parse_int_field(f[1], "repeat"));
      r.iter = parse_int_field(f[2], "iter");
      r.field_evals = parse_int_field(f[3], "field_evals");
      r.cpu_s = parse_double_field(f[4], "cpu_s");
      r.wall_s = parse_double_field(f[5], "wall_s");
      r.distance = parse_double_field(f[6], "distance");
      if (!trim(f[7]).empty()) r.gap = parse_double_field(f[7], "gap");
      const auto key = std::make_pair(f[0], repeat);
      auto it = index.find(key);
      if (it == index.end()) {
        it = index.emplace(key, out.size()).first;
        out.push_back({f[0], repeat, {}});
      }
      out[it->second].rows.push_back(r);
    } catch (const ParseError& e) {
      throw ParseError("csv line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<CsvSeries> read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_csv(in);
}

}  // namespace mola
