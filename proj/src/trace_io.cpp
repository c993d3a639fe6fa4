#include "tvdeblur/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "tvdeblur/errors.hpp"

namespace tvdeblur {

const char* const kTraceHeader =
    "k,objective,lagrangian,F,res,res_i,err,snr,dual_ratio,subgrad_ratio,tu_minus_v";

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {
std::string cell(double v) { return std::isnan(v) ? std::string() : format_double(v); }

double parse_cell(const std::string& s) {
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::stod(s);
}
}  // namespace

std::string format_trace_row(const IterTrace& row) {
  std::ostringstream os;
  os << row.k << ',' << cell(row.objective) << ',' << cell(row.lagrangian) << ','
     << cell(row.F_value) << ',' << cell(row.residual) << ','
     << cell(row.residual_inertial) << ',' << cell(row.real_error) << ','
     << cell(row.snr) << ',' << cell(row.dual_ratio) << ','
     << cell(row.subgrad_ratio) << ',' << cell(row.tu_minus_v);
  return os.str();
}

struct TraceWriter::Impl {
  std::ofstream out;
};

TraceWriter::TraceWriter(const std::string& path) : impl_(new Impl) {
  impl_->out.open(path);
  if (!impl_->out) {
    delete impl_;
    throw FormatError("trace: cannot open '" + path + "' for writing");
  }
  impl_->out << kTraceHeader << '\n';
  impl_->out.flush();
}

TraceWriter::~TraceWriter() { delete impl_; }

void TraceWriter::write_row(const IterTrace& row) {
  impl_->out << format_trace_row(row) << '\n';
  impl_->out.flush();
}

void write_trace_csv(const std::string& path, const std::vector<IterTrace>& traces) {
  TraceWriter w(path);
  for (const auto& row : traces) w.write_row(row);
}

std::vector<IterTrace> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("trace: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader)
    throw FormatError("trace: bad header in '" + path + "'");

  std::vector<IterTrace> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        cells.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    cells.push_back(cur);
    if (cells.size() != 11) throw FormatError("trace: bad row in '" + path + "'");
    IterTrace r;
    r.k = std::stoi(cells[0]);
    r.objective = parse_cell(cells[1]);
    r.lagrangian = parse_cell(cells[2]);
    r.F_value = parse_cell(cells[3]);
    r.residual = parse_cell(cells[4]);
    r.residual_inertial = parse_cell(cells[5]);
    r.real_error = parse_cell(cells[6]);
    r.snr = parse_cell(cells[7]);
    r.dual_ratio = parse_cell(cells[8]);
    r.subgrad_ratio = parse_cell(cells[9]);
    r.tu_minus_v = parse_cell(cells[10]);
    rows.push_back(r);
  }
  return rows;
}

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream out(path);
  if (!out) throw FormatError("manifest: cannot open '" + path + "' for writing");
  for (const auto& [k, v] : entries) out << k << '=' << v << '\n';
}

std::vector<std::pair<std::string, std::string>> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("manifest: cannot open '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("manifest: bad line '" + line + "'");
    out.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return out;
}

}  // namespace tvdeblur
