#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tvdeblur/solver.hpp"

namespace tvdeblur {

/// Fixed trace CSV column order.
extern const char* const kTraceHeader;

/// Doubles are printed with %.17g so the file parses back losslessly; NaN
/// fields become empty cells.
std::string format_trace_row(const IterTrace& row);

/// Streaming writer; rows are appended and flushed as they arrive.
class TraceWriter {
 public:
  explicit TraceWriter(const std::string& path);
  ~TraceWriter();
  TraceWriter(const TraceWriter&) = delete;
  TraceWriter& operator=(const TraceWriter&) = delete;

  void write_row(const IterTrace& row);

 private:
  struct Impl;
  Impl* impl_;
};

void write_trace_csv(const std::string& path, const std::vector<IterTrace>& traces);
std::vector<IterTrace> read_trace_csv(const std::string& path);

/// Ordered key=value lines.
void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries);
std::vector<std::pair<std::string, std::string>> read_manifest(const std::string& path);

std::string format_double(double v);

}  // namespace tvdeblur
