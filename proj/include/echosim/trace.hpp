#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace echosim {

enum class TraceKind { Emit, Receive, StateTransition, Verdict };

const char* to_string(TraceKind k);

// One structured record of something that happened in a run. Records are
// appended in event order, so times are nondecreasing.
struct TraceRecord {
  double time = 0.0;
  std::string node;
  TraceKind kind = TraceKind::StateTransition;
  nlohmann::ordered_json detail;
};

struct Trace {
  std::vector<TraceRecord> records;

  bool empty() const { return records.empty(); }
  std::size_t size() const { return records.size(); }
};

// Time rendered with 17 significant digits; round-trips through strtod.
std::string render_time(double t);

// One JSON object per line, stable field order, no header.
void emit_trace(const Trace& trace, std::ostream& out);

std::string render_record(const TraceRecord& rec);

}  // namespace echosim
