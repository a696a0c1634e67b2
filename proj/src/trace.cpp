#include "echosim/trace.hpp"

#include <cstdio>
#include <ostream>

namespace echosim {

const char* to_string(TraceKind k) {
  switch (k) {
    case TraceKind::Emit: return "emit";
    case TraceKind::Receive: return "receive";
    case TraceKind::StateTransition: return "state-transition";
    case TraceKind::Verdict: return "verdict";
  }
  return "?";
}

std::string render_time(double t) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", t);
  return buf;
}

std::string render_record(const TraceRecord& rec) {
  // The time field is rendered by hand to pin the 17-significant-digit form;
  // the rest goes through the JSON serializer with insertion order kept.
  nlohmann::ordered_json tail;
  tail["node"] = rec.node;
  tail["kind"] = to_string(rec.kind);
  tail["detail"] = rec.detail;
  std::string body = tail.dump();
  // splice: {"time":<t>,<rest of tail object>
  return "{\"time\":" + render_time(rec.time) + "," + body.substr(1);
}

void emit_trace(const Trace& trace, std::ostream& out) {
  for (const TraceRecord& rec : trace.records) out << render_record(rec) << '\n';
}

}  // namespace echosim
