#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "echosim/bits.hpp"
#include "echosim/event_queue.hpp"
#include "echosim/geometry.hpp"
#include "echosim/media.hpp"
#include "echosim/messages.hpp"
#include "echosim/rng.hpp"
#include "echosim/trace.hpp"

namespace echosim {

using NodeId = std::uint32_t;

// One signal put on a broadcast medium: who, what bits, how strong, when.
struct Transmission {
  NodeId sender = 0;
  Medium medium = Medium::Radio;
  BitString payload;
  double power = 1.0;
  double emit_time = 0.0;
  Envelope envelope;
};

// The arrival window of one transmission at one receiver.
// arrival_start = emit_time + distance/speed(medium);
// arrival_end   = arrival_start + duration.
struct Reception {
  NodeId receiver = 0;
  std::size_t tx_index = 0;  // into Simulation::transmissions()
  double arrival_start = 0.0;
  double arrival_end = 0.0;
  BitString payload_as_received;  // capture-resolved at delivery
};

// A signal as seen by one receiver, for capture resolution.
struct AirSignal {
  double arrival_start = 0.0;
  double arrival_end = 0.0;
  double power = 1.0;
  const BitString* payload = nullptr;
};

// Capture model: at every instant the receiver hears the bit of the strictly
// strongest signal on the air; a tie for strongest garbles that bit. Returns
// what the target's payload sounds like through all overlapping signals
// (`signals` must include the target itself).
BitString resolve_overlap(const AirSignal& target, std::span<const AirSignal> signals);

// Receptions of one transmission at every node other than the sender.
std::vector<Reception> make_receptions(const Transmission& tx,
                                       std::span<const std::pair<NodeId, Point>> nodes,
                                       const MediaParams& media);

class Simulation;

class NodeBehavior {
 public:
  virtual ~NodeBehavior() = default;
  virtual void on_start(Simulation&, NodeId) {}
  // Fired at a signal's arrival_start, while the payload is still on the air.
  virtual void on_signal_start(Simulation&, NodeId, const Reception&, const Transmission&) {}
  // Fired at arrival_end with the capture-resolved payload.
  virtual void on_reception(Simulation&, NodeId, const Reception&, const Transmission&) {}
};

// Deterministic single-threaded event loop over a 2-D broadcast physical
// layer. Signals expand without attenuation, so every node receives every
// transmission; power matters only for capture resolution.
class Simulation {
 public:
  Simulation(MediaParams media, std::uint64_t seed, double horizon);

  NodeId add_node(std::string label, Point position, NodeBehavior* behavior);

  // Strict scheduling: time must not precede the current event.
  void schedule(double time, EventQueue::Fn fn);

  // Queues the emission. A cheating streamer may hand in an emit_time just
  // behind the current event; the emission event is clamped to now while the
  // arrival arithmetic keeps the exact emit_time.
  void schedule_transmission(Transmission tx);

  // Calls on_start for every node, then drains events up to the horizon.
  void run();

  double now() const { return now_; }
  double horizon() const { return horizon_; }
  SeededRng& rng() { return rng_; }
  const MediaParams& media() const { return media_; }

  std::size_t node_count() const { return nodes_.size(); }
  const std::string& node_label(NodeId id) const { return nodes_.at(id).label; }
  Point node_position(NodeId id) const { return nodes_.at(id).position; }

  const std::deque<Transmission>& transmissions() const { return txs_; }
  Trace& trace() { return trace_; }
  const Trace& trace() const { return trace_; }

  void record(TraceKind kind, NodeId node, nlohmann::ordered_json detail);
  void record(TraceKind kind, const std::string& node, nlohmann::ordered_json detail);

 private:
  struct NodeEntry {
    std::string label;
    Point position;
    NodeBehavior* behavior;
  };

  void emit_now(std::size_t tx_index);
  void deliver(std::size_t reception_index);

  MediaParams media_;
  SeededRng rng_;
  double horizon_;
  double now_ = 0.0;
  EventQueue queue_;
  std::vector<NodeEntry> nodes_;
  // deques: behaviors hold references into these across their own
  // schedule_transmission calls, so appends must not relocate
  std::deque<Transmission> txs_;
  std::deque<Reception> receptions_;
  // signal history per (receiver, medium), for capture resolution
  std::map<std::pair<NodeId, int>, std::vector<std::size_t>> air_;
  Trace trace_;
};

}  // namespace echosim
