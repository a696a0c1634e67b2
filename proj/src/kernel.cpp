#include "echosim/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace echosim {

namespace {

// Interval decomposition of the target window: between consecutive signal
// boundaries the covering set is constant, so the dominant signal is decided
// once per interval instead of once per bit.
struct Dominant {
  const AirSignal* signal = nullptr;  // nullptr: tie for strongest -> garble
  bool tie = false;
};

Dominant dominant_in(std::span<const AirSignal> signals, double lo, double hi) {
  Dominant d;
  double best = -1.0;
  for (const AirSignal& s : signals) {
    if (!(s.arrival_start <= lo && s.arrival_end >= hi)) continue;
    if (s.power > best) {
      best = s.power;
      d.signal = &s;
      d.tie = false;
    } else if (s.power == best) {
      d.tie = true;
    }
  }
  if (d.tie) d.signal = nullptr;
  return d;
}

std::uint8_t bit_at(const AirSignal& s, double t) {
  const std::size_t n = s.payload->size();
  const double period = (s.arrival_end - s.arrival_start) / static_cast<double>(n);
  auto idx = static_cast<std::ptrdiff_t>(std::floor((t - s.arrival_start) / period));
  idx = std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(n) - 1);
  return s.payload->bits[static_cast<std::size_t>(idx)];
}

}  // namespace

BitString resolve_overlap(const AirSignal& target, std::span<const AirSignal> signals) {
  const std::size_t n = target.payload->size();
  BitString heard;
  heard.bits.resize(n);

  // Boundaries inside the target window where the covering set can change.
  std::vector<double> cuts;
  cuts.push_back(target.arrival_start);
  cuts.push_back(target.arrival_end);
  for (const AirSignal& s : signals) {
    if (s.arrival_end <= target.arrival_start || s.arrival_start >= target.arrival_end) continue;
    if (s.arrival_start > target.arrival_start) cuts.push_back(s.arrival_start);
    if (s.arrival_end < target.arrival_end) cuts.push_back(s.arrival_end);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double period = (target.arrival_end - target.arrival_start) / static_cast<double>(n);
  std::size_t k = 0;
  for (std::size_t c = 0; c + 1 < cuts.size() && k < n; ++c) {
    const double lo = cuts[c];
    const double hi = cuts[c + 1];
    const Dominant dom = dominant_in(signals, lo, hi);
    // Bits whose midpoint falls in [lo, hi).
    while (k < n) {
      const double mid = target.arrival_start + (static_cast<double>(k) + 0.5) * period;
      if (mid < lo || mid >= hi) break;
      heard.bits[k] = dom.signal ? bit_at(*dom.signal, mid) : kGarbleBit;
      ++k;
    }
  }
  return heard;
}

std::vector<Reception> make_receptions(const Transmission& tx,
                                       std::span<const std::pair<NodeId, Point>> nodes,
                                       const MediaParams& media) {
  const double speed = media.speed(tx.medium);
  const double duration =
      transmission_duration(static_cast<double>(tx.payload.size()), media.bandwidth(tx.medium));

  Point sender_pos{};
  for (const auto& [id, pos] : nodes)
    if (id == tx.sender) sender_pos = pos;

  std::vector<Reception> out;
  for (const auto& [id, pos] : nodes) {
    if (id == tx.sender) continue;
    Reception r;
    r.receiver = id;
    r.arrival_start = tx.emit_time + propagation_delay(distance(sender_pos, pos), speed);
    r.arrival_end = r.arrival_start + duration;
    r.payload_as_received = tx.payload;
    out.push_back(std::move(r));
  }
  return out;
}

Simulation::Simulation(MediaParams media, std::uint64_t seed, double horizon)
    : media_(media), rng_(seed), horizon_(horizon) {
  media_.validate();
}

NodeId Simulation::add_node(std::string label, Point position, NodeBehavior* behavior) {
  nodes_.push_back(NodeEntry{std::move(label), position, behavior});
  return static_cast<NodeId>(nodes_.size() - 1);
}

void Simulation::schedule(double time, EventQueue::Fn fn) {
  if (time < now_) throw std::logic_error("schedule: event time precedes current event");
  queue_.push(time, std::move(fn));
}

void Simulation::schedule_transmission(Transmission tx) {
  if (tx.payload.empty()) throw InvalidParameterError("transmission: payload must be >= 1 bit");
  if (!(tx.power > 0)) throw InvalidParameterError("transmission: power must be > 0");
  if (tx.emit_time < 0) throw InvalidParameterError("transmission: emit_time must be >= 0");
  txs_.push_back(std::move(tx));
  const std::size_t index = txs_.size() - 1;
  queue_.push(std::max(txs_[index].emit_time, now_), [index](Simulation& sim) { sim.emit_now(index); });
}

void Simulation::emit_now(std::size_t tx_index) {
  const Transmission& tx = txs_[tx_index];
  const double duration =
      transmission_duration(static_cast<double>(tx.payload.size()), media_.bandwidth(tx.medium));

  record(TraceKind::Emit, tx.sender,
         {{"tx", tx_index},
          {"msg", to_string(tx.envelope.kind)},
          {"identity", tx.envelope.identity.value},
          {"medium", to_string(tx.medium)},
          {"bits", tx.payload.size()},
          {"power", tx.power},
          {"t_emit", tx.emit_time},
          {"duration", duration}});

  std::vector<std::pair<NodeId, Point>> placed;
  placed.reserve(nodes_.size());
  for (NodeId id = 0; id < nodes_.size(); ++id) placed.emplace_back(id, nodes_[id].position);

  for (Reception& r : make_receptions(tx, placed, media_)) {
    r.tx_index = tx_index;
    receptions_.push_back(std::move(r));
    const std::size_t ri = receptions_.size() - 1;
    const Reception& stored = receptions_[ri];
    air_[{stored.receiver, static_cast<int>(tx.medium)}].push_back(ri);
    queue_.push(std::max(stored.arrival_start, now_), [ri](Simulation& sim) {
      const Reception& rec = sim.receptions_[ri];
      NodeBehavior* b = sim.nodes_[rec.receiver].behavior;
      if (b) b->on_signal_start(sim, rec.receiver, rec, sim.txs_[rec.tx_index]);
    });
    queue_.push(std::max(stored.arrival_end, now_), [ri](Simulation& sim) { sim.deliver(ri); });
  }
}

void Simulation::deliver(std::size_t reception_index) {
  Reception& r = receptions_[reception_index];
  const Transmission& tx = txs_[r.tx_index];

  // Resolve against every same-medium signal this receiver has been exposed
  // to. Anything that could overlap has already been emitted: an emission at
  // or after this arrival_end cannot reach back into the window.
  const auto& indices = air_.at({r.receiver, static_cast<int>(tx.medium)});
  std::vector<AirSignal> signals;
  signals.reserve(indices.size());
  std::size_t target_slot = 0;
  for (std::size_t ri : indices) {
    const Reception& other = receptions_[ri];
    const bool overlaps =
        !(other.arrival_end <= r.arrival_start || other.arrival_start >= r.arrival_end);
    if (!overlaps && ri != reception_index) continue;
    if (ri == reception_index) target_slot = signals.size();
    signals.push_back(AirSignal{other.arrival_start, other.arrival_end,
                                txs_[other.tx_index].power, &txs_[other.tx_index].payload});
  }

  r.payload_as_received = resolve_overlap(signals[target_slot], signals);
  const bool clean = r.payload_as_received == tx.payload;

  record(TraceKind::Receive, r.receiver,
         {{"tx", r.tx_index},
          {"from", node_label(tx.sender)},
          {"msg", to_string(tx.envelope.kind)},
          {"identity", tx.envelope.identity.value},
          {"medium", to_string(tx.medium)},
          {"arrival_start", r.arrival_start},
          {"clean", clean}});

  NodeBehavior* b = nodes_[r.receiver].behavior;
  if (b) b->on_reception(*this, r.receiver, r, tx);
}

void Simulation::run() {
  for (NodeId id = 0; id < nodes_.size(); ++id)
    if (nodes_[id].behavior) nodes_[id].behavior->on_start(*this, id);

  while (!queue_.empty()) {
    if (queue_.next_time() > horizon_) break;
    EventQueue::Entry e = queue_.pop();
    if (e.time < now_) throw std::logic_error("event queue: time went backwards");
    now_ = e.time;
    e.fn(*this);
  }
}

void Simulation::record(TraceKind kind, NodeId node, nlohmann::ordered_json detail) {
  record(kind, node_label(node), std::move(detail));
}

void Simulation::record(TraceKind kind, const std::string& node, nlohmann::ordered_json detail) {
  trace_.records.push_back(TraceRecord{now_, node, kind, std::move(detail)});
}

}  // namespace echosim
