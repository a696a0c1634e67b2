#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

namespace echosim {

class Simulation;

// Time-ordered event set. Ties in time dequeue in insertion order, which
// keeps event execution deterministic for identical inputs.
class EventQueue {
 public:
  using Fn = std::function<void(Simulation&)>;

  struct Entry {
    double time;
    std::uint64_t seq;
    Fn fn;
  };

  void push(double time, Fn fn) { heap_.push(Entry{time, next_seq_++, std::move(fn)}); }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  double next_time() const { return heap_.top().time; }

  Entry pop() {
    Entry e = heap_.top();
    heap_.pop();
    return e;
  }

 private:
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.time != b.time) return a.time > b.time;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace echosim
