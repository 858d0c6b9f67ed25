#pragma once

#include <cstdint>
#include <queue>
#include <utility>
#include <vector>

namespace fddi {

// Min-heap of timed events with a total, deterministic order: time, then
// station, then event kind, then insertion order.
template <typename Time, typename Payload>
class EventQueue {
 public:
  struct Event {
    Time time;
    std::uint32_t station;
    std::uint8_t kind;
    std::uint64_t seq;
    Payload payload;
  };

  void push(Time time, std::uint32_t station, std::uint8_t kind, Payload payload) {
    heap_.push(Event{time, station, kind, next_seq_++, std::move(payload)});
  }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  const Event& top() const { return heap_.top(); }

  Event pop() {
    Event e = heap_.top();
    heap_.pop();
    return e;
  }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.station != b.station) return a.station > b.station;
      if (a.kind != b.kind) return a.kind > b.kind;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace fddi
