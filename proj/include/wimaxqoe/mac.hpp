#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wimaxqoe/errors.hpp"
#include "wimaxqoe/sim_time.hpp"
#include "wimaxqoe/traffic.hpp"

namespace wimaxqoe {

// Which rate a UGS grant is sized from.
//   Reserved: the flow's maximum sustained rate (its UGS reservation).
//   Current:  the rate the flow is currently allowed to send at.
enum class GrantBasis { Reserved, Current };

constexpr std::string_view to_string(GrantBasis b) noexcept {
  return b == GrantBasis::Reserved ? "reserved" : "current";
}
constexpr std::optional<GrantBasis> parse_grant_basis(std::string_view s) noexcept {
  if (s == "reserved") return GrantBasis::Reserved;
  if (s == "current") return GrantBasis::Current;
  return std::nullopt;
}

struct MacConfig {
  SimTime frame_duration{5000};
  double uplink_capacity_bps{6.0e6};
  std::size_t queue_limit{50};
  GrantBasis grant_basis{GrantBasis::Reserved};
  // Spend grant bits left over after whole packets on a fragment of the next
  // packet; it is delivered in the frame that carries its last fragment.
  // Without this a 6000-bit grant moves three 1600-bit packets per frame,
  // never 3.75.
  bool fragmentation{true};

  // Bits the uplink can move in one frame.
  std::int64_t frame_capacity_bits() const {
    return static_cast<std::int64_t>(
        std::floor(uplink_capacity_bps * static_cast<double>(frame_duration.count()) / 1e6));
  }

  void validate() const {
    if (frame_duration <= kZeroTime) throw ConfigInvalid("mac.frame_duration must be > 0");
    if (!(uplink_capacity_bps > 0)) throw ConfigInvalid("mac.uplink_capacity must be > 0");
    if (queue_limit < 1) throw ConfigInvalid("mac.queue_limit must be >= 1");
  }

  bool operator==(const MacConfig&) const = default;
};

enum class EnqueueResult { Accepted, Dropped };

// Drop-tail FIFO for one uplink flow at its subscriber station.
class FlowQueue {
 public:
  FlowQueue(int flow_id, std::size_t limit) : flow_id_(flow_id), limit_(limit) {}

  EnqueueResult enqueue(Packet p) {
    ++offered_;
    if (fifo_.size() >= limit_) {
      ++dropped_;
      return EnqueueResult::Dropped;
    }
    fifo_.push_back(std::move(p));
    return EnqueueResult::Accepted;
  }

  // Sends up to `budget_bits` FIFO. Completed packets are stamped with
  // `delivered_at` and appended to `out`. With `fragment` set, leftover bits
  // go to the head packet, which stays queued until its last bit is sent.
  // Returns the bits put on the air.
  std::int64_t drain(std::int64_t budget_bits, SimTime delivered_at, std::vector<Packet>& out,
                     bool fragment = false) {
    std::int64_t used = 0;
    while (!fifo_.empty()) {
      const std::int64_t need = fifo_.front().bits() - head_sent_bits_;
      const std::int64_t left = budget_bits - used;
      if (need > left) {
        if (fragment && left > 0) {
          head_sent_bits_ += left;
          used += left;
        }
        break;
      }
      Packet p = std::move(fifo_.front());
      fifo_.pop_front();
      used += need;
      head_sent_bits_ = 0;
      p.delivered_at = delivered_at;
      out.push_back(std::move(p));
      ++delivered_;
    }
    return used;
  }

  int flow_id() const noexcept { return flow_id_; }
  std::size_t limit() const noexcept { return limit_; }
  std::size_t size() const noexcept { return fifo_.size(); }
  bool empty() const noexcept { return fifo_.empty(); }
  const std::deque<Packet>& packets() const noexcept { return fifo_; }

  std::uint64_t offered() const noexcept { return offered_; }
  std::uint64_t dropped() const noexcept { return dropped_; }
  std::uint64_t delivered() const noexcept { return delivered_; }

  // Bits of the head packet already sent as fragments.
  std::int64_t head_sent_bits() const noexcept { return head_sent_bits_; }

  bool conserved() const noexcept { return offered_ == delivered_ + dropped_ + fifo_.size(); }

 private:
  int flow_id_;
  std::size_t limit_;
  std::deque<Packet> fifo_;
  std::uint64_t offered_{0};
  std::uint64_t dropped_{0};
  std::uint64_t delivered_{0};
  std::int64_t head_sent_bits_{0};
};

struct GrantDemand {
  int flow_id{};
  double rate_bps{};
};

struct Grant {
  int flow_id{};
  std::int64_t bits_this_frame{};
};

// Common factor applied to every nominal grant: 1 when the frame can carry
// all of them, capacity / sum otherwise.
inline double grant_scale_factor(std::span<const GrantDemand> demands, const MacConfig& cfg) {
  const double frame_s = to_seconds(cfg.frame_duration);
  double total = 0.0;
  for (const auto& d : demands) total += d.rate_bps * frame_s;
  const auto capacity = static_cast<double>(cfg.frame_capacity_bits());
  return total > capacity ? capacity / total : 1.0;
}

// Nominal grant is rate * frame duration. Over capacity, all grants shrink by
// the same factor (flows have equal priority), then floor to whole bits.
inline std::vector<Grant> allocate_grants(std::span<const GrantDemand> demands,
                                          const MacConfig& cfg) {
  const double frame_s = to_seconds(cfg.frame_duration);
  const double scale = grant_scale_factor(demands, cfg);
  std::vector<Grant> grants;
  grants.reserve(demands.size());
  for (const auto& d : demands) {
    const double bits = d.rate_bps * frame_s * scale;
    grants.push_back({d.flow_id, static_cast<std::int64_t>(std::floor(bits))});
  }
  return grants;
}

struct FrameTransmission {
  std::vector<Packet> delivered;  // grant order, FIFO within a flow
  std::int64_t bits_on_air{0};
};

// Serves each granted flow FIFO within its grant; unused grant bits are
// discarded. Delivered packets are stamped with the frame end. Queues without
// a grant send nothing this frame.
inline FrameTransmission transmit_frame(std::span<FlowQueue> queues,
                                        std::span<const Grant> grants, SimTime frame_end,
                                        bool fragmentation = false) {
  FrameTransmission tx;
  for (const auto& g : grants) {
    auto it = std::find_if(queues.begin(), queues.end(),
                           [&](const FlowQueue& q) { return q.flow_id() == g.flow_id; });
    if (it == queues.end()) throw UnknownFlow(g.flow_id);
    tx.bits_on_air += it->drain(g.bits_this_frame, frame_end, tx.delivered, fragmentation);
  }
  return tx;
}

}  // namespace wimaxqoe
