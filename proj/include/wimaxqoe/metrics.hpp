#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>

#include "wimaxqoe/errors.hpp"
#include "wimaxqoe/sim_time.hpp"
#include "wimaxqoe/traffic.hpp"

namespace wimaxqoe {

struct FlowMetrics {
  int flow_id{};
  std::uint64_t sent{};
  std::uint64_t delivered{};
  std::uint64_t dropped{};
  std::uint64_t residual{};  // still queued when the run ended
  double avg_throughput_bps{};
  double loss_rate{};
  double avg_delay_s{};   // 0 when nothing was delivered
  double avg_jitter_s{};  // 0 with fewer than two deliveries

  bool has_delay() const noexcept { return delivered > 0; }
  bool operator==(const FlowMetrics&) const = default;
};

inline double avg_throughput_bits(std::int64_t delivered_bits, SimTime window) {
  if (window <= kZeroTime) throw ZeroWindow{};
  return static_cast<double>(delivered_bits) / to_seconds(window);
}

inline double avg_throughput(std::span<const Packet> delivered, SimTime window) {
  std::int64_t bits = 0;
  for (const auto& p : delivered) bits += p.bits();
  return avg_throughput_bits(bits, window);
}

inline double loss_rate(std::uint64_t sent, std::uint64_t dropped) noexcept {
  return sent == 0 ? 0.0 : static_cast<double>(dropped) / static_cast<double>(sent);
}

// Mean one-way delay in seconds.
inline double avg_delay(std::span<const SimTime> delays) noexcept {
  if (delays.empty()) return 0.0;
  std::int64_t sum = 0;
  for (auto d : delays) sum += d.count();
  return static_cast<double>(sum) / static_cast<double>(delays.size()) / 1e6;
}

// Mean |d[i] - d[i-1]| over consecutive deliveries, in seconds. Delays must be
// in sequence order; dropped packets are simply absent.
inline double avg_jitter(std::span<const SimTime> delays) noexcept {
  if (delays.size() < 2) return 0.0;
  std::int64_t sum = 0;
  for (std::size_t i = 1; i < delays.size(); ++i)
    sum += std::llabs((delays[i] - delays[i - 1]).count());
  return static_cast<double>(sum) / static_cast<double>(delays.size() - 1) / 1e6;
}

// Streaming form of the functions above. All sums are integer microseconds
// and bits, so two accumulators fed the same events agree bit for bit.
class FlowMetricsAccumulator {
 public:
  explicit FlowMetricsAccumulator(int flow_id = 0) : flow_id_(flow_id) {}

  void record_sent() noexcept { ++sent_; }
  void record_dropped() noexcept { ++dropped_; }

  void record_delivered(std::int64_t bits, SimTime delay) noexcept {
    ++delivered_;
    bits_ += bits;
    delay_sum_us_ += delay.count();
    if (last_delay_) jitter_sum_us_ += std::llabs((delay - *last_delay_).count());
    last_delay_ = delay;
  }

  FlowMetrics finish(SimTime window, std::uint64_t residual) const {
    FlowMetrics m;
    m.flow_id = flow_id_;
    m.sent = sent_;
    m.delivered = delivered_;
    m.dropped = dropped_;
    m.residual = residual;
    m.avg_throughput_bps = avg_throughput_bits(bits_, window);
    m.loss_rate = loss_rate(sent_, dropped_);
    m.avg_delay_s = delivered_ == 0 ? 0.0
                                    : static_cast<double>(delay_sum_us_) /
                                          static_cast<double>(delivered_) / 1e6;
    m.avg_jitter_s = delivered_ < 2 ? 0.0
                                    : static_cast<double>(jitter_sum_us_) /
                                          static_cast<double>(delivered_ - 1) / 1e6;
    return m;
  }

  int flow_id() const noexcept { return flow_id_; }
  std::uint64_t sent() const noexcept { return sent_; }
  std::uint64_t delivered() const noexcept { return delivered_; }
  std::uint64_t dropped() const noexcept { return dropped_; }

 private:
  int flow_id_;
  std::uint64_t sent_{0};
  std::uint64_t delivered_{0};
  std::uint64_t dropped_{0};
  std::int64_t bits_{0};
  std::int64_t delay_sum_us_{0};
  std::int64_t jitter_sum_us_{0};
  std::optional<SimTime> last_delay_;
};

}  // namespace wimaxqoe
