#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wimaxqoe/errors.hpp"
#include "wimaxqoe/metrics.hpp"
#include "wimaxqoe/sim_time.hpp"

namespace wimaxqoe {

// One trace line: "<kind> <time> <flow_id> <seq> <size>"
//   kind  s | r | d   (sent, received, dropped)
//   time  seconds, exactly six decimals
//   size  bytes
enum class TraceKind : char { Sent = 's', Received = 'r', Dropped = 'd' };

struct TraceEvent {
  TraceKind kind{TraceKind::Sent};
  SimTime time{};
  int flow_id{};
  std::uint64_t seq{};
  std::uint32_t size{};

  bool operator==(const TraceEvent&) const = default;
};

inline std::string format_trace_line(const TraceEvent& e) {
  std::string line;
  line.reserve(40);
  line += static_cast<char>(e.kind);
  line += ' ';
  line += format_seconds(e.time);
  line += ' ';
  line += std::to_string(e.flow_id);
  line += ' ';
  line += std::to_string(e.seq);
  line += ' ';
  line += std::to_string(e.size);
  return line;
}

class TraceWriter {
 public:
  explicit TraceWriter(std::ostream& out) : out_(&out) {}

  void emit(const TraceEvent& e) {
    *out_ << format_trace_line(e) << '\n';
    if (!*out_) throw SinkWriteError{};
  }

 private:
  std::ostream* out_;
};

namespace detail {

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

inline std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ') ++i;
    fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

}  // namespace detail

inline TraceEvent parse_trace_line(std::string_view line, std::size_t line_no) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto f = detail::split_spaces(line);
  if (f.size() != 5) throw MalformedLine(line_no, "expected 5 fields, got " + std::to_string(f.size()));

  TraceEvent e;
  if (f[0] == "s") e.kind = TraceKind::Sent;
  else if (f[0] == "r") e.kind = TraceKind::Received;
  else if (f[0] == "d") e.kind = TraceKind::Dropped;
  else throw MalformedLine(line_no, "unknown event kind '" + std::string(f[0]) + "'");

  const auto t = parse_seconds(f[1]);
  if (!t) throw MalformedLine(line_no, "bad time '" + std::string(f[1]) + "'");
  e.time = *t;
  if (!detail::parse_int(f[2], e.flow_id) || e.flow_id < 0)
    throw MalformedLine(line_no, "bad flow id '" + std::string(f[2]) + "'");
  if (!detail::parse_int(f[3], e.seq))
    throw MalformedLine(line_no, "bad sequence number '" + std::string(f[3]) + "'");
  if (!detail::parse_int(f[4], e.size) || e.size == 0)
    throw MalformedLine(line_no, "bad size '" + std::string(f[4]) + "'");
  return e;
}

// Single-pass trace reader. Holds only packets that have been sent but not
// yet received or dropped, plus one accumulator per flow.
class TraceAnalyzer {
 public:
  void consume(const TraceEvent& e, std::size_t line_no) {
    if (e.time < last_time_) throw MalformedLine(line_no, "time goes backwards");
    last_time_ = e.time;

    auto& flow = flows_.try_emplace(e.flow_id, e.flow_id).first->second;
    const Key key{e.flow_id, e.seq};
    switch (e.kind) {
      case TraceKind::Sent:
        if (!open_.emplace(key, e.time).second)
          throw MalformedLine(line_no, "duplicate send for seq " + std::to_string(e.seq));
        flow.acc.record_sent();
        break;
      case TraceKind::Received: {
        auto it = open_.find(key);
        if (it == open_.end()) throw OrphanEvent(e.flow_id, e.seq);
        flow.acc.record_delivered(std::int64_t{e.size} * 8, e.time - it->second);
        open_.erase(it);
        break;
      }
      case TraceKind::Dropped: {
        auto it = open_.find(key);
        if (it == open_.end()) throw OrphanEvent(e.flow_id, e.seq);
        flow.acc.record_dropped();
        open_.erase(it);
        break;
      }
    }
  }

  void consume_line(std::string_view line, std::size_t line_no) {
    consume(parse_trace_line(line, line_no), line_no);
  }

  // Metrics for every flow seen, ascending flow id. Packets still open are
  // counted as residual.
  std::vector<FlowMetrics> metrics(SimTime window) const {
    std::map<int, std::uint64_t> residual;
    for (const auto& [key, t] : open_) ++residual[key.flow_id];
    std::vector<FlowMetrics> out;
    out.reserve(flows_.size());
    for (const auto& [id, flow] : flows_) out.push_back(flow.acc.finish(window, residual[id]));
    return out;
  }

  std::size_t open_packets() const noexcept { return open_.size(); }

 private:
  struct Key {
    int flow_id;
    std::uint64_t seq;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      return std::hash<std::uint64_t>{}(k.seq * 1315423911u ^ static_cast<std::uint64_t>(k.flow_id));
    }
  };
  struct FlowState {
    explicit FlowState(int id) : acc(id) {}
    FlowMetricsAccumulator acc;
  };

  std::map<int, FlowState> flows_;
  std::unordered_map<Key, SimTime, KeyHash> open_;
  SimTime last_time_{kZeroTime};
};

// Blank lines are skipped; line numbers count every physical line.
inline std::vector<FlowMetrics> analyze_trace(std::istream& in, SimTime window) {
  TraceAnalyzer analyzer;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    analyzer.consume_line(line, line_no);
  }
  if (in.bad()) throw IoError("error reading trace");
  return analyzer.metrics(window);
}

}  // namespace wimaxqoe
