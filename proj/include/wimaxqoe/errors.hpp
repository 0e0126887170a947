#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace wimaxqoe {

class SchedulingInPast : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class ZeroInterval : public std::invalid_argument {
 public:
  ZeroInterval() : std::invalid_argument("send interval must be positive") {}
};

class ZeroWindow : public std::invalid_argument {
 public:
  ZeroWindow() : std::invalid_argument("throughput window must be positive") {}
};

class UnknownFlow : public std::out_of_range {
 public:
  explicit UnknownFlow(int flow_id)
      : std::out_of_range("unknown flow id " + std::to_string(flow_id)), flow_id_(flow_id) {}
  int flow_id() const noexcept { return flow_id_; }

 private:
  int flow_id_;
};

class ConfigInvalid : public std::runtime_error {
 public:
  explicit ConfigInvalid(const std::string& reason)
      : std::runtime_error("invalid configuration: " + reason) {}
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SinkWriteError : public IoError {
 public:
  SinkWriteError() : IoError("trace sink write failed") {}
};

class MalformedLine : public std::runtime_error {
 public:
  MalformedLine(std::size_t line_no, const std::string& why)
      : std::runtime_error("malformed trace line " + std::to_string(line_no) + ": " + why),
        line_no_(line_no) {}
  std::size_t line_no() const noexcept { return line_no_; }

 private:
  std::size_t line_no_;
};

class OrphanEvent : public std::runtime_error {
 public:
  OrphanEvent(int flow_id, std::uint64_t seq)
      : std::runtime_error("event for flow " + std::to_string(flow_id) + " seq " +
                           std::to_string(seq) + " has no matching send"),
        flow_id_(flow_id),
        seq_(seq) {}
  int flow_id() const noexcept { return flow_id_; }
  std::uint64_t seq() const noexcept { return seq_; }

 private:
  int flow_id_;
  std::uint64_t seq_;
};

}  // namespace wimaxqoe
