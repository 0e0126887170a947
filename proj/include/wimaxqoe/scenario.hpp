#pragma once

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wimaxqoe/errors.hpp"
#include "wimaxqoe/mac.hpp"
#include "wimaxqoe/qoe_controller.hpp"
#include "wimaxqoe/sim_time.hpp"
#include "wimaxqoe/traffic.hpp"

namespace wimaxqoe {

struct ScenarioConfig {
  std::vector<FlowSpec> flows;
  MacConfig mac;
  ControllerConfig controller;
  SimTime duration{200'000'000};
  std::uint64_t seed{42};
  std::string trace_path;
  std::string report_path;

  void validate() const {
    if (duration <= kZeroTime) throw ConfigInvalid("duration must be > 0");
    if (flows.empty()) throw ConfigInvalid("at least one flow is required");
    std::set<int> ids;
    for (const auto& f : flows) {
      const std::string where = "flow " + std::to_string(f.flow_id);
      if (f.flow_id < 0) throw ConfigInvalid(where + ": flow_id must be >= 0");
      if (!ids.insert(f.flow_id).second) throw ConfigInvalid(where + ": duplicate flow_id");
      if (f.packet_size == 0) throw ConfigInvalid(where + ": packet_size must be > 0");
      if (f.send_interval <= kZeroTime) throw ConfigInvalid(where + ": send_interval must be > 0");
      if (!(f.min_rate_bps > 0)) throw ConfigInvalid(where + ": min_rate must be > 0");
      if (f.min_rate_bps > f.max_rate_bps() * (1.0 + 1e-12))
        throw ConfigInvalid(where + ": min_rate exceeds the rate implied by packet_size/send_interval");
      if (!is_scheduled(f.service_class))
        throw ConfigInvalid(where + ": service class " + std::string(to_string(f.service_class)) +
                            " is not scheduled by this simulator (UGS only)");
    }
    mac.validate();
    controller.validate();
  }

  bool operator==(const ScenarioConfig&) const = default;
};

// Five UGS subscriber stations, 200-byte CBR packets, 200 s.
inline ScenarioConfig default_scenario() {
  ScenarioConfig cfg;
  struct Row {
    int id;
    std::int64_t interval_us;
    double min_kbytes;
  };
  constexpr Row rows[] = {{1, 1500, 120}, {2, 1000, 150}, {3, 1000, 150},
                          {4, 1000, 150}, {5, 1500, 120}};
  for (const auto& r : rows) {
    cfg.flows.push_back(FlowSpec{r.id, 200, SimTime{r.interval_us}, kbytes_to_bps(r.min_kbytes),
                                 ServiceClass::UGS, 0});
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// JSON form. Durations are seconds, rates kB/s (min_rate) or bit/s (capacity).

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> known,
                                const std::string& where) {
  if (!j.is_object()) throw ConfigInvalid(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ConfigInvalid("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigInvalid(where + "." + key + " has the wrong type");
  }
}

// Rejects negative numbers instead of letting them wrap to huge counts.
template <typename T>
void read_unsigned(const nlohmann::json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  if (!j.at(key).is_number_unsigned())
    throw ConfigInvalid(where + "." + key + " must be a non-negative integer");
  read_opt(j, key, out, where);
}

inline void read_seconds(const nlohmann::json& j, const char* key, SimTime& out,
                         const std::string& where) {
  if (!j.contains(key)) return;
  double s = 0;
  read_opt(j, key, s, where);
  if (!(s >= 0) || s > 1e9) throw ConfigInvalid(where + "." + key + " out of range");
  out = from_seconds(s);
}

}  // namespace detail

inline nlohmann::json scenario_to_json(const ScenarioConfig& cfg) {
  using nlohmann::json;
  json flows = json::array();
  for (const auto& f : cfg.flows) {
    flows.push_back({{"flow_id", f.flow_id},
                     {"packet_size", f.packet_size},
                     {"send_interval_s", to_seconds(f.send_interval)},
                     {"min_rate_kBps", bps_to_kbytes(f.min_rate_bps)},
                     {"service_class", std::string(to_string(f.service_class))},
                     {"priority", f.priority}});
  }
  return json{
      {"duration_s", to_seconds(cfg.duration)},
      {"seed", cfg.seed},
      {"flows", flows},
      {"mac",
       {{"frame_duration_s", to_seconds(cfg.mac.frame_duration)},
        {"uplink_capacity_bps", cfg.mac.uplink_capacity_bps},
        {"queue_limit", cfg.mac.queue_limit},
        {"grant_basis", std::string(to_string(cfg.mac.grant_basis))},
        {"fragmentation", cfg.mac.fragmentation}}},
      {"controller",
       {{"mode", std::string(to_string(cfg.controller.mode))},
        {"reset_period_s", to_seconds(cfg.controller.reset_period)},
        {"descent_duration_s", to_seconds(cfg.controller.descent_duration)},
        {"control_epoch_s", to_seconds(cfg.controller.control_epoch)},
        {"loss_scope", std::string(to_string(cfg.controller.loss_scope))}}},
      {"output", {{"trace", cfg.trace_path}, {"report", cfg.report_path}}},
  };
}

// Missing keys keep the values already in `base`.
inline ScenarioConfig scenario_from_json(const nlohmann::json& j, ScenarioConfig base = default_scenario()) {
  using detail::read_opt;
  using detail::read_seconds;
  detail::reject_unknown_keys(j, {"duration_s", "seed", "flows", "mac", "controller", "output"},
                              "scenario");
  ScenarioConfig cfg = std::move(base);
  read_seconds(j, "duration_s", cfg.duration, "scenario");
  detail::read_unsigned(j, "seed", cfg.seed, "scenario");

  if (j.contains("flows")) {
    const auto& arr = j.at("flows");
    if (!arr.is_array()) throw ConfigInvalid("flows must be an array");
    cfg.flows.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto& jf = arr[i];
      const std::string where = "flows[" + std::to_string(i) + "]";
      detail::reject_unknown_keys(jf,
                                  {"flow_id", "packet_size", "send_interval_s", "min_rate_kBps",
                                   "service_class", "priority"},
                                  where);
      for (const char* required : {"flow_id", "packet_size", "send_interval_s", "min_rate_kBps"})
        if (!jf.contains(required)) throw ConfigInvalid(where + " is missing " + required);
      FlowSpec f;
      read_opt(jf, "flow_id", f.flow_id, where);
      detail::read_unsigned(jf, "packet_size", f.packet_size, where);
      read_seconds(jf, "send_interval_s", f.send_interval, where);
      double min_kbytes = 0;
      read_opt(jf, "min_rate_kBps", min_kbytes, where);
      f.min_rate_bps = kbytes_to_bps(min_kbytes);
      std::string cls = "UGS";
      read_opt(jf, "service_class", cls, where);
      const auto parsed = parse_service_class(cls);
      if (!parsed) throw ConfigInvalid(where + ".service_class '" + cls + "' is unknown");
      f.service_class = *parsed;
      read_opt(jf, "priority", f.priority, where);
      cfg.flows.push_back(f);
    }
  }

  if (j.contains("mac")) {
    const auto& jm = j.at("mac");
    detail::reject_unknown_keys(
        jm, {"frame_duration_s", "uplink_capacity_bps", "queue_limit", "grant_basis", "fragmentation"},
        "mac");
    read_seconds(jm, "frame_duration_s", cfg.mac.frame_duration, "mac");
    read_opt(jm, "uplink_capacity_bps", cfg.mac.uplink_capacity_bps, "mac");
    detail::read_unsigned(jm, "queue_limit", cfg.mac.queue_limit, "mac");
    read_opt(jm, "fragmentation", cfg.mac.fragmentation, "mac");
    if (jm.contains("grant_basis")) {
      std::string b;
      read_opt(jm, "grant_basis", b, "mac");
      const auto parsed = parse_grant_basis(b);
      if (!parsed) throw ConfigInvalid("mac.grant_basis must be 'reserved' or 'current'");
      cfg.mac.grant_basis = *parsed;
    }
  }

  if (j.contains("controller")) {
    const auto& jc = j.at("controller");
    detail::reject_unknown_keys(jc,
                                {"mode", "reset_period_s", "descent_duration_s", "control_epoch_s",
                                 "loss_scope"},
                                "controller");
    if (jc.contains("mode")) {
      std::string m;
      read_opt(jc, "mode", m, "controller");
      const auto parsed = parse_controller_mode(m);
      if (!parsed) throw ConfigInvalid("controller.mode must be 'baseline' or 'qoe'");
      cfg.controller.mode = *parsed;
    }
    read_seconds(jc, "reset_period_s", cfg.controller.reset_period, "controller");
    read_seconds(jc, "descent_duration_s", cfg.controller.descent_duration, "controller");
    read_seconds(jc, "control_epoch_s", cfg.controller.control_epoch, "controller");
    if (jc.contains("loss_scope")) {
      std::string s;
      read_opt(jc, "loss_scope", s, "controller");
      const auto parsed = parse_loss_scope(s);
      if (!parsed) throw ConfigInvalid("controller.loss_scope must be 'all_flows' or 'culprit_only'");
      cfg.controller.loss_scope = *parsed;
    }
  }

  if (j.contains("output")) {
    const auto& jo = j.at("output");
    detail::reject_unknown_keys(jo, {"trace", "report"}, "output");
    read_opt(jo, "trace", cfg.trace_path, "output");
    read_opt(jo, "report", cfg.report_path, "output");
  }
  return cfg;
}

inline ScenarioConfig parse_scenario(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigInvalid(std::string("not valid JSON: ") + e.what());
  }
  return scenario_from_json(j);
}

inline ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

inline std::string dump_scenario(const ScenarioConfig& cfg) { return scenario_to_json(cfg).dump(2) + "\n"; }

}  // namespace wimaxqoe
