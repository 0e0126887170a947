#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "wimaxqoe/errors.hpp"
#include "wimaxqoe/report.hpp"
#include "wimaxqoe/scenario.hpp"
#include "wimaxqoe/simulation.hpp"
#include "wimaxqoe/trace.hpp"

namespace wimaxqoe::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kIoError = 2,
  kMalformedTrace = 3,
};

// Flag values as given on the command line; unset flags fall back to the
// config file, then to built-in defaults.
struct Options {
  std::optional<std::string> config_path;
  std::optional<ControllerMode> mode;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration_s;
  std::optional<std::string> out_trace;
  std::optional<std::string> out_report;
  std::string trace_input;  // analyze only
};

inline ScenarioConfig resolve_config(const Options& opt) {
  ScenarioConfig cfg = opt.config_path ? load_scenario(*opt.config_path) : default_scenario();
  if (opt.mode) cfg.controller.mode = *opt.mode;
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.duration_s) {
    if (!(*opt.duration_s > 0)) throw ConfigInvalid("duration must be > 0");
    cfg.duration = from_seconds(*opt.duration_s);
  }
  if (opt.out_trace) cfg.trace_path = *opt.out_trace;
  if (opt.out_report) cfg.report_path = *opt.out_report;
  cfg.validate();
  return cfg;
}

inline void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

struct RunOutput {
  SimulationResult result;
  std::string trace;  // empty unless requested
};

inline RunOutput run_scenario(const ScenarioConfig& cfg, ControllerMode mode, bool want_trace) {
  RunOutput out;
  if (want_trace) {
    std::ostringstream buf;
    TraceWriter writer(buf);
    out.result = simulate(cfg, mode, &writer);
    out.trace = std::move(buf).str();
  } else {
    out.result = simulate(cfg, mode);
  }
  return out;
}

inline std::vector<FlowMetrics> sorted_by_flow(std::vector<FlowMetrics> m) {
  std::sort(m.begin(), m.end(),
            [](const FlowMetrics& a, const FlowMetrics& b) { return a.flow_id < b.flow_id; });
  return m;
}

// Runs Baseline and QoE on the same config. The two engines are independent
// and run concurrently.
inline ComparisonReport compare(const ScenarioConfig& cfg, std::string* baseline_trace = nullptr,
                                std::string* qoe_trace = nullptr) {
  auto base = std::async(std::launch::async, [&] {
    return run_scenario(cfg, ControllerMode::Baseline, baseline_trace != nullptr);
  });
  RunOutput qoe = run_scenario(cfg, ControllerMode::QoE, qoe_trace != nullptr);
  RunOutput b = base.get();
  if (baseline_trace) *baseline_trace = std::move(b.trace);
  if (qoe_trace) *qoe_trace = std::move(qoe.trace);

  const auto bm = sorted_by_flow(b.result.metrics);
  const auto qm = sorted_by_flow(qoe.result.metrics);
  ComparisonReport report;
  for (std::size_t i = 0; i < bm.size(); ++i) report.flows.push_back({bm[i], qm[i]});
  return report;
}

namespace detail {

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigInvalid& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const MalformedLine& e) {
    err << "error: " << e.what() << '\n';
    return kMalformedTrace;
  } catch (const OrphanEvent& e) {
    err << "error: " << e.what() << '\n';
    return kMalformedTrace;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoError;
  }
}

inline void emit_report(const ScenarioConfig& cfg, const std::string& csv, std::ostream& out) {
  if (cfg.report_path.empty())
    out << csv;
  else
    write_file(cfg.report_path, csv);
}

}  // namespace detail

inline int run_command(const Options& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const ScenarioConfig cfg = resolve_config(opt);
    const RunOutput r = run_scenario(cfg, cfg.controller.mode, !cfg.trace_path.empty());
    const std::string csv = format_csv(sorted_by_flow(r.result.metrics), to_string(cfg.controller.mode));
    if (!cfg.trace_path.empty()) write_file(cfg.trace_path, r.trace);
    detail::emit_report(cfg, csv, out);
    return static_cast<int>(kOk);
  });
}

// With a trace path P, writes P.baseline and P.qoe.
inline int compare_command(const Options& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const ScenarioConfig cfg = resolve_config(opt);
    const bool traces = !cfg.trace_path.empty();
    std::string bt, qt;
    const ComparisonReport report = compare(cfg, traces ? &bt : nullptr, traces ? &qt : nullptr);
    if (traces) {
      write_file(cfg.trace_path + ".baseline", bt);
      write_file(cfg.trace_path + ".qoe", qt);
    }
    detail::emit_report(cfg, report.csv(), out);
    err << report.summary();
    return static_cast<int>(kOk);
  });
}

// Rows are labelled with --mode when given, otherwise "trace".
inline int analyze_command(const Options& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    Options o = opt;
    o.out_trace.reset();
    const ScenarioConfig cfg = resolve_config(o);
    std::ifstream in(opt.trace_input, std::ios::binary);
    if (!in) throw IoError("cannot open trace '" + opt.trace_input + "'");
    const auto metrics = analyze_trace(in, cfg.duration);
    const std::string label = opt.mode ? std::string(to_string(*opt.mode)) : "trace";
    detail::emit_report(cfg, format_csv(metrics, label), out);
    return static_cast<int>(kOk);
  });
}

}  // namespace wimaxqoe::cli
