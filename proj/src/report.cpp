#include "ssdlab/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ssdlab {

namespace {

std::string g6(double v) {
  char b[64];
  std::snprintf(b, sizeof b, "%.6g", v);
  return b;
}

std::string join(const std::set<std::string>& items) {
  std::string out;
  for (const std::string& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

}  // namespace

std::vector<ChecklistItem> guideline_checklist(
    const std::vector<RunSummary>& runs) {
  std::vector<ChecklistItem> items;

  int not_steady = 0;
  int missing_wad = 0;
  int missing_state = 0;
  int missing_space = 0;
  std::set<std::string> fractions;
  std::set<std::string> partitions;
  std::set<std::string> profiles;
  std::set<std::string> states;
  for (const RunSummary& r : runs) {
    if (r.outcome == "completed" && r.steady_rule == "none") ++not_steady;
    if (r.wad_end <= 0.0) ++missing_wad;
    if (r.prepare.empty()) ++missing_state;
    if (r.space_amp_max <= 0.0) ++missing_space;
    fractions.insert(g6(r.dataset_fraction));
    partitions.insert(g6(r.partition_fraction));
    profiles.insert(r.profile);
    if (!r.prepare.empty()) states.insert(r.prepare);
  }

  items.push_back({1, "steady state reached on every completed run?",
                   not_steady == 0,
                   not_steady == 0
                       ? "all completed runs converged"
                       : std::to_string(not_steady) +
                             " run(s) ended before steady state"});
  items.push_back({2, "device-level write amplification reported?",
                   missing_wad == 0,
                   missing_wad == 0 ? "WA-D present for all runs"
                                    : std::to_string(missing_wad) +
                                          " run(s) missing WA-D"});
  items.push_back({3, "initial drive state recorded?", missing_state == 0,
                   missing_state == 0
                       ? "states: " + join(states)
                       : std::to_string(missing_state) +
                             " run(s) with unrecorded state"});
  items.push_back({4, "more than one dataset size evaluated?",
                   fractions.size() > 1,
                   "dataset fractions: " + join(fractions)});
  items.push_back({5, "space amplification reported?", missing_space == 0,
                   missing_space == 0 ? "space amp present for all runs"
                                      : std::to_string(missing_space) +
                                            " run(s) missing space amp"});
  items.push_back({6, "software over-provisioning evaluated?",
                   partitions.size() > 1,
                   "partition fractions: " + join(partitions)});
  items.push_back({7, "more than one device profile evaluated?",
                   profiles.size() > 1, "profiles: " + join(profiles)});
  return items;
}

std::vector<RunSummary> read_summary_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open summary file: " + path);

  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
  };

  std::string line;
  if (!std::getline(in, line))
    throw ConfigError("empty summary file: " + path);
  const std::vector<std::string> header = split(line);
  if (header.size() != 29 || header[0] != "label" || header[28] != "load_host_bytes")
    throw ConfigError("unrecognized summary schema in " + path);

  std::vector<RunSummary> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> c = split(line);
    if (c.size() != header.size())
      throw ConfigError("malformed summary row in " + path);
    RunSummary r;
    try {
      std::size_t i = 0;
      r.label = c[i++];
      r.scenario = c[i++];
      r.engine = c[i++];
      r.profile = c[i++];
      r.prepare = c[i++];
      r.dataset_fraction = std::stod(c[i++]);
      r.partition_fraction = std::stod(c[i++]);
      r.value_bytes = static_cast<std::uint32_t>(std::stoul(c[i++]));
      r.seed = std::stoull(c[i++]);
      r.outcome = c[i++];
      r.steady_rule = c[i++];
      r.steady_at_min = std::stod(c[i++]);
      r.transient_ops_s = std::stod(c[i++]);
      r.steady_ops_s = std::stod(c[i++]);
      r.waa_end = std::stod(c[i++]);
      r.wad_end = std::stod(c[i++]);
      r.waa_steady = std::stod(c[i++]);
      r.wad_steady = std::stod(c[i++]);
      r.e2e_steady = std::stod(c[i++]);
      r.space_amp_max = std::stod(c[i++]);
      r.unwritten_frac = std::stod(c[i++]);
      r.cov_1min = std::stod(c[i++]);
      r.ops = std::stoull(c[i++]);
      r.app_bytes = std::stoull(c[i++]);
      r.host_bytes = std::stoull(c[i++]);
      r.flash_bytes = std::stoull(c[i++]);
      r.virtual_min = std::stod(c[i++]);
      r.load_min = std::stod(c[i++]);
      r.load_host_bytes = std::stoull(c[i++]);
    } catch (const std::exception&) {
      throw ConfigError("malformed summary row in " + path);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string render_run_report(const RunSummary& s) {
  std::string out;
  auto line = [&out](const std::string& k, const std::string& v) {
    out += k;
    out += ": ";
    out += v;
    out += "\n";
  };
  line("run", s.label);
  line("scenario", s.scenario);
  line("engine", s.engine);
  line("profile", s.profile);
  line("prepare", s.prepare);
  line("dataset_fraction", g6(s.dataset_fraction));
  line("partition_fraction", g6(s.partition_fraction));
  line("value_bytes", std::to_string(s.value_bytes));
  line("seed", std::to_string(s.seed));
  line("outcome", s.outcome);
  line("steady_rule", s.steady_rule);
  line("steady_at_min", g6(s.steady_at_min));
  line("transient_ops_s", g6(s.transient_ops_s));
  line("steady_ops_s", g6(s.steady_ops_s));
  line("waa_end", g6(s.waa_end));
  line("wad_end", g6(s.wad_end));
  line("waa_steady", g6(s.waa_steady));
  line("wad_steady", g6(s.wad_steady));
  line("e2e_steady", g6(s.e2e_steady));
  line("space_amp_max", g6(s.space_amp_max));
  line("unwritten_frac", g6(s.unwritten_frac));
  line("cov_1min", g6(s.cov_1min));
  line("ops", std::to_string(s.ops));
  line("app_bytes", std::to_string(s.app_bytes));
  line("host_bytes", std::to_string(s.host_bytes));
  line("flash_bytes", std::to_string(s.flash_bytes));
  line("virtual_min", g6(s.virtual_min));
  line("load_min", g6(s.load_min));
  line("load_host_bytes", std::to_string(s.load_host_bytes));
  return out;
}

namespace {

// Scenario-specific observations rendered as INFO lines; purely
// descriptive, the numbers come straight from the summaries.
void append_scenario_notes(const std::string& name,
                           const std::vector<RunSummary>& runs,
                           std::string& out) {
  auto info = [&out](const std::string& s) { out += "INFO " + s + "\n"; };

  if (name == "P1") {
    for (const RunSummary& r : runs)
      if (r.steady_ops_s > 0.0)
        info(r.label + ": transient/steady throughput ratio " +
             g6(r.transient_ops_s / r.steady_ops_s));
  } else if (name == "P3") {
    std::map<std::string, std::map<std::string, double>> wad;
    for (const RunSummary& r : runs) wad[r.engine][r.prepare] = r.wad_steady;
    for (const auto& [engine, by_state] : wad) {
      auto t = by_state.find("trimmed");
      auto p = by_state.find("preconditioned");
      if (t == by_state.end() || p == by_state.end()) continue;
      info(engine + ": steady WA-D trimmed " + g6(t->second) +
           ", preconditioned " + g6(p->second));
    }
  } else if (name == "P6") {
    std::map<std::string, const RunSummary*> baseline;
    for (const RunSummary& r : runs)
      if (r.partition_fraction == 1.0) baseline[r.engine] = &r;
    for (const RunSummary& r : runs) {
      if (r.partition_fraction == 1.0) continue;
      auto it = baseline.find(r.engine);
      if (it == baseline.end() || it->second->steady_ops_s <= 0.0) continue;
      info(r.label + ": WA-D " + g6(it->second->wad_steady) + " -> " +
           g6(r.wad_steady) + ", throughput gain " +
           g6(r.steady_ops_s / it->second->steady_ops_s) + "x");
    }
  } else if (name == "P7") {
    std::map<std::string, std::vector<const RunSummary*>> by_engine;
    for (const RunSummary& r : runs) by_engine[r.engine].push_back(&r);
    for (auto& [engine, rs] : by_engine) {
      std::sort(rs.begin(), rs.end(),
                [](const RunSummary* a, const RunSummary* b) {
                  return a->steady_ops_s > b->steady_ops_s;
                });
      std::string order;
      for (const RunSummary* r : rs) {
        if (!order.empty()) order += " > ";
        order += r->profile + " (" + g6(r->steady_ops_s) + " ops/s)";
      }
      info(engine + ": " + order);
    }
  } else if (name == "P4") {
    for (const RunSummary& r : runs)
      if (r.outcome == "out_of_space")
        info(r.label + ": out of space after " + g6(r.virtual_min) + " min");
  } else if (name == "P5") {
    info("provisioning comparison written to heatmap.csv");
  }
}

}  // namespace

std::string render_scenario_report(const std::string& name,
                                   const std::string& title,
                                   const std::vector<RunSummary>& runs) {
  std::string out = name + ": " + title + "\n";
  out += "runs: " + std::to_string(runs.size()) + "\n\n";

  for (const RunSummary& r : runs) {
    out += r.label + ": outcome=" + r.outcome +
           " steady_ops_s=" + g6(r.steady_ops_s) +
           " waa=" + g6(r.waa_end) + " wad_steady=" + g6(r.wad_steady) +
           " space_amp_max=" + g6(r.space_amp_max) + "\n";
  }
  out += "\n";

  for (const ChecklistItem& item : guideline_checklist(runs)) {
    out += item.ok ? "[ OK ] " : "[FLAG] ";
    out += "pitfall " + std::to_string(item.pitfall) + ": " + item.question +
           " (" + item.note + ")\n";
  }
  out += "\n";

  append_scenario_notes(name, runs, out);
  return out;
}

}  // namespace ssdlab
