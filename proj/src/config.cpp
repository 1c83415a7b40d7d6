#include "ssdlab/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

namespace ssdlab {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw ConfigError(what); }

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known) bad("unknown key \"" + where + it.key() + "\"");
  }
}

double get_number(const json& v, const std::string& where) {
  if (!v.is_number()) bad(where + " must be a number");
  return v.get<double>();
}

std::uint64_t get_uint(const json& v, const std::string& where) {
  if (!v.is_number_unsigned()) bad(where + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

bool get_bool(const json& v, const std::string& where) {
  if (!v.is_boolean()) bad(where + " must be true or false");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& where) {
  if (!v.is_string()) bad(where + " must be a string");
  return v.get<std::string>();
}

// Size fields accept either a JSON integer (bytes) or a suffixed string.
std::uint64_t get_size(const json& v, const std::string& where) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_string()) return parse_size(v.get<std::string>());
  bad(where + " must be a byte count or a size string like \"8MiB\"");
}

EngineKind parse_engine(const std::string& s, const std::string& where) {
  if (s == "lsm") return EngineKind::kLsm;
  if (s == "btree") return EngineKind::kBtree;
  if (s == "raw-rand") return EngineKind::kRawRandom;
  if (s == "raw-seq") return EngineKind::kRawSequential;
  bad(where + ": unknown engine \"" + s + "\"");
}

PrepareState parse_prepare(const std::string& s, const std::string& where) {
  if (s == "trimmed") return PrepareState::kTrimmed;
  if (s == "preconditioned") return PrepareState::kPreconditioned;
  bad(where + ": unknown prepare state \"" + s + "\"");
}

AllocPolicy parse_policy(const std::string& s, const std::string& where) {
  if (s == "first-fit") return AllocPolicy::kFirstFit;
  if (s == "next-fit") return AllocPolicy::kNextFit;
  bad(where + ": unknown allocation policy \"" + s + "\"");
}

void apply_device(const json& d, DeviceProfile& p) {
  require_keys(d, "device.",
               {"profile", "logical_size", "page_size", "pages_per_block",
                "hw_op_fraction", "gc_trigger_free_blocks",
                "gc_stop_free_blocks", "page_program_us", "page_read_us",
                "block_erase_us", "parallelism", "write_cache_pages",
                "cache_drain_pages_per_ms", "cache_ingest_pages_per_us",
                "single_frontier"});
  if (d.contains("profile"))
    p = profile_by_name(get_string(d["profile"], "device.profile"));
  if (d.contains("logical_size"))
    p.logical_bytes = get_size(d["logical_size"], "device.logical_size");
  if (d.contains("page_size"))
    p.page_bytes = static_cast<std::uint32_t>(
        get_size(d["page_size"], "device.page_size"));
  if (d.contains("pages_per_block"))
    p.pages_per_block = static_cast<std::uint32_t>(
        get_uint(d["pages_per_block"], "device.pages_per_block"));
  if (d.contains("hw_op_fraction"))
    p.hw_op_fraction = get_number(d["hw_op_fraction"], "device.hw_op_fraction");
  if (d.contains("gc_trigger_free_blocks"))
    p.gc_trigger_free_blocks = static_cast<std::uint32_t>(get_uint(
        d["gc_trigger_free_blocks"], "device.gc_trigger_free_blocks"));
  if (d.contains("gc_stop_free_blocks"))
    p.gc_stop_free_blocks = static_cast<std::uint32_t>(
        get_uint(d["gc_stop_free_blocks"], "device.gc_stop_free_blocks"));
  if (d.contains("page_program_us"))
    p.page_program_us =
        get_number(d["page_program_us"], "device.page_program_us");
  if (d.contains("page_read_us"))
    p.page_read_us = get_number(d["page_read_us"], "device.page_read_us");
  if (d.contains("block_erase_us"))
    p.block_erase_us = get_number(d["block_erase_us"], "device.block_erase_us");
  if (d.contains("parallelism"))
    p.parallelism = static_cast<std::uint32_t>(
        get_uint(d["parallelism"], "device.parallelism"));
  if (d.contains("write_cache_pages"))
    p.write_cache_pages =
        get_uint(d["write_cache_pages"], "device.write_cache_pages");
  if (d.contains("cache_drain_pages_per_ms"))
    p.cache_drain_pages_per_ms = get_number(d["cache_drain_pages_per_ms"],
                                            "device.cache_drain_pages_per_ms");
  if (d.contains("cache_ingest_pages_per_us"))
    p.cache_ingest_pages_per_us = get_number(
        d["cache_ingest_pages_per_us"], "device.cache_ingest_pages_per_us");
  if (d.contains("single_frontier"))
    p.single_frontier = get_bool(d["single_frontier"], "device.single_frontier");
}

void apply_lsm(const json& d, LsmParams& p) {
  require_keys(d, "workload.lsm.",
               {"memtable_size", "l1_trigger_files", "size_ratio",
                "max_levels", "sst_file_pages", "survival_ratio",
                "last_level_slack", "min_deep_level_size", "load_level_fill",
                "per_op_cpu_us", "wal", "writer_chunk_pages",
                "writer_backlog_pages"});
  if (d.contains("wal")) p.wal = get_bool(d["wal"], "workload.lsm.wal");
  if (d.contains("writer_chunk_pages"))
    p.writer_chunk_pages =
        get_uint(d["writer_chunk_pages"], "workload.lsm.writer_chunk_pages");
  if (d.contains("writer_backlog_pages"))
    p.writer_backlog_pages = get_uint(d["writer_backlog_pages"],
                                      "workload.lsm.writer_backlog_pages");
  if (d.contains("memtable_size"))
    p.memtable_bytes = get_size(d["memtable_size"], "workload.lsm.memtable_size");
  if (d.contains("l1_trigger_files"))
    p.l1_trigger_files = static_cast<std::uint32_t>(
        get_uint(d["l1_trigger_files"], "workload.lsm.l1_trigger_files"));
  if (d.contains("size_ratio"))
    p.size_ratio = static_cast<std::uint32_t>(
        get_uint(d["size_ratio"], "workload.lsm.size_ratio"));
  if (d.contains("max_levels"))
    p.max_levels = static_cast<std::uint32_t>(
        get_uint(d["max_levels"], "workload.lsm.max_levels"));
  if (d.contains("sst_file_pages"))
    p.sst_file_pages = get_uint(d["sst_file_pages"], "workload.lsm.sst_file_pages");
  if (d.contains("survival_ratio"))
    p.survival_ratio =
        get_number(d["survival_ratio"], "workload.lsm.survival_ratio");
  if (d.contains("last_level_slack"))
    p.last_level_slack =
        get_number(d["last_level_slack"], "workload.lsm.last_level_slack");
  if (d.contains("min_deep_level_size"))
    p.min_deep_level_bytes =
        get_size(d["min_deep_level_size"], "workload.lsm.min_deep_level_size");
  if (d.contains("load_level_fill"))
    p.load_level_fill =
        get_number(d["load_level_fill"], "workload.lsm.load_level_fill");
  if (d.contains("per_op_cpu_us"))
    p.per_op_cpu_us = get_number(d["per_op_cpu_us"], "workload.lsm.per_op_cpu_us");
}

void apply_btree(const json& d, BtreeParams& p) {
  require_keys(d, "workload.btree.",
               {"footprint_amp", "space_amp", "write_multiplier",
                "checkpoint_every_ops", "per_op_cpu_us"});
  if (d.contains("footprint_amp"))
    p.footprint_amp =
        get_number(d["footprint_amp"], "workload.btree.footprint_amp");
  if (d.contains("space_amp"))
    p.space_amp = get_number(d["space_amp"], "workload.btree.space_amp");
  if (d.contains("write_multiplier"))
    p.write_multiplier =
        get_number(d["write_multiplier"], "workload.btree.write_multiplier");
  if (d.contains("checkpoint_every_ops"))
    p.checkpoint_every_ops = static_cast<std::uint32_t>(get_uint(
        d["checkpoint_every_ops"], "workload.btree.checkpoint_every_ops"));
  if (d.contains("per_op_cpu_us"))
    p.per_op_cpu_us =
        get_number(d["per_op_cpu_us"], "workload.btree.per_op_cpu_us");
}

void apply_raw(const json& d, RawParams& p) {
  require_keys(d, "workload.raw.", {"region_fraction", "io_pages"});
  if (d.contains("region_fraction"))
    p.region_fraction =
        get_number(d["region_fraction"], "workload.raw.region_fraction");
  if (d.contains("io_pages"))
    p.io_pages = static_cast<std::uint32_t>(
        get_uint(d["io_pages"], "workload.raw.io_pages"));
}

void apply_workload(const json& d, RunConfig& c) {
  require_keys(d, "workload.",
               {"engine", "dataset_fraction", "key_size", "value_size",
                "write_fraction", "lsm", "btree", "raw"});
  if (d.contains("engine"))
    c.engine = parse_engine(get_string(d["engine"], "workload.engine"),
                            "workload.engine");
  if (d.contains("dataset_fraction"))
    c.dataset_fraction =
        get_number(d["dataset_fraction"], "workload.dataset_fraction");
  if (d.contains("key_size"))
    c.key_bytes = static_cast<std::uint32_t>(
        get_size(d["key_size"], "workload.key_size"));
  if (d.contains("value_size"))
    c.value_bytes = static_cast<std::uint32_t>(
        get_size(d["value_size"], "workload.value_size"));
  if (d.contains("write_fraction"))
    c.write_fraction = get_number(d["write_fraction"], "workload.write_fraction");
  if (d.contains("lsm")) apply_lsm(d["lsm"], c.lsm);
  if (d.contains("btree")) apply_btree(d["btree"], c.btree);
  if (d.contains("raw")) apply_raw(d["raw"], c.raw);
}

void apply_steady(const json& d, SteadyConfig& s) {
  require_keys(d, "run.steady.",
               {"k_sigma", "h_sigma", "warmup_windows", "quiet_windows",
                "capacity_multiple"});
  if (d.contains("k_sigma"))
    s.k_sigma = get_number(d["k_sigma"], "run.steady.k_sigma");
  if (d.contains("h_sigma"))
    s.h_sigma = get_number(d["h_sigma"], "run.steady.h_sigma");
  if (d.contains("warmup_windows"))
    s.warmup_windows = static_cast<int>(
        get_uint(d["warmup_windows"], "run.steady.warmup_windows"));
  if (d.contains("quiet_windows"))
    s.quiet_windows = static_cast<int>(
        get_uint(d["quiet_windows"], "run.steady.quiet_windows"));
  if (d.contains("capacity_multiple"))
    s.capacity_multiple =
        get_number(d["capacity_multiple"], "run.steady.capacity_multiple");
}

void apply_run(const json& d, RunConfig& c, std::uint64_t& base_seed) {
  require_keys(d, "run.",
               {"budget_capacity_x", "window_minutes", "seed", "steady"});
  if (d.contains("budget_capacity_x"))
    c.budget_capacity_x =
        get_number(d["budget_capacity_x"], "run.budget_capacity_x");
  if (d.contains("window_minutes"))
    c.window_minutes = get_number(d["window_minutes"], "run.window_minutes");
  if (d.contains("seed")) base_seed = get_uint(d["seed"], "run.seed");
  if (d.contains("steady")) apply_steady(d["steady"], c.steady);
}

void apply_partition(const json& d, RunConfig& c) {
  require_keys(d, "partition.",
               {"fraction", "alloc_policy", "discard_on_delete"});
  if (d.contains("fraction"))
    c.partition_fraction = get_number(d["fraction"], "partition.fraction");
  if (d.contains("alloc_policy"))
    c.alloc_policy =
        parse_policy(get_string(d["alloc_policy"], "partition.alloc_policy"),
                     "partition.alloc_policy");
  if (d.contains("discard_on_delete"))
    c.discard_on_delete =
        get_bool(d["discard_on_delete"], "partition.discard_on_delete");
}

// Applies every section of the tree that configures a single run.
void apply_run_sections(const json& root, RunConfig& c,
                        std::uint64_t& base_seed) {
  if (root.contains("device")) apply_device(root["device"], c.profile);
  if (root.contains("partition")) apply_partition(root["partition"], c);
  if (root.contains("prepare"))
    c.prepare = parse_prepare(get_string(root["prepare"], "prepare"), "prepare");
  if (root.contains("workload")) apply_workload(root["workload"], c);
  if (root.contains("run")) apply_run(root["run"], c, base_seed);
}

template <typename T, typename F>
std::vector<T> get_axis(const json& v, const std::string& where, F item) {
  if (!v.is_array() || v.empty()) bad(where + " must be a non-empty array");
  std::vector<T> out;
  for (const json& e : v) out.push_back(item(e));
  return out;
}

void set_path(json& root, const std::string& path, const json& value) {
  json* node = &root;
  std::size_t pos = 0;
  while (true) {
    std::size_t dot = path.find('.', pos);
    std::string key = path.substr(pos, dot - pos);
    if (key.empty()) bad("bad --set path \"" + path + "\"");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    if (!node->contains(key)) (*node)[key] = json::object();
    node = &(*node)[key];
    if (!node->is_object()) bad("--set path \"" + path + "\" crosses a value");
    pos = dot + 1;
  }
}

}  // namespace

std::uint64_t parse_size(const std::string& text) {
  if (text.empty()) bad("empty size");
  std::size_t i = 0;
  while (i < text.size() &&
         (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.'))
    ++i;
  if (i == 0) bad("bad size \"" + text + "\"");
  double num;
  try {
    std::size_t used = 0;
    num = std::stod(text.substr(0, i), &used);
    if (used != i) bad("bad size \"" + text + "\"");
  } catch (const std::exception&) {
    bad("bad size \"" + text + "\"");
  }
  std::string suffix = text.substr(i);
  double mult = 1.0;
  if (suffix == "" || suffix == "B")
    mult = 1.0;
  else if (suffix == "KiB")
    mult = static_cast<double>(kKiB);
  else if (suffix == "MiB")
    mult = static_cast<double>(kMiB);
  else if (suffix == "GiB")
    mult = static_cast<double>(kGiB);
  else
    bad("bad size suffix \"" + suffix + "\" in \"" + text + "\"");
  double bytes = num * mult;
  if (bytes < 0 || bytes > 9e18) bad("size out of range \"" + text + "\"");
  double rounded = std::round(bytes);
  if (std::abs(bytes - rounded) > 1e-6)
    bad("size \"" + text + "\" is not a whole number of bytes");
  return static_cast<std::uint64_t>(rounded);
}

LoadedConfig parse_config(const std::string& text,
                          const std::vector<std::string>& overrides) {
  json root = json::object();
  if (!text.empty()) {
    try {
      root = json::parse(text);
    } catch (const json::parse_error& e) {
      bad(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) bad("config root must be an object");
  }

  for (const std::string& ov : overrides) {
    std::size_t eq = ov.find('=');
    if (eq == std::string::npos || eq == 0)
      bad("--set expects key=value, got \"" + ov + "\"");
    std::string key = ov.substr(0, eq);
    std::string raw = ov.substr(eq + 1);
    json value;
    try {
      value = json::parse(raw);
    } catch (const json::parse_error&) {
      value = raw;  // unquoted strings like "128B" or "btree"
    }
    set_path(root, key, value);
  }

  require_keys(root, "",
               {"scenario", "label", "device", "partition", "prepare",
                "workload", "run", "sweep", "output"});

  LoadedConfig out;
  std::uint64_t base_seed = 42;
  RunConfig base;
  base.profile = profile_by_name("desk");
  apply_run_sections(root, base, base_seed);

  if (root.contains("output")) {
    const json& o = root["output"];
    require_keys(o, "output.", {"dir", "trace"});
    if (o.contains("dir")) out.out_dir = get_string(o["dir"], "output.dir");
    if (o.contains("trace")) out.trace = get_bool(o["trace"], "output.trace");
  }

  std::string scenario;
  if (root.contains("scenario"))
    scenario = get_string(root["scenario"], "scenario");

  if (!scenario.empty() && scenario != "custom") {
    if (root.contains("sweep"))
      bad("a preset scenario cannot be combined with a sweep");
    Scenario sc = make_scenario(scenario, base_seed);
    out.scenario = sc.name;
    out.title = sc.title;
    // Explicit config keys act as overrides on every preset run.
    for (RunConfig& c : sc.runs) {
      std::uint64_t ignored = base_seed;
      apply_run_sections(root, c, ignored);
      c.label.clear();
    }
    finalize_runs(sc.runs, base_seed);
    out.runs = std::move(sc.runs);
    out.is_sweep = out.runs.size() > 1;
    return out;
  }

  std::vector<RunConfig> runs{base};
  if (root.contains("sweep")) {
    const json& sw = root["sweep"];
    require_keys(sw, "sweep.",
                 {"engines", "prepares", "dataset_fractions",
                  "partition_fractions", "profiles", "discard"});
    auto expand = [&runs](auto&& values, auto&& assign) {
      std::vector<RunConfig> next;
      next.reserve(runs.size() * values.size());
      for (const RunConfig& r : runs)
        for (const auto& v : values) {
          next.push_back(r);
          assign(next.back(), v);
        }
      runs = std::move(next);
    };
    if (sw.contains("engines"))
      expand(get_axis<EngineKind>(
                 sw["engines"], "sweep.engines",
                 [](const json& e) {
                   return parse_engine(get_string(e, "sweep.engines"),
                                       "sweep.engines");
                 }),
             [](RunConfig& c, EngineKind e) { c.engine = e; });
    if (sw.contains("prepares"))
      expand(get_axis<PrepareState>(
                 sw["prepares"], "sweep.prepares",
                 [](const json& e) {
                   return parse_prepare(get_string(e, "sweep.prepares"),
                                        "sweep.prepares");
                 }),
             [](RunConfig& c, PrepareState p) { c.prepare = p; });
    if (sw.contains("profiles"))
      expand(get_axis<DeviceProfile>(
                 sw["profiles"], "sweep.profiles",
                 [](const json& e) {
                   return profile_by_name(get_string(e, "sweep.profiles"));
                 }),
             [](RunConfig& c, const DeviceProfile& p) { c.profile = p; });
    if (sw.contains("dataset_fractions"))
      expand(get_axis<double>(sw["dataset_fractions"],
                              "sweep.dataset_fractions",
                              [](const json& e) {
                                return get_number(e,
                                                  "sweep.dataset_fractions");
                              }),
             [](RunConfig& c, double f) { c.dataset_fraction = f; });
    if (sw.contains("partition_fractions"))
      expand(get_axis<double>(sw["partition_fractions"],
                              "sweep.partition_fractions",
                              [](const json& e) {
                                return get_number(
                                    e, "sweep.partition_fractions");
                              }),
             [](RunConfig& c, double f) { c.partition_fraction = f; });
    if (sw.contains("discard"))
      expand(get_axis<bool>(
                 sw["discard"], "sweep.discard",
                 [](const json& e) { return get_bool(e, "sweep.discard"); }),
             [](RunConfig& c, bool d) { c.discard_on_delete = d; });
  }

  if (root.contains("label") && runs.size() == 1)
    runs[0].label = get_string(root["label"], "label");
  finalize_runs(runs, base_seed);
  out.runs = std::move(runs);
  out.is_sweep = out.runs.size() > 1;
  return out;
}

LoadedConfig load_config_file(const std::string& path,
                              const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

}  // namespace ssdlab
