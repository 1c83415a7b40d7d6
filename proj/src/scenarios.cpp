#include "ssdlab/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ssdlab/costmodel.hpp"
#include "ssdlab/device.hpp"
#include "ssdlab/report.hpp"
#include "ssdlab/rng.hpp"

namespace ssdlab {

const char* to_string(PrepareState s) {
  return s == PrepareState::kTrimmed ? "trimmed" : "preconditioned";
}

const char* to_string(EngineKind e) {
  switch (e) {
    case EngineKind::kLsm: return "lsm";
    case EngineKind::kBtree: return "btree";
    case EngineKind::kRawRandom: return "raw-rand";
    case EngineKind::kRawSequential: return "raw-seq";
  }
  return "?";
}

std::uint64_t RunConfig::partition_pages() const {
  return static_cast<std::uint64_t>(
      static_cast<double>(profile.logical_pages()) * partition_fraction);
}

std::uint64_t RunConfig::dataset_bytes() const {
  return static_cast<std::uint64_t>(
      static_cast<double>(profile.logical_bytes) * dataset_fraction);
}

KvSpec RunConfig::kv_spec() const {
  KvSpec kv;
  kv.key_bytes = key_bytes;
  kv.value_bytes = value_bytes;
  kv.write_fraction = write_fraction;
  kv.seed = seed;
  kv.num_keys = dataset_bytes() / kv.kv_bytes();
  return kv;
}

void RunConfig::validate() const {
  profile.validate();
  if (partition_fraction <= 0.0 || partition_fraction > 1.0)
    throw ConfigError("run: partition_fraction out of (0, 1]");
  if (dataset_fraction <= 0.0 || dataset_fraction >= 1.0)
    throw ConfigError("run: dataset_fraction out of (0, 1)");
  if (budget_capacity_x <= 0.0)
    throw ConfigError("run: budget_capacity_x must be positive");
  if (window_minutes <= 0.0)
    throw ConfigError("run: window_minutes must be positive");
  if (partition_pages() == 0) throw ConfigError("run: empty partition");
  kv_spec().validate();
  lsm.validate();
  btree.validate();
  // Engine construction validates geometry against the partition; do a
  // dry construction so `validate` accepts exactly what `run` would.
  Device dev(profile);
  Partition part(dev, 0, partition_pages(), alloc_policy, discard_on_delete);
  KvSpec kv = kv_spec();
  switch (engine) {
    case EngineKind::kLsm: { LsmEngine e(part, kv, lsm); break; }
    case EngineKind::kBtree: { BtreeEngine e(part, kv, btree); break; }
    case EngineKind::kRawRandom:
    case EngineKind::kRawSequential: {
      RawParams rp = raw;
      rp.sequential = engine == EngineKind::kRawSequential;
      RawEngine e(part, kv, rp);
      break;
    }
  }
}

namespace {

struct TraceWriter {
  FILE* f = nullptr;
  std::vector<TraceRecord> buf;

  explicit TraceWriter(const std::string& path) {
    if (path.empty()) return;
    f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + path);
    std::fputs("clock_us,kind,lba,block\n", f);
  }
  ~TraceWriter() {
    if (f) std::fclose(f);
  }
  void flush() {
    if (!f) return;
    for (const TraceRecord& r : buf) {
      const char* kind = "?";
      switch (r.kind) {
        case TraceKind::kHostWrite: kind = "HOST_WRITE"; break;
        case TraceKind::kGcRelocate: kind = "GC_RELOCATE"; break;
        case TraceKind::kErase: kind = "ERASE"; break;
        case TraceKind::kTrim: kind = "TRIM"; break;
      }
      if (r.lba == kNoLba)
        std::fprintf(f, "%.1f,%s,,%u\n", r.clock_us, kind, r.block);
      else
        std::fprintf(f, "%.1f,%s,%u,%u\n", r.clock_us, kind, r.lba, r.block);
    }
    buf.clear();
  }
};

std::string fmt_g(double v) {
  char b[64];
  std::snprintf(b, sizeof b, "%.6g", v);
  return b;
}

}  // namespace

RunResult run_experiment(const RunConfig& cfg, const std::string& trace_path) {
  cfg.validate();

  Device dev(cfg.profile);
  const std::uint64_t page = cfg.profile.page_bytes;
  const std::uint64_t part_pages = cfg.partition_pages();

  TraceWriter trace(trace_path);
  if (trace.f) dev.set_trace(&trace.buf);

  switch (cfg.prepare) {
    case PrepareState::kTrimmed:
      prepare_trimmed(dev);
      break;
    case PrepareState::kPreconditioned:
      // Worst-case layout inside the partition; any reserved tail was
      // trimmed up front and stays untouched, which is the whole point
      // of reserving it.
      prepare_preconditioned(dev, 0, part_pages, cfg.seed);
      break;
  }

  Partition part(dev, 0, part_pages, cfg.alloc_policy, cfg.discard_on_delete);
  KvSpec kv = cfg.kv_spec();

  std::unique_ptr<Engine> engine;
  RawParams rp = cfg.raw;
  switch (cfg.engine) {
    case EngineKind::kLsm:
      engine = std::make_unique<LsmEngine>(part, kv, cfg.lsm);
      break;
    case EngineKind::kBtree:
      engine = std::make_unique<BtreeEngine>(part, kv, cfg.btree);
      break;
    case EngineKind::kRawSequential:
      rp.sequential = true;
      engine = std::make_unique<RawEngine>(part, kv, rp);
      break;
    case EngineKind::kRawRandom:
      rp.sequential = false;
      engine = std::make_unique<RawEngine>(part, kv, rp);
      break;
  }

  const double load_t0 = dev.clock_us();
  const DeviceCounters before_load = dev.counters();
  bool out_of_space = false;
  try {
    engine->load();
  } catch (const OutOfSpaceError&) {
    out_of_space = true;  // a first-class outcome, not a crash
  }
  trace.flush();

  // Benchmark phase: loading is done, metrics start clean here.
  const double t0 = dev.clock_us();
  const DeviceCounters base = dev.counters();
  dev.reset_lba_write_counts();

  RunResult res;
  RunSummary& s = res.summary;
  s.label = cfg.label;
  s.scenario = cfg.scenario;
  s.engine = engine->name();
  s.profile = cfg.profile.name;
  s.prepare = to_string(cfg.prepare);
  s.dataset_fraction = cfg.dataset_fraction;
  s.partition_fraction = cfg.partition_fraction;
  s.value_bytes = cfg.value_bytes;
  s.seed = cfg.seed;
  s.load_min = (t0 - load_t0) / 60e6;
  s.load_host_bytes =
      (base.host_pages_written - before_load.host_pages_written) * page;

  const std::uint64_t dataset = cfg.dataset_bytes();
  const std::uint64_t budget_app = static_cast<std::uint64_t>(
      cfg.budget_capacity_x * static_cast<double>(cfg.profile.logical_bytes));
  const double window_us = cfg.window_minutes * 60e6;

  SteadyDetector detector(cfg.steady, cfg.profile.logical_bytes);
  StepStats tot;
  std::vector<double> minute_ops;
  double space_amp_max =
      static_cast<double>(part.high_water_pages() * page) /
      static_cast<double>(dataset);

  double ops_at_last_sample_ = 0.0, host_at_last_sample_ = 0.0;
  auto util_bytes = [&] { return engine->disk_util_bytes(); };
  auto emit_sample = [&](double t_us, const Sample* prev) {
    Sample smp;
    smp.t_us = t_us - t0;
    const DeviceCounters& c = dev.counters();
    std::uint64_t host = (c.host_pages_written - base.host_pages_written) * page;
    std::uint64_t flash =
        (c.flash_pages_programmed - base.flash_pages_programmed) * page;
    smp.waa_cum = wa_app(host, tot.app_bytes);
    smp.wad_cum = host == 0 ? 1.0
                            : static_cast<double>(flash) /
                                  static_cast<double>(host);
    smp.disk_util_B = util_bytes();
    smp.space_amp =
        static_cast<double>(smp.disk_util_B) / static_cast<double>(dataset);
    if (prev) {
      double dt_s = (smp.t_us - prev->t_us) / 1e6;
      double d_ops = static_cast<double>(tot.ops) - ops_at_last_sample_;
      double d_host = static_cast<double>(host) - host_at_last_sample_;
      smp.kv_ops_s = dt_s > 0 ? d_ops / dt_s : 0.0;
      smp.dev_wr_Bps = dt_s > 0 ? d_host / dt_s : 0.0;
    }
    ops_at_last_sample_ = static_cast<double>(tot.ops);
    host_at_last_sample_ = static_cast<double>(host);
    res.samples.push_back(smp);
    return smp;
  };

  emit_sample(t0, nullptr);

  double next_window = t0 + window_us;
  std::uint64_t steady_ops_base = 0;
  std::uint64_t steady_host_base = 0, steady_flash_base = 0;
  std::uint64_t steady_app_base = 0;
  double steady_t = -1.0;

  const std::uint32_t batch = 32;
  while (!out_of_space && tot.app_bytes < budget_app) {
    try {
      tot += engine->step(batch);
    } catch (const OutOfSpaceError&) {
      out_of_space = true;
      break;
    }
    space_amp_max = std::max(
        space_amp_max, static_cast<double>(part.high_water_pages() * page) /
                           static_cast<double>(dataset));

    // Attribute this batch to its virtual minute for the CoV series.
    auto minute = static_cast<std::size_t>((dev.clock_us() - t0) / 60e6);
    if (minute_ops.size() <= minute) minute_ops.resize(minute + 1, 0.0);
    minute_ops[minute] += batch;

    while (dev.clock_us() >= next_window) {
      Sample smp = emit_sample(next_window, &res.samples.back());
      const DeviceCounters& c = dev.counters();
      std::uint64_t host =
          (c.host_pages_written - base.host_pages_written) * page;
      if (detector.feed(next_window - t0, smp.kv_ops_s, smp.waa_cum,
                        smp.wad_cum, host)) {
        steady_t = next_window - t0;
        steady_ops_base = tot.ops;
        steady_app_base = tot.app_bytes;
        steady_host_base = host;
        steady_flash_base =
            (c.flash_pages_programmed - base.flash_pages_programmed) * page;
      }
      next_window += window_us;
      trace.flush();
    }
  }
  trace.flush();

  const DeviceCounters& end = dev.counters();
  const std::uint64_t host_bytes =
      (end.host_pages_written - base.host_pages_written) * page;
  const std::uint64_t flash_bytes =
      (end.flash_pages_programmed - base.flash_pages_programmed) * page;
  const double t_end = dev.clock_us();

  s.outcome = out_of_space ? "out_of_space" : "completed";
  s.ops = tot.ops;
  s.app_bytes = tot.app_bytes;
  s.host_bytes = host_bytes;
  s.flash_bytes = flash_bytes;
  s.virtual_min = (t_end - t0) / 60e6;
  s.waa_end = wa_app(host_bytes, tot.app_bytes);
  s.wad_end = host_bytes == 0 ? 1.0
                              : static_cast<double>(flash_bytes) /
                                    static_cast<double>(host_bytes);
  s.space_amp_max = space_amp_max;

  // First 15 virtual minutes, the window the steady-state pitfall is
  // about.
  {
    double t15 = std::min(15.0 * 60e6, t_end - t0);
    double opsum = 0.0;
    for (std::size_t m = 0; m < minute_ops.size() && m < 15; ++m)
      opsum += minute_ops[m];
    s.transient_ops_s = t15 > 0 ? opsum / (t15 / 1e6) : 0.0;
  }

  if (detector.steady()) {
    s.steady_rule = detector.rule() == SteadyRule::kQuietWindows
                        ? "quiet-windows"
                        : "host-bytes";
    s.steady_at_min = steady_t / 60e6;
    double span_s = (t_end - t0 - steady_t) / 1e6;
    s.steady_ops_s =
        span_s > 0 ? static_cast<double>(tot.ops - steady_ops_base) / span_s
                   : 0.0;
    std::uint64_t h = host_bytes - steady_host_base;
    std::uint64_t f = flash_bytes - steady_flash_base;
    std::uint64_t a = tot.app_bytes - steady_app_base;
    s.waa_steady = wa_app(h, a);
    s.wad_steady =
        h == 0 ? 1.0 : static_cast<double>(f) / static_cast<double>(h);
    s.e2e_steady = s.waa_steady * s.wad_steady;
  } else {
    s.steady_rule = "none";
    s.steady_ops_s = s.virtual_min > 0
                         ? static_cast<double>(tot.ops) / (s.virtual_min * 60)
                         : 0.0;
    s.waa_steady = s.waa_end;
    s.wad_steady = s.wad_end;
    s.e2e_steady = s.waa_steady * s.wad_steady;
  }

  // 1-minute throughput variability past the transient window.
  {
    std::vector<double> buckets;
    for (std::size_t m = 15; m + 1 < minute_ops.size(); ++m)
      buckets.push_back(minute_ops[m]);
    s.cov_1min = buckets.size() >= 2 ? cov(buckets) : 0.0;
  }

  auto counts = dev.lba_write_counts();
  auto part_counts = counts.subspan(0, part_pages);
  s.unwritten_frac = fraction_unwritten(part_counts);
  res.cdf = lba_write_cdf(part_counts);

  dev.audit();
  return res;
}

namespace {

std::vector<RunResult> run_pool(const std::vector<RunConfig>& cfgs,
                                int parallel,
                                const std::vector<std::string>& trace_paths) {
  std::vector<RunResult> results(cfgs.size());
  if (parallel < 1) parallel = 1;
  std::mutex mu;
  std::size_t next = 0;
  std::exception_ptr first_error;

  auto worker = [&] {
    while (true) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= cfgs.size() || first_error) return;
        i = next++;
      }
      try {
        std::string tp =
            i < trace_paths.size() ? trace_paths[i] : std::string();
        results[i] = run_experiment(cfgs[i], tp);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  int n = std::min<int>(parallel, static_cast<int>(cfgs.size()));
  pool.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

}  // namespace

std::vector<RunResult> run_many(const std::vector<RunConfig>& cfgs,
                                int parallel) {
  return run_pool(cfgs, parallel, {});
}

// ---------------------------------------------------------------------
// Scenario presets.

namespace {

std::uint64_t grid_seed(std::uint64_t base, const RunConfig& c) {
  return derive_seed(
      base,
      {static_cast<std::uint64_t>(c.engine),
       static_cast<std::uint64_t>(c.prepare),
       static_cast<std::uint64_t>(c.dataset_fraction * 1e6),
       static_cast<std::uint64_t>(c.partition_fraction * 1e6),
       std::hash<std::string>{}(c.profile.name),
       static_cast<std::uint64_t>(c.discard_on_delete)});
}

std::string frac_tag(double f) {
  char b[32];
  std::snprintf(b, sizeof b, "%g", f);
  std::string s(b);
  for (char& ch : s)
    if (ch == '.') ch = 'p';
  return s;
}

RunConfig base_run(const std::string& scenario, EngineKind e,
                   PrepareState prep) {
  RunConfig c;
  c.scenario = scenario;
  c.engine = e;
  c.prepare = prep;
  c.profile = profile_by_name("desk");
  return c;
}

}  // namespace

void finalize_runs(std::vector<RunConfig>& runs, std::uint64_t base_seed) {
  for (RunConfig& c : runs) {
    c.seed = grid_seed(base_seed, c);
    if (c.label.empty()) {
      c.label = std::string(to_string(c.engine)) + "-" +
                to_string(c.prepare);
      if (c.dataset_fraction != 0.5)
        c.label += "-ds" + frac_tag(c.dataset_fraction);
      if (c.partition_fraction != 1.0)
        c.label += "-op" + frac_tag(1.0 - c.partition_fraction);
      if (c.profile.name != "desk") c.label += "-" + c.profile.name;
      if (c.discard_on_delete) c.label += "-discard";
    }
  }
}

std::vector<std::string> scenario_names() {
  return {"P1", "P2", "P3", "P4", "P5", "P6", "P7"};
}

Scenario make_scenario(const std::string& name, std::uint64_t base_seed) {
  Scenario sc;
  sc.name = name;
  std::vector<RunConfig>& runs = sc.runs;

  if (name == "P1") {
    sc.title = "steady state vs transient throughput";
    runs.push_back(base_run(name, EngineKind::kLsm, PrepareState::kTrimmed));
  } else if (name == "P2") {
    sc.title = "application vs device write amplification";
    runs.push_back(
        base_run(name, EngineKind::kLsm, PrepareState::kPreconditioned));
    runs.push_back(
        base_run(name, EngineKind::kBtree, PrepareState::kPreconditioned));
    RunConfig d =
        base_run(name, EngineKind::kLsm, PrepareState::kPreconditioned);
    d.discard_on_delete = true;
    runs.push_back(d);
  } else if (name == "P3") {
    sc.title = "initial drive state";
    for (EngineKind e : {EngineKind::kLsm, EngineKind::kBtree})
      for (PrepareState p :
           {PrepareState::kTrimmed, PrepareState::kPreconditioned})
        runs.push_back(base_run(name, e, p));
  } else if (name == "P4") {
    sc.title = "dataset size";
    for (EngineKind e : {EngineKind::kLsm, EngineKind::kBtree})
      for (double f : {0.25, 0.5, 0.625, 0.75, 0.88}) {
        RunConfig c = base_run(name, e, PrepareState::kTrimmed);
        c.dataset_fraction = f;
        runs.push_back(c);
      }
  } else if (name == "P5") {
    sc.title = "space amplification and provisioning cost";
    for (EngineKind e : {EngineKind::kLsm, EngineKind::kBtree})
      for (double f : {0.25, 0.5, 0.625}) {
        RunConfig c = base_run(name, e, PrepareState::kTrimmed);
        c.dataset_fraction = f;
        runs.push_back(c);
      }
  } else if (name == "P6") {
    sc.title = "software over-provisioning";
    // The dataset backs off a little from the default so it still fits
    // the 75%-partition point with the usual space overhead on top.
    for (double part : {1.0, 0.875, 0.75}) {
      RunConfig c =
          base_run(name, EngineKind::kLsm, PrepareState::kPreconditioned);
      c.partition_fraction = part;
      c.dataset_fraction = 0.48;
      runs.push_back(c);
    }
    for (double part : {1.0, 0.75}) {
      RunConfig c =
          base_run(name, EngineKind::kBtree, PrepareState::kTrimmed);
      c.partition_fraction = part;
      c.dataset_fraction = 0.48;
      runs.push_back(c);
    }
  } else if (name == "P7") {
    sc.title = "device heterogeneity";
    for (EngineKind e : {EngineKind::kLsm, EngineKind::kBtree})
      for (const char* prof : {"desk", "sata-cache", "nvme-fast"}) {
        RunConfig c = base_run(name, e, PrepareState::kTrimmed);
        c.profile = profile_by_name(prof);
        runs.push_back(c);
      }
  } else {
    throw ConfigError("unknown scenario: " + name);
  }

  finalize_runs(runs, base_seed);
  return sc;
}

void write_summary_csv(const std::string& path,
                       const std::vector<RunSummary>& rows) {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot write " + path);
  std::fputs(
      "label,scenario,engine,profile,prepare,dataset_fraction,"
      "partition_fraction,value_bytes,seed,outcome,steady_rule,steady_at_min,"
      "transient_ops_s,steady_ops_s,waa_end,wad_end,waa_steady,wad_steady,"
      "e2e_steady,space_amp_max,unwritten_frac,cov_1min,ops,app_bytes,"
      "host_bytes,flash_bytes,virtual_min,load_min,load_host_bytes\n",
      f);
  for (const RunSummary& r : rows) {
    std::fprintf(
        f, "%s,%s,%s,%s,%s,%s,%s,%u,%llu,%s,%s,%s,%s,%s,%s,%s,%s,%s,%s,%s,%s,"
           "%s,%llu,%llu,%llu,%llu,%s,%s,%llu\n",
        r.label.c_str(), r.scenario.c_str(), r.engine.c_str(),
        r.profile.c_str(), r.prepare.c_str(), fmt_g(r.dataset_fraction).c_str(),
        fmt_g(r.partition_fraction).c_str(), r.value_bytes,
        static_cast<unsigned long long>(r.seed), r.outcome.c_str(),
        r.steady_rule.c_str(), fmt_g(r.steady_at_min).c_str(),
        fmt_g(r.transient_ops_s).c_str(), fmt_g(r.steady_ops_s).c_str(),
        fmt_g(r.waa_end).c_str(), fmt_g(r.wad_end).c_str(),
        fmt_g(r.waa_steady).c_str(), fmt_g(r.wad_steady).c_str(),
        fmt_g(r.e2e_steady).c_str(), fmt_g(r.space_amp_max).c_str(),
        fmt_g(r.unwritten_frac).c_str(), fmt_g(r.cov_1min).c_str(),
        static_cast<unsigned long long>(r.ops),
        static_cast<unsigned long long>(r.app_bytes),
        static_cast<unsigned long long>(r.host_bytes),
        static_cast<unsigned long long>(r.flash_bytes),
        fmt_g(r.virtual_min).c_str(), fmt_g(r.load_min).c_str(),
        static_cast<unsigned long long>(r.load_host_bytes));
  }
  std::fclose(f);
}

namespace {

void write_text(const std::string& path, const std::string& body) {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot write " + path);
  std::fputs(body.c_str(), f);
  std::fclose(f);
}

// P5 compares provisioning cost of the two engines using the measured
// steady throughput and worst-case space amplification of the mid-size
// (dataset_fraction 0.5) runs.
void write_p5_heatmap(const std::string& path,
                      const std::vector<RunSummary>& rows) {
  EngineEconomics lsm{"lsm", 0.0, 0.0};
  EngineEconomics btree{"btree", 0.0, 0.0};
  for (const RunSummary& r : rows) {
    if (r.outcome != "completed" || r.dataset_fraction != 0.5) continue;
    EngineEconomics& e = r.engine == "lsm" ? lsm : btree;
    e.space_amp = r.space_amp_max;
    e.ops_s_per_instance = r.steady_ops_s;
  }
  if (lsm.ops_s_per_instance <= 0.0 || btree.ops_s_per_instance <= 0.0)
    return;

  std::vector<double> datasets;
  for (double g = 4.0; g <= 64.0; g *= 2.0)
    datasets.push_back(g * static_cast<double>(kGiB));
  std::vector<double> targets;
  for (double t = 50.0; t <= 1600.0; t *= 2.0) targets.push_back(t);

  const double usable = 4.0 * static_cast<double>(kGiB);
  write_heatmap_csv(path, cost_heatmap(lsm, btree, usable, datasets, targets));
}

}  // namespace

ScenarioOutcome run_scenario(const Scenario& sc, const std::string& out_dir,
                             int parallel, bool trace) {
  namespace fs = std::filesystem;
  const fs::path root = fs::path(out_dir) / sc.name;
  fs::create_directories(root);

  std::vector<std::string> trace_paths(sc.runs.size());
  for (std::size_t i = 0; i < sc.runs.size(); ++i) {
    const fs::path run_dir = root / sc.runs[i].label;
    fs::create_directories(run_dir);
    if (trace) trace_paths[i] = (run_dir / "trace.csv").string();
  }

  ScenarioOutcome out;
  out.results = run_pool(sc.runs, parallel, trace_paths);

  std::vector<RunSummary> rows;
  rows.reserve(out.results.size());
  for (std::size_t i = 0; i < out.results.size(); ++i) {
    const RunResult& r = out.results[i];
    const fs::path run_dir = root / sc.runs[i].label;
    write_samples_csv((run_dir / "samples.csv").string(), r.samples);
    write_cdf_csv((run_dir / "cdf.csv").string(), r.cdf);
    write_summary_csv((run_dir / "summary.csv").string(), {r.summary});
    write_text((run_dir / "report.txt").string(),
               render_run_report(r.summary));
    if (r.summary.outcome == "out_of_space") out.any_out_of_space = true;
    rows.push_back(r.summary);
  }

  write_summary_csv((root / "summary.csv").string(), rows);
  write_text((root / "report.txt").string(),
             render_scenario_report(sc.name, sc.title, rows));
  if (sc.name == "P5") write_p5_heatmap((root / "heatmap.csv").string(), rows);
  return out;
}

}  // namespace ssdlab
