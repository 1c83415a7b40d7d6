// ssdlab: deterministic flash-device and tree-workload benchmarking lab.
//
// Exit codes: 0 success, 2 configuration error, 3 out-of-space outcome in
// a single (non-sweep) run, 4 internal invariant violation.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ssdlab/config.hpp"
#include "ssdlab/report.hpp"
#include "ssdlab/scenarios.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitOutOfSpace = 3;
constexpr int kExitInternal = 4;

struct CommonArgs {
  std::string scenario;
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool trace = false;
  int parallel = 1;
};

ssdlab::LoadedConfig load(const CommonArgs& args) {
  std::vector<std::string> overrides = args.sets;
  if (args.seed_given)
    overrides.push_back("run.seed=" + std::to_string(args.seed));
  if (!args.scenario.empty())
    overrides.push_back("scenario=" + args.scenario);
  if (args.trace) overrides.push_back("output.trace=true");

  if (args.config_path.empty())
    return ssdlab::parse_config("", overrides);
  return ssdlab::load_config_file(args.config_path, overrides);
}

std::string resolve_out_dir(const CommonArgs& args,
                            const ssdlab::LoadedConfig& lc) {
  if (!args.out_dir.empty()) return args.out_dir;
  if (!lc.out_dir.empty()) return lc.out_dir;
  if (const char* env = std::getenv("SSDLAB_OUT_DIR"); env && *env)
    return env;
  return "out";
}

void add_common(CLI::App* cmd, CommonArgs& args, bool with_scenario) {
  if (with_scenario)
    cmd->add_option("scenario", args.scenario,
                    "preset scenario name (P1..P7)");
  cmd->add_option("--config", args.config_path, "config file (JSON)");
  cmd->add_option("--set", args.sets,
                  "override a config key, e.g. workload.value_size=128B")
      ->take_all();
  cmd->add_option("--seed", args.seed, "base seed")
      ->each([&args](const std::string&) { args.seed_given = true; });
  cmd->add_option("--out-dir", args.out_dir,
                  "output directory (default $SSDLAB_OUT_DIR or ./out)");
  cmd->add_flag("--trace", args.trace, "stream the flash trace per run");
  cmd->add_option("--parallel", args.parallel, "concurrent runs")
      ->check(CLI::PositiveNumber);
}

int cmd_run(const CommonArgs& args) {
  ssdlab::LoadedConfig lc = load(args);
  ssdlab::Scenario sc{lc.scenario, lc.title, lc.runs};
  const std::string out_dir = resolve_out_dir(args, lc);

  ssdlab::ScenarioOutcome outcome =
      ssdlab::run_scenario(sc, out_dir, args.parallel, lc.trace);

  for (const ssdlab::RunResult& r : outcome.results)
    std::printf("%-40s %-13s steady_ops_s=%-10.6g waa=%-8.6g wad=%.6g\n",
                r.summary.label.c_str(), r.summary.outcome.c_str(),
                r.summary.steady_ops_s, r.summary.waa_end, r.summary.wad_end);
  std::printf("outputs: %s\n",
              (std::filesystem::path(out_dir) / sc.name).string().c_str());

  if (outcome.any_out_of_space && !lc.is_sweep) return kExitOutOfSpace;
  return kExitOk;
}

int cmd_list() {
  std::printf("scenarios:\n");
  for (const std::string& name : ssdlab::scenario_names()) {
    ssdlab::Scenario sc = ssdlab::make_scenario(name, 42);
    std::printf("  %-4s %s (%zu runs)\n", sc.name.c_str(), sc.title.c_str(),
                sc.runs.size());
  }
  std::printf("device profiles:\n");
  for (const ssdlab::DeviceProfile& p : ssdlab::profile_library())
    std::printf("  %-12s %llu MiB logical, %g us program, parallelism %u\n",
                p.name.c_str(),
                static_cast<unsigned long long>(p.logical_bytes /
                                                (1024 * 1024)),
                p.page_program_us, p.parallelism);
  return kExitOk;
}

int cmd_validate(const CommonArgs& args) {
  ssdlab::LoadedConfig lc = load(args);
  for (const ssdlab::RunConfig& r : lc.runs) r.validate();
  std::printf("ok: %zu run(s) in scenario %s\n", lc.runs.size(),
              lc.scenario.c_str());
  return kExitOk;
}

int cmd_report(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path summary = fs::path(dir) / "summary.csv";
  std::vector<ssdlab::RunSummary> rows =
      ssdlab::read_summary_csv(summary.string());
  if (rows.empty()) throw ssdlab::ConfigError("no runs in " + summary.string());

  std::string name = rows.front().scenario;
  std::string title = "custom experiment";
  for (const std::string& preset : ssdlab::scenario_names())
    if (preset == name) title = ssdlab::make_scenario(name, 42).title;

  const std::string body =
      ssdlab::render_scenario_report(name, title, rows);
  FILE* f = std::fopen((fs::path(dir) / "report.txt").string().c_str(), "w");
  if (!f)
    throw std::runtime_error("cannot write report.txt under " + dir);
  std::fputs(body.c_str(), f);
  std::fclose(f);
  std::fputs(body.c_str(), stdout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic flash-device benchmarking lab"};
  app.require_subcommand(1);

  CommonArgs run_args;
  CLI::App* run = app.add_subcommand("run", "run a scenario or config");
  add_common(run, run_args, true);

  CLI::App* list = app.add_subcommand("list", "list scenarios and profiles");

  CommonArgs val_args;
  CLI::App* validate =
      app.add_subcommand("validate", "check a config without running");
  add_common(validate, val_args, true);

  std::string report_dir;
  CLI::App* report =
      app.add_subcommand("report", "regenerate report.txt from summary.csv");
  report->add_option("dir", report_dir, "scenario output directory")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(run_args);
    if (list->parsed()) return cmd_list();
    if (validate->parsed()) return cmd_validate(val_args);
    if (report->parsed()) return cmd_report(report_dir);
  } catch (const ssdlab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const ssdlab::OutOfSpaceError& e) {
    std::fprintf(stderr, "out of space: %s\n", e.what());
    return kExitOutOfSpace;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitOk;
}
