#pragma once

#include <string>
#include <vector>

#include "ssdlab/scenarios.hpp"

namespace ssdlab {

// The per-pitfall benchmarking guidelines rendered as an automated
// checklist over a set of run summaries. An item is flagged when the runs
// at hand do not demonstrate the guideline (e.g., a single dataset size
// cannot speak to the dataset-size pitfall).
struct ChecklistItem {
  int pitfall;
  std::string question;
  bool ok;
  std::string note;
};

std::vector<ChecklistItem> guideline_checklist(
    const std::vector<RunSummary>& runs);

// Reads back a summary.csv produced by write_summary_csv, so reports can
// be regenerated from existing outputs.
std::vector<RunSummary> read_summary_csv(const std::string& path);

std::string render_run_report(const RunSummary& s);

std::string render_scenario_report(const std::string& name,
                                   const std::string& title,
                                   const std::vector<RunSummary>& runs);

}  // namespace ssdlab
