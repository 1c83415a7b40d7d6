#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssdlab/types.hpp"

namespace ssdlab {

// One windowed measurement. Rates are per-window; ratios are cumulative
// since the benchmark phase began (loading is excluded).
struct Sample {
  double t_us = 0.0;
  double kv_ops_s = 0.0;
  double dev_wr_Bps = 0.0;   // host bytes reaching the device, per second
  double waa_cum = 1.0;
  double wad_cum = 1.0;
  double space_amp = 1.0;
  std::uint64_t disk_util_B = 0;
};

void write_samples_csv(const std::string& path,
                       const std::vector<Sample>& samples);

double wa_app(std::uint64_t host_bytes, std::uint64_t app_bytes);

// Two-sided CUSUM on a stream of window statistics. The first `warmup`
// points estimate the mean and standard deviation; afterwards the usual
// S+/S- recursions run with k and h in sigma units. An alarm resets the
// detector into a fresh estimation phase.
class Cusum {
 public:
  Cusum(double k_sigma = 0.5, double h_sigma = 5.0, int warmup = 5);

  bool feed(double x);  // true if this point raised an alarm
  bool estimating() const { return static_cast<int>(est_.size()) < warmup_; }
  int alarms() const { return alarms_; }
  double mean() const { return mu_; }
  double sigma() const { return sigma_; }

 private:
  void finish_estimation();

  double k_sigma_, h_sigma_;
  int warmup_;
  std::vector<double> est_;
  double mu_ = 0.0, sigma_ = 0.0;
  double s_hi_ = 0.0, s_lo_ = 0.0;
  int alarms_ = 0;
};

enum class SteadyRule : std::uint8_t { kNone, kQuietWindows, kHostBytes };

struct SteadyConfig {
  double k_sigma = 0.5;
  double h_sigma = 5.0;
  int warmup_windows = 5;
  int quiet_windows = 6;
  double capacity_multiple = 3.0;
};

// Declares steady state once every tracked statistic has been quiet for
// `quiet_windows` consecutive windows, or once cumulative host writes
// reach `capacity_multiple` times the device capacity, whichever first.
class SteadyDetector {
 public:
  SteadyDetector(SteadyConfig cfg, std::uint64_t capacity_bytes);

  // Feeds one window; returns true the first time steady state is declared.
  bool feed(double t_us, double tput, double waa, double wad,
            std::uint64_t host_bytes_cum);

  bool steady() const { return rule_ != SteadyRule::kNone; }
  SteadyRule rule() const { return rule_; }
  double steady_at_us() const { return steady_at_us_; }

 private:
  SteadyConfig cfg_;
  std::uint64_t capacity_bytes_;
  std::vector<Cusum> stats_;
  int quiet_run_ = 0;
  SteadyRule rule_ = SteadyRule::kNone;
  double steady_at_us_ = -1.0;
};

// Histogram-style CDF over per-LBA write counts, sorted by hotness.
struct CdfRow {
  std::uint32_t writes;      // write count of this bucket
  std::uint64_t lbas;        // LBAs with exactly this count
  double lba_frac_cum;       // fraction of LBAs at least this hot
  double write_frac_cum;     // fraction of all writes they account for
};

std::vector<CdfRow> lba_write_cdf(std::span<const std::uint32_t> counts);
double fraction_unwritten(std::span<const std::uint32_t> counts);
void write_cdf_csv(const std::string& path, const std::vector<CdfRow>& rows);

double mean(std::span<const double> xs);
double stddev(std::span<const double> xs);  // sample stddev
double cov(std::span<const double> xs);     // stddev / mean, 0 if mean == 0

}  // namespace ssdlab
