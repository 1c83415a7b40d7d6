#include "ssdlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace ssdlab {

namespace {

// Stable textual form for doubles so re-runs produce byte-identical CSVs.
std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

FILE* open_or_throw(const std::string& path) {
  FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

}  // namespace

double wa_app(std::uint64_t host_bytes, std::uint64_t app_bytes) {
  if (app_bytes == 0) return 1.0;
  return static_cast<double>(host_bytes) / static_cast<double>(app_bytes);
}

void write_samples_csv(const std::string& path,
                       const std::vector<Sample>& samples) {
  FILE* f = open_or_throw(path);
  std::fputs("t_us,kv_ops_s,dev_wr_Bps,waa_cum,wad_cum,space_amp,disk_util_B\n",
             f);
  for (const Sample& s : samples) {
    std::fprintf(f, "%.0f,%s,%s,%s,%s,%s,%llu\n", s.t_us,
                 fmt(s.kv_ops_s).c_str(), fmt(s.dev_wr_Bps).c_str(),
                 fmt(s.waa_cum).c_str(), fmt(s.wad_cum).c_str(),
                 fmt(s.space_amp).c_str(),
                 static_cast<unsigned long long>(s.disk_util_B));
  }
  std::fclose(f);
}

Cusum::Cusum(double k_sigma, double h_sigma, int warmup)
    : k_sigma_(k_sigma), h_sigma_(h_sigma), warmup_(warmup) {
  if (warmup_ < 2) throw ConfigError("cusum: warmup must be >= 2");
  est_.reserve(static_cast<std::size_t>(warmup_));
}

void Cusum::finish_estimation() {
  mu_ = ssdlab::mean(est_);
  sigma_ = ssdlab::stddev(est_);
  // Floor so perfectly flat warmup windows do not make h degenerate.
  double floor = 1e-9 + 1e-6 * std::abs(mu_);
  if (sigma_ < floor) sigma_ = floor;
  s_hi_ = s_lo_ = 0.0;
}

bool Cusum::feed(double x) {
  if (estimating()) {
    est_.push_back(x);
    if (!estimating()) finish_estimation();
    return false;
  }
  const double k = k_sigma_ * sigma_;
  const double h = h_sigma_ * sigma_;
  s_hi_ = std::max(0.0, s_hi_ + (x - mu_) - k);
  s_lo_ = std::max(0.0, s_lo_ - (x - mu_) - k);
  if (s_hi_ > h || s_lo_ > h) {
    ++alarms_;
    est_.clear();
    s_hi_ = s_lo_ = 0.0;
    return true;
  }
  return false;
}

SteadyDetector::SteadyDetector(SteadyConfig cfg, std::uint64_t capacity_bytes)
    : cfg_(cfg), capacity_bytes_(capacity_bytes) {
  for (int i = 0; i < 3; ++i)
    stats_.emplace_back(cfg.k_sigma, cfg.h_sigma, cfg.warmup_windows);
}

bool SteadyDetector::feed(double t_us, double tput, double waa, double wad,
                          std::uint64_t host_bytes_cum) {
  if (steady()) return false;
  const double xs[3] = {tput, waa, wad};
  bool any_alarm = false;
  bool all_monitoring = true;
  for (int i = 0; i < 3; ++i) {
    bool was_est = stats_[static_cast<std::size_t>(i)].estimating();
    any_alarm |= stats_[static_cast<std::size_t>(i)].feed(xs[i]);
    all_monitoring &= !was_est;
  }
  if (any_alarm || !all_monitoring)
    quiet_run_ = 0;
  else
    ++quiet_run_;

  if (static_cast<double>(host_bytes_cum) >=
      cfg_.capacity_multiple * static_cast<double>(capacity_bytes_)) {
    rule_ = SteadyRule::kHostBytes;
  } else if (quiet_run_ >= cfg_.quiet_windows) {
    rule_ = SteadyRule::kQuietWindows;
  }
  if (steady()) {
    steady_at_us_ = t_us;
    return true;
  }
  return false;
}

std::vector<CdfRow> lba_write_cdf(std::span<const std::uint32_t> counts) {
  std::map<std::uint32_t, std::uint64_t> hist;
  for (std::uint32_t c : counts) ++hist[c];
  double total_writes = 0.0;
  for (auto& [w, n] : hist)
    total_writes += static_cast<double>(w) * static_cast<double>(n);

  std::vector<CdfRow> rows;
  rows.reserve(hist.size());
  double lba_cum = 0.0, write_cum = 0.0;
  const double n_lbas = static_cast<double>(counts.size());
  // Hottest first.
  for (auto it = hist.rbegin(); it != hist.rend(); ++it) {
    lba_cum += static_cast<double>(it->second);
    write_cum += static_cast<double>(it->first) *
                 static_cast<double>(it->second);
    rows.push_back({it->first, it->second, lba_cum / n_lbas,
                    total_writes > 0 ? write_cum / total_writes : 0.0});
  }
  return rows;
}

double fraction_unwritten(std::span<const std::uint32_t> counts) {
  if (counts.empty()) return 0.0;
  std::uint64_t zeros = 0;
  for (std::uint32_t c : counts) zeros += (c == 0);
  return static_cast<double>(zeros) / static_cast<double>(counts.size());
}

void write_cdf_csv(const std::string& path, const std::vector<CdfRow>& rows) {
  FILE* f = open_or_throw(path);
  std::fputs("writes,lbas,lba_frac_cum,write_frac_cum\n", f);
  for (const CdfRow& r : rows)
    std::fprintf(f, "%u,%llu,%s,%s\n", r.writes,
                 static_cast<unsigned long long>(r.lbas),
                 fmt(r.lba_frac_cum).c_str(), fmt(r.write_frac_cum).c_str());
  std::fclose(f);
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

double cov(std::span<const double> xs) {
  double m = mean(xs);
  return m == 0.0 ? 0.0 : stddev(xs) / m;
}

}  // namespace ssdlab
