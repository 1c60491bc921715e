#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rppg/estimators.hpp"
#include "rppg/rates.hpp"
#include "rppg/synth.hpp"

namespace rppg::cli {

// Exit codes: 0 success, 1 usage error, 2 no usable data.

struct RunConfig {
  std::filesystem::path dataset_root;
  std::vector<EstimatorId> methods{EstimatorId::G, EstimatorId::CHROM,
                                   EstimatorId::POS};
  std::filesystem::path out_dir = ".";
  FrequencyBand hr = hr_band();
  FrequencyBand rr = rr_band();
  int workers = 1;
  std::uint64_t seed = 0;
};

// Evaluates every chunk under dataset_root with every selected method.
// Writes chunk_metrics.csv (one row per chunk x method, with factor metadata
// columns) and results.csv (one aggregate row per method). Chunk failures
// are logged and skipped; returns 2 when no chunk survives.
int cmd_run(const RunConfig& config);

struct RegressConfig {
  std::filesystem::path metrics_csv;
  std::string target = "pulse_snr";  // or resp_snr
  std::vector<std::string> factors;  // "skin_type" expands to dummies 2..6
  std::filesystem::path out_dir = ".";
};

// Fits OLS of the target on the requested factors plus an intercept; writes
// regression.json and regression.txt and prints the text summary.
int cmd_regress(const RegressConfig& config);

struct BucketsConfig {
  std::filesystem::path metrics_csv;
  std::string factor;
  std::vector<double> edges;
  std::filesystem::path out_dir = ".";
};

// Buckets chunk metrics by a factor column; writes buckets.csv.
int cmd_buckets(const BucketsConfig& config);

struct SynthConfig {
  SynthSpec spec;
  int count = 1;
  std::string prefix = "chunk_";
  std::filesystem::path out_dir;
};

// Writes `count` chunk directories with seeds seed..seed+count-1 plus a
// manifest.csv listing paths and true vitals.
int cmd_synth(const SynthConfig& config);

struct TimingConfig {
  EstimatorId method = EstimatorId::POS;
  int width = 64;
  int height = 64;
  int iterations = 1000;
  std::filesystem::path out_dir;  // empty: print only
};

struct TimingResult {
  double mean_ms = 0.0;
  double sd_ms = 0.0;
  int iterations = 0;
};

// Wall-clock time of one frame's marginal work (face-box mean extraction
// plus one sliding-window estimator update), averaged over `iterations`
// after 10 warm-up iterations.
TimingResult measure_frame_time(const TimingConfig& config);

int cmd_timing(const TimingConfig& config);

}  // namespace rppg::cli
