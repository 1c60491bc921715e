#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rppg/cli.hpp"
#include "rppg/errors.hpp"

namespace {

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const rppg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rPPG benchmarking toolkit: pulse/respiration estimation from "
               "video chunks, metrics, factor regressions and synthetic data"};
  app.require_subcommand(1);

  // run
  rppg::cli::RunConfig run_cfg;
  std::vector<std::string> run_methods{"G", "CHROM", "POS"};
  std::vector<double> hr_band_edges;
  std::vector<double> rr_band_edges;
  auto* run = app.add_subcommand("run", "Evaluate every chunk in a dataset");
  run->add_option("--dataset", run_cfg.dataset_root, "Directory of chunk directories")
      ->required();
  run->add_option("--methods", run_methods, "Estimators to evaluate")
      ->delimiter(',');
  run->add_option("--out", run_cfg.out_dir, "Output directory");
  run->add_option("--workers", run_cfg.workers, "Worker thread count");
  run->add_option("--seed", run_cfg.seed, "Seed (reserved)");
  run->add_option("--hr-band", hr_band_edges, "HR band in Hz: lo hi")->expected(2);
  run->add_option("--rr-band", rr_band_edges, "RR band in Hz: lo hi")->expected(2);

  // regress
  rppg::cli::RegressConfig regress_cfg;
  auto* regress = app.add_subcommand("regress", "OLS regression of SNR on factors");
  regress->add_option("--metrics", regress_cfg.metrics_csv, "chunk_metrics.csv path")
      ->required();
  regress->add_option("--target", regress_cfg.target, "pulse_snr or resp_snr");
  regress->add_option("--factors", regress_cfg.factors,
                      "Factor columns (skin_type expands to dummies)")
      ->delimiter(',')
      ->required();
  regress->add_option("--out", regress_cfg.out_dir, "Output directory");

  // buckets
  rppg::cli::BucketsConfig buckets_cfg;
  auto* buckets = app.add_subcommand("buckets", "Group SNR by factor buckets");
  buckets->add_option("--metrics", buckets_cfg.metrics_csv, "chunk_metrics.csv path")
      ->required();
  buckets->add_option("--factor", buckets_cfg.factor, "Factor column")->required();
  buckets->add_option("--edges", buckets_cfg.edges, "Bin edges")
      ->delimiter(',')
      ->required();
  buckets->add_option("--out", buckets_cfg.out_dir, "Output directory");

  // synth
  rppg::cli::SynthConfig synth_cfg;
  auto* synth = app.add_subcommand("synth", "Generate synthetic chunks");
  synth->add_option("--out", synth_cfg.out_dir, "Output directory")->required();
  synth->add_option("--count", synth_cfg.count, "Number of chunks");
  synth->add_option("--prefix", synth_cfg.prefix, "Chunk directory prefix");
  synth->add_option("--seed", synth_cfg.spec.seed, "Base seed");
  synth->add_option("--duration", synth_cfg.spec.duration_s, "Duration in seconds");
  synth->add_option("--fps", synth_cfg.spec.fps, "Frames per second");
  synth->add_option("--width", synth_cfg.spec.width, "Frame width");
  synth->add_option("--height", synth_cfg.spec.height, "Frame height");
  synth->add_option("--base-r", synth_cfg.spec.base_r, "Skin base red");
  synth->add_option("--base-g", synth_cfg.spec.base_g, "Skin base green");
  synth->add_option("--base-b", synth_cfg.spec.base_b, "Skin base blue");
  synth->add_option("--hr", synth_cfg.spec.hr_bpm, "Heart rate in bpm");
  synth->add_option("--rr", synth_cfg.spec.rr_bpm, "Respiratory rate in bpm");
  synth->add_option("--amplitude", synth_cfg.spec.pulse_amplitude,
                    "Fractional pulse amplitude");
  synth->add_option("--resp-motion", synth_cfg.spec.resp_motion_px,
                    "Vertical landmark oscillation in px");
  synth->add_option("--drift", synth_cfg.spec.illum_drift_amplitude,
                    "Fractional illumination drift amplitude");
  synth->add_option("--noise", synth_cfg.spec.pixel_noise_sd,
                    "Pixel noise SD in 8-bit units");

  // timing
  rppg::cli::TimingConfig timing_cfg;
  std::string timing_method = "POS";
  auto* timing = app.add_subcommand("timing", "Per-frame latency measurement");
  timing->add_option("--method", timing_method, "Estimator to time");
  timing->add_option("--width", timing_cfg.width, "Frame width");
  timing->add_option("--height", timing_cfg.height, "Frame height");
  timing->add_option("--iterations", timing_cfg.iterations, "Iteration count");
  timing->add_option("--out", timing_cfg.out_dir, "Output directory (optional)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (run->parsed()) {
    return guarded([&] {
      run_cfg.methods.clear();
      for (const std::string& name : run_methods) {
        run_cfg.methods.push_back(rppg::estimator_from_string(name));
      }
      if (hr_band_edges.size() == 2) run_cfg.hr = {hr_band_edges[0], hr_band_edges[1]};
      if (rr_band_edges.size() == 2) run_cfg.rr = {rr_band_edges[0], rr_band_edges[1]};
      return rppg::cli::cmd_run(run_cfg);
    });
  }
  if (regress->parsed()) {
    return guarded([&] { return rppg::cli::cmd_regress(regress_cfg); });
  }
  if (buckets->parsed()) {
    return guarded([&] { return rppg::cli::cmd_buckets(buckets_cfg); });
  }
  if (synth->parsed()) {
    return guarded([&] { return rppg::cli::cmd_synth(synth_cfg); });
  }
  if (timing->parsed()) {
    return guarded([&] {
      timing_cfg.method = rppg::estimator_from_string(timing_method);
      return rppg::cli::cmd_timing(timing_cfg);
    });
  }
  return 1;
}
