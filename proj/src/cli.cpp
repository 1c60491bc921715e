#include "rppg/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "rppg/chunk_io.hpp"
#include "rppg/csv.hpp"
#include "rppg/dsp.hpp"
#include "rppg/errors.hpp"
#include "rppg/factors.hpp"
#include "rppg/metrics.hpp"

namespace rppg::cli {

namespace {

namespace fs = std::filesystem;

void ensure_out_dir(const fs::path& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoFailure("cannot create " + dir.string() + ": " + ec.message());
}

std::string opt_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string();
}

inline void do_not_optimize(double v) { asm volatile("" : : "g"(v) : "memory"); }

}  // namespace

int cmd_run(const RunConfig& config) {
  if (config.methods.empty()) {
    std::cerr << "run: no methods selected\n";
    return 1;
  }
  if (!fs::exists(config.dataset_root)) {
    std::cerr << "run: dataset root " << config.dataset_root << " does not exist\n";
    return 2;
  }

  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(config.dataset_root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "meta.json")) {
      dirs.push_back(entry.path());
    }
  }
  if (dirs.empty() && fs::exists(config.dataset_root / "meta.json")) {
    dirs.push_back(config.dataset_root);
  }
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) {
    std::cerr << "run: no chunks found under " << config.dataset_root << "\n";
    return 2;
  }

  struct Row {
    std::string chunk;
    std::string method;
    ChunkMetrics metrics;
    ChunkMetadata meta;
    double hr_label = 0.0;
    double rr_label = 0.0;
  };
  std::vector<std::vector<Row>> per_chunk(dirs.size());
  std::vector<bool> failed(dirs.size(), false);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= dirs.size()) return;
      try {
        const VideoChunk chunk = load_chunk(dirs[i]);
        const RgbTrace trace = extract_trace(chunk);
        std::optional<Waveform> resp;
        if (chunk.has_landmarks()) {
          resp = estimate_resp_from_landmarks(chunk);
        }
        for (const EstimatorId id : config.methods) {
          try {
            EstimationResult result;
            switch (id) {
              case EstimatorId::G: result.pulse_wave = estimate_g(trace); break;
              case EstimatorId::CHROM: result.pulse_wave = estimate_chrom(trace); break;
              case EstimatorId::POS: result.pulse_wave = estimate_pos(trace); break;
            }
            result.resp_wave = resp;
            const ChunkMetrics m = evaluate_chunk(chunk, result, config.hr, config.rr);
            per_chunk[i].push_back(Row{dirs[i].filename().string(), to_string(id), m,
                                       chunk.metadata, chunk.labels.hr_bpm,
                                       chunk.labels.rr_bpm});
          } catch (const std::exception& e) {
            const std::lock_guard<std::mutex> lock(log_mutex);
            std::cerr << "run: skipping " << dirs[i].filename().string() << " with "
                      << to_string(id) << ": " << e.what() << "\n";
          }
        }
        if (per_chunk[i].empty()) failed[i] = true;
      } catch (const std::exception& e) {
        failed[i] = true;
        const std::lock_guard<std::mutex> lock(log_mutex);
        std::cerr << "run: skipping chunk " << dirs[i].filename().string() << ": "
                  << e.what() << "\n";
      }
    }
  };

  const int nworkers = std::max(1, std::min<int>(config.workers,
                                                 static_cast<int>(dirs.size())));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(nworkers));
  for (int i = 0; i < nworkers; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  std::size_t skipped = 0;
  for (const bool f : failed) skipped += f ? 1 : 0;
  std::size_t total_rows = 0;
  for (const auto& rows : per_chunk) total_rows += rows.size();
  if (total_rows == 0) {
    std::cerr << "run: all " << dirs.size() << " chunks failed\n";
    return 2;
  }

  ensure_out_dir(config.out_dir);

  std::ostringstream metrics_csv;
  metrics_csv << "chunk,method,hr_ae,pulse_snr,pulse_r,rr_ae,resp_snr,resp_r,"
                 "age,gender_male,skin_type,camera_stationary,movement,"
                 "illuminance_var,hr,rr\n";
  for (const auto& rows : per_chunk) {
    for (const Row& row : rows) {
      const ChunkMetrics& m = row.metrics;
      metrics_csv << row.chunk << ',' << row.method << ',' << format_double(m.hr_ae)
                  << ',' << format_double(m.pulse_snr) << ',' << format_double(m.pulse_r)
                  << ',' << opt_field(m.rr_ae) << ',' << opt_field(m.resp_snr) << ','
                  << opt_field(m.resp_r) << ',' << row.meta.age << ','
                  << (row.meta.gender_male ? 1 : 0) << ',' << row.meta.skin_type << ','
                  << (row.meta.camera_stationary ? 1 : 0) << ','
                  << format_double(row.meta.movement) << ','
                  << format_double(row.meta.illuminance_var) << ','
                  << format_double(row.hr_label) << ',' << format_double(row.rr_label)
                  << '\n';
    }
  }
  write_text_file(config.out_dir / "chunk_metrics.csv", metrics_csv.str());

  std::vector<DatasetReport> reports;
  for (const EstimatorId id : config.methods) {
    std::vector<ChunkMetrics> ms;
    for (const auto& rows : per_chunk) {
      for (const Row& row : rows) {
        if (row.method == to_string(id)) ms.push_back(row.metrics);
      }
    }
    if (!ms.empty()) reports.push_back(aggregate(ms, to_string(id)));
  }
  write_text_file(config.out_dir / "results.csv", dataset_report_csv(reports));

  std::cout << "run: evaluated " << dirs.size() - skipped << " of " << dirs.size()
            << " chunks (" << skipped << " skipped); wrote "
            << (config.out_dir / "chunk_metrics.csv").string() << " and "
            << (config.out_dir / "results.csv").string() << "\n";
  return 0;
}

namespace {

// Expands factor names into design columns; "skin_type" becomes dummies
// skin_type_2..skin_type_6 with skin type 1 as the base case.
DesignMatrix build_design(const CsvTable& table, const std::vector<std::string>& factors,
                          const std::vector<std::size_t>& row_indices) {
  for (std::size_t i = 0; i < factors.size(); ++i) {
    for (std::size_t j = i + 1; j < factors.size(); ++j) {
      if (factors[i] == factors[j]) {
        throw SingularDesign("duplicate design column '" + factors[i] + "' and '" +
                             factors[j] + "'");
      }
    }
  }

  const Eigen::Index n = static_cast<Eigen::Index>(row_indices.size());
  DesignMatrix design;
  design.names.push_back("intercept");
  std::vector<Eigen::ArrayXd> columns;
  columns.push_back(Eigen::ArrayXd::Ones(n));

  for (const std::string& factor : factors) {
    if (factor == "skin_type") {
      const int col = table.require_column("skin_type");
      for (int level = 2; level <= 6; ++level) {
        Eigen::ArrayXd dummy(n);
        for (Eigen::Index i = 0; i < n; ++i) {
          const double v = parse_double(table.rows[row_indices[static_cast<std::size_t>(i)]]
                                            [static_cast<std::size_t>(col)]);
          dummy[i] = v == static_cast<double>(level) ? 1.0 : 0.0;
        }
        design.names.push_back("skin_type_" + std::to_string(level));
        columns.push_back(std::move(dummy));
      }
    } else {
      const int col = table.require_column(factor);
      Eigen::ArrayXd values(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        values[i] = parse_double(table.rows[row_indices[static_cast<std::size_t>(i)]]
                                     [static_cast<std::size_t>(col)]);
      }
      design.names.push_back(factor);
      columns.push_back(std::move(values));
    }
  }

  design.cols.resize(n, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    design.cols.col(static_cast<Eigen::Index>(j)) = columns[j];
  }
  return design;
}

}  // namespace

int cmd_regress(const RegressConfig& config) {
  if (config.factors.empty()) {
    std::cerr << "regress: no factors selected\n";
    return 1;
  }
  if (config.target != "pulse_snr" && config.target != "resp_snr") {
    std::cerr << "regress: target must be pulse_snr or resp_snr\n";
    return 1;
  }

  const CsvTable table = read_csv(config.metrics_csv);
  const int target_col = table.require_column(config.target);

  std::vector<std::size_t> usable;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (!table.rows[i][static_cast<std::size_t>(target_col)].empty()) usable.push_back(i);
  }
  if (usable.size() < 2) {
    std::cerr << "regress: no usable rows with a " << config.target << " value\n";
    return 2;
  }

  const DesignMatrix design = build_design(table, config.factors, usable);
  Eigen::VectorXd y(static_cast<Eigen::Index>(usable.size()));
  for (std::size_t i = 0; i < usable.size(); ++i) {
    y[static_cast<Eigen::Index>(i)] =
        parse_double(table.rows[usable[i]][static_cast<std::size_t>(target_col)]);
  }

  const RegressionReport report = fit_ols(design, y);
  const std::string text = regression_report_text(report, config.target);

  ensure_out_dir(config.out_dir);
  write_text_file(config.out_dir / "regression.json",
                  regression_report_json(report, config.target));
  write_text_file(config.out_dir / "regression.txt", text);
  std::cout << text;
  return 0;
}

int cmd_buckets(const BucketsConfig& config) {
  if (config.edges.size() < 2) {
    std::cerr << "buckets: need at least two edges\n";
    return 1;
  }
  const CsvTable table = read_csv(config.metrics_csv);
  const int factor_col = table.require_column(config.factor);
  const int pulse_col = table.require_column("pulse_snr");
  const int resp_col = table.column("resp_snr");

  std::vector<std::pair<double, ChunkMetrics>> observations;
  for (const auto& row : table.rows) {
    ChunkMetrics m;
    m.pulse_snr = parse_double(row[static_cast<std::size_t>(pulse_col)]);
    if (resp_col >= 0 && !row[static_cast<std::size_t>(resp_col)].empty()) {
      m.resp_snr = parse_double(row[static_cast<std::size_t>(resp_col)]);
    }
    observations.emplace_back(parse_double(row[static_cast<std::size_t>(factor_col)]), m);
  }

  const BucketReport report = bucket_analysis(observations, config.edges);
  const std::string csv = bucket_report_csv(report);
  ensure_out_dir(config.out_dir);
  write_text_file(config.out_dir / "buckets.csv", csv);
  std::cout << csv;
  return 0;
}

int cmd_synth(const SynthConfig& config) {
  if (config.count < 1) {
    std::cerr << "synth: count must be at least 1\n";
    return 1;
  }
  validate_spec(config.spec);  // fails before any write

  ensure_out_dir(config.out_dir);
  std::ostringstream manifest;
  manifest << "path,seed,hr_bpm,rr_bpm\n";
  for (int i = 0; i < config.count; ++i) {
    SynthSpec spec = config.spec;
    spec.seed = config.spec.seed + static_cast<std::uint64_t>(i);
    char name[64];
    std::snprintf(name, sizeof(name), "%s%05d", config.prefix.c_str(), i);
    save_chunk(generate(spec), config.out_dir / name);
    manifest << name << ',' << spec.seed << ',' << format_double(spec.hr_bpm) << ','
             << format_double(spec.rr_bpm) << '\n';
  }
  write_text_file(config.out_dir / "manifest.csv", manifest.str());
  std::cout << "synth: wrote " << config.count << " chunks to " << config.out_dir.string()
            << "\n";
  return 0;
}

TimingResult measure_frame_time(const TimingConfig& config) {
  if (config.iterations < 1) {
    throw InvariantViolation("timing requires at least one iteration");
  }
  if (config.width < 2 || config.height < 2) {
    throw InvariantViolation("timing requires frames of at least 2x2");
  }

  const int w = config.width;
  const int h = config.height;
  const std::size_t npix = static_cast<std::size_t>(w) * h;
  constexpr int kFramePool = 32;
  constexpr double kFps = 30.0;
  const Eigen::Index len = static_cast<Eigen::Index>(std::lround(1.6 * kFps));

  // Deterministic pseudo-random frame pool; content only needs to vary.
  std::vector<std::uint8_t> pool(static_cast<std::size_t>(kFramePool) * npix * 3);
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  for (auto& byte : pool) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    byte = static_cast<std::uint8_t>(state >> 56);
  }

  Eigen::ArrayXd ring_r = Eigen::ArrayXd::Zero(len);
  Eigen::ArrayXd ring_g = Eigen::ArrayXd::Zero(len);
  Eigen::ArrayXd ring_b = Eigen::ArrayXd::Zero(len);
  Eigen::Index head = 0;
  RgbTrace window;
  window.fs = kFps;
  window.r.resize(len);
  window.g.resize(len);
  window.b.resize(len);

  auto step = [&](int iteration) {
    const std::uint8_t* frame =
        pool.data() + static_cast<std::size_t>(iteration % kFramePool) * npix * 3;
    double sr = 0.0, sg = 0.0, sb = 0.0;
    for (std::size_t i = 0; i < npix; ++i) {
      sr += frame[3 * i + 0];
      sg += frame[3 * i + 1];
      sb += frame[3 * i + 2];
    }
    const double count = static_cast<double>(npix);
    ring_r[head] = sr / count;
    ring_g[head] = sg / count;
    ring_b[head] = sb / count;
    head = (head + 1) % len;

    // Materialize the trailing window in time order.
    for (Eigen::Index i = 0; i < len; ++i) {
      const Eigen::Index src = (head + i) % len;
      window.r[i] = ring_r[src];
      window.g[i] = ring_g[src];
      window.b[i] = ring_b[src];
    }

    double sink = 0.0;
    switch (config.method) {
      case EstimatorId::G: {
        const double m = window.g.mean();
        const double s = pop_std(window.g);
        sink = s > 0.0 ? -(window.g[len - 1] - m) / s : 0.0;
        break;
      }
      case EstimatorId::CHROM: {
        const Waveform out = estimate_chrom(window, static_cast<double>(len) / kFps);
        sink = out.samples[len - 1];
        break;
      }
      case EstimatorId::POS: {
        const Waveform out = estimate_pos(window, static_cast<double>(len) / kFps);
        sink = out.samples[len - 1];
        break;
      }
    }
    do_not_optimize(sink);
  };

  // Fill the ring, then warm up.
  int iteration = 0;
  for (Eigen::Index i = 0; i < len; ++i) step(iteration++);
  for (int i = 0; i < 10; ++i) step(iteration++);

  std::vector<double> samples_ms(static_cast<std::size_t>(config.iterations));
  for (int i = 0; i < config.iterations; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    step(iteration++);
    const auto t1 = std::chrono::steady_clock::now();
    samples_ms[static_cast<std::size_t>(i)] =
        std::chrono::duration<double, std::milli>(t1 - t0).count();
  }

  TimingResult result;
  result.iterations = config.iterations;
  double sum = 0.0;
  for (const double s : samples_ms) sum += s;
  result.mean_ms = sum / static_cast<double>(samples_ms.size());
  double var = 0.0;
  for (const double s : samples_ms) var += (s - result.mean_ms) * (s - result.mean_ms);
  result.sd_ms = std::sqrt(var / static_cast<double>(samples_ms.size()));
  return result;
}

int cmd_timing(const TimingConfig& config) {
  const TimingResult result = measure_frame_time(config);
  std::cout << "timing: method=" << to_string(config.method) << " frame=" << config.width
            << "x" << config.height << " iterations=" << result.iterations
            << " mean_ms=" << format_double(result.mean_ms)
            << " sd_ms=" << format_double(result.sd_ms) << "\n";
  if (!config.out_dir.empty()) {
    ensure_out_dir(config.out_dir);
    std::ostringstream os;
    os << "method,width,height,iterations,mean_ms,sd_ms\n"
       << to_string(config.method) << ',' << config.width << ',' << config.height << ','
       << result.iterations << ',' << format_double(result.mean_ms) << ','
       << format_double(result.sd_ms) << '\n';
    write_text_file(config.out_dir / "timing.csv", os.str());
  }
  return 0;
}

}  // namespace rppg::cli
