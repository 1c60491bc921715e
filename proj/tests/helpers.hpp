#pragma once

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rppg/chunk.hpp"
#include "rppg/trace.hpp"
#include "rppg/waveform.hpp"

namespace testutil {

// Dense-DFT argmax oracle, independent of the library's FFT path: evaluates
// |sum x_i hann_i exp(-2 pi i f t_i)| on a fine grid and returns the argmax.
inline double dense_dft_peak_hz(const Eigen::ArrayXd& samples, double fs, double lo_hz,
                                double hi_hz, double step_hz = 1e-4) {
  const Eigen::Index n = samples.size();
  Eigen::ArrayXd x = samples - samples.mean();
  for (Eigen::Index i = 0; i < n; ++i) {
    x[i] *= 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n)));
  }
  double best_f = lo_hz;
  double best_mag = -1.0;
  for (double f = lo_hz; f <= hi_hz; f += step_hz) {
    std::complex<double> acc(0.0, 0.0);
    const double w = -2.0 * M_PI * f / fs;
    for (Eigen::Index i = 0; i < n; ++i) {
      acc += x[i] * std::polar(1.0, w * static_cast<double>(i));
    }
    const double mag = std::abs(acc);
    if (mag > best_mag) {
      best_mag = mag;
      best_f = f;
    }
  }
  return best_f;
}

inline rppg::Waveform sine_wave(double freq_hz, double fs, double duration_s,
                                double amplitude = 1.0, double phase = 0.0,
                                double offset = 0.0) {
  const auto n = static_cast<Eigen::Index>(std::lround(duration_s * fs));
  Eigen::ArrayXd samples(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    samples[i] = offset + amplitude * std::sin(2.0 * M_PI * freq_hz * static_cast<double>(i) / fs + phase);
  }
  return {std::move(samples), fs};
}

inline rppg::Waveform gaussian_noise_wave(double fs, Eigen::Index n, std::uint64_t seed,
                                          double sd = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sd);
  Eigen::ArrayXd samples(n);
  for (Eigen::Index i = 0; i < n; ++i) samples[i] = gauss(rng);
  return {std::move(samples), fs};
}

// Uniform-color video chunk with full-frame face boxes and valid labels.
inline rppg::VideoChunk uniform_chunk(int width, int height, Eigen::Index frames,
                                      double fps, std::uint8_t r, std::uint8_t g,
                                      std::uint8_t b) {
  rppg::VideoChunk c;
  c.width = width;
  c.height = height;
  c.fps = fps;
  c.pixels.resize(static_cast<std::size_t>(frames) * width * height * 3);
  for (Eigen::Index t = 0; t < frames; ++t) {
    std::uint8_t* f = c.pixels.data() + static_cast<std::size_t>(t) * width * height * 3;
    for (int i = 0; i < width * height; ++i) {
      f[3 * i + 0] = r;
      f[3 * i + 1] = g;
      f[3 * i + 2] = b;
    }
  }
  c.face_boxes.assign(static_cast<std::size_t>(frames), rppg::FaceBox{0, 0, width, height});
  Eigen::ArrayXd ppg(frames);
  Eigen::ArrayXd resp(frames);
  for (Eigen::Index i = 0; i < frames; ++i) {
    const double ts = static_cast<double>(i) / fps;
    ppg[i] = std::sin(2.0 * M_PI * 1.2 * ts);
    resp[i] = std::sin(2.0 * M_PI * 0.25 * ts);
  }
  c.labels.pulse_wave = {std::move(ppg), fps};
  c.labels.resp_wave = {std::move(resp), fps};
  c.labels.hr_bpm = 72.0;
  c.labels.rr_bpm = 15.0;
  return c;
}

// Fully randomized valid chunk for round-trip property tests.
inline rppg::VideoChunk random_chunk(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(4, 16);
  std::uniform_int_distribution<int> frames_dist(8, 80);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> byte(0, 255);

  rppg::VideoChunk c;
  c.width = dim(rng);
  c.height = dim(rng);
  c.fps = 10.0 + 40.0 * unit(rng);
  const Eigen::Index frames = frames_dist(rng);
  c.pixels.resize(static_cast<std::size_t>(frames) * c.width * c.height * 3);
  for (auto& px : c.pixels) px = static_cast<std::uint8_t>(byte(rng));

  for (Eigen::Index t = 0; t < frames; ++t) {
    std::uniform_int_distribution<int> bw(1, c.width);
    std::uniform_int_distribution<int> bh(1, c.height);
    const int w = bw(rng);
    const int h = bh(rng);
    std::uniform_int_distribution<int> bx(0, c.width - w);
    std::uniform_int_distribution<int> by(0, c.height - h);
    c.face_boxes.push_back({bx(rng), by(rng), w, h});
  }

  if (unit(rng) < 0.7) {
    std::uniform_int_distribution<int> kdist(1, 7);
    const int k = kdist(rng);
    for (Eigen::Index t = 0; t < frames; ++t) {
      Eigen::MatrixX2d pts(k, 2);
      for (int i = 0; i < k; ++i) {
        pts(i, 0) = unit(rng) * c.width;
        pts(i, 1) = unit(rng) * c.height;
      }
      c.landmarks.push_back(std::move(pts));
    }
  }

  Eigen::ArrayXd ppg(frames);
  Eigen::ArrayXd resp(frames);
  for (Eigen::Index i = 0; i < frames; ++i) {
    ppg[i] = 2.0 * unit(rng) - 1.0;
    resp[i] = 2.0 * unit(rng) - 1.0;
  }
  c.labels.pulse_wave = {std::move(ppg), c.fps};
  c.labels.resp_wave = {std::move(resp), c.fps};
  c.labels.hr_bpm = 35.0 + 205.0 * unit(rng);
  c.labels.rr_bpm = 4.0 + 41.0 * unit(rng);

  std::uniform_int_distribution<int> age(18, 90);
  std::uniform_int_distribution<int> skin(1, 6);
  c.metadata.age = age(rng);
  c.metadata.gender_male = unit(rng) < 0.5;
  c.metadata.skin_type = skin(rng);
  c.metadata.movement = unit(rng);
  c.metadata.illuminance_var = unit(rng);
  c.metadata.camera_stationary = unit(rng) < 0.5;
  return c;
}

inline std::string read_file_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// Unique scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("rppg_test_" + tag + "_" + std::to_string(counter.fetch_add(1)) + "_" +
             std::to_string(::getpid()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil
