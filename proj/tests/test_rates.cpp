#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "rppg/errors.hpp"
#include "rppg/rates.hpp"

using namespace rppg;

namespace {

double corr(const Eigen::ArrayXd& a, const Eigen::ArrayXd& b) {
  const Eigen::ArrayXd ca = a - a.mean();
  const Eigen::ArrayXd cb = b - b.mean();
  return (ca * cb).sum() / std::sqrt(ca.square().sum() * cb.square().sum());
}

}  // namespace

TEST_CASE("bandpass keeps an in-band sinusoid") {
  const Waveform w = testutil::sine_wave(1.0, 30.0, 10.0);
  const Waveform out = bandpass(w, hr_band());
  CHECK(out.size() == w.size());
  CHECK(out.fs == w.fs);
  CHECK(std::abs(out.samples.mean()) < 1e-9);
  CHECK(corr(out.samples, w.samples) > 0.999);
}

TEST_CASE("bandpass rejects sub-band drift") {
  // One whole drift cycle so its energy sits on an exact sub-band bin.
  const double amplitude = 3.0;
  const Waveform w = testutil::sine_wave(0.01, 30.0, 100.0, amplitude);
  const Waveform out = bandpass(w, hr_band());
  CHECK((out.samples.abs() < 1e-6 * amplitude).all());
}

TEST_CASE("bandpass of zeros is zeros") {
  const Waveform w{Eigen::ArrayXd::Zero(300), 30.0};
  const Waveform out = bandpass(w, hr_band());
  CHECK((out.samples.abs() < 1e-15).all());
}

TEST_CASE("bandpass handles odd-length input") {
  Waveform w = testutil::sine_wave(1.0, 30.0, 10.0);
  w.samples.conservativeResize(299);
  const Waveform out = bandpass(w, hr_band());
  CHECK(out.size() == 299);
  CHECK(std::abs(out.samples.mean()) < 1e-9);
  CHECK(corr(out.samples, w.samples.head(299)) > 0.99);
}

TEST_CASE("bandpass rejects bands reaching Nyquist") {
  const Waveform w = testutil::sine_wave(1.0, 30.0, 10.0);
  CHECK_THROWS_AS(bandpass(w, FrequencyBand{1.0, 15.0}), BandAboveNyquist);
}

TEST_CASE("rate examples") {
  SUBCASE("1 Hz tone is 60 bpm") {
    const Waveform w = testutil::sine_wave(1.0, 30.0, 10.0);
    CHECK(std::abs(rate_from_waveform(w, hr_band()) - 60.0) <= 0.5);
  }
  SUBCASE("1.23 Hz tone is 73.8 bpm") {
    const Waveform w = testutil::sine_wave(1.23, 30.0, 10.0);
    const double rate = rate_from_waveform(w, hr_band());
    CHECK(std::abs(rate - 73.8) <= 0.5);
    // Independent dense-DFT oracle agrees.
    const double oracle =
        60.0 * testutil::dense_dft_peak_hz(w.samples, 30.0, 0.667, 4.0, 1e-4);
    CHECK(std::abs(rate - oracle) <= 0.1);
  }
  SUBCASE("0.3 Hz tone in the RR band is 18 bpm") {
    const Waveform w = testutil::sine_wave(0.3, 30.0, 20.0);
    CHECK(std::abs(rate_from_waveform(w, rr_band()) - 18.0) <= 0.5);
  }
}

TEST_CASE("rate is invariant to amplitude scaling") {
  const Waveform w = testutil::sine_wave(1.37, 30.0, 10.0, 0.8, 0.4);
  const double base = rate_from_waveform(w, hr_band());
  for (const double alpha : {2.0, 0.5, 1024.0}) {
    Waveform scaled = w;
    scaled.samples *= alpha;
    CHECK(rate_from_waveform(scaled, hr_band()) == base);
  }
  for (const double alpha : {3.0, 0.7}) {
    Waveform scaled = w;
    scaled.samples *= alpha;
    CHECK(std::abs(rate_from_waveform(scaled, hr_band()) - base) < 1e-9);
  }
}

TEST_CASE("rate is stable under circular shifts of a periodic input") {
  // 12 whole periods in 10 s.
  const Waveform w = testutil::sine_wave(1.2, 30.0, 10.0);
  const double base = rate_from_waveform(w, hr_band());
  for (const Eigen::Index shift : {7, 55, 150, 233}) {
    Waveform shifted = w;
    const Eigen::Index n = w.size();
    for (Eigen::Index i = 0; i < n; ++i) {
      shifted.samples[i] = w.samples[(i + shift) % n];
    }
    CHECK(std::abs(rate_from_waveform(shifted, hr_band()) - base) < 0.5);
  }
}

TEST_CASE("100 random in-band tones are recovered within 0.5 bpm") {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> freq(0.75, 3.8);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  for (int i = 0; i < 100; ++i) {
    const double f = freq(rng);
    const Waveform w = testutil::sine_wave(f, 30.0, 10.0, 1.0, phase(rng));
    CHECK(std::abs(rate_from_waveform(w, hr_band()) - 60.0 * f) <= 0.5);
  }
}

TEST_CASE("the stronger of two well-separated tones wins") {
  std::mt19937_64 rng(1618);
  std::uniform_real_distribution<double> freq(0.8, 3.6);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> weak_amp(0.05, 1.0 / 3.0);
  int tested = 0;
  while (tested < 20) {
    const double f1 = freq(rng);
    const double f2 = freq(rng);
    // Amplitude ratio >= 3:1; keep the tones more than one main lobe apart.
    if (std::abs(f1 - f2) < 0.3) continue;
    ++tested;
    Waveform w = testutil::sine_wave(f1, 30.0, 10.0, 1.0, phase(rng));
    const Waveform weak = testutil::sine_wave(f2, 30.0, 10.0, weak_amp(rng), phase(rng));
    w.samples += weak.samples;
    CHECK(std::abs(rate_from_waveform(w, hr_band()) - 60.0 * f1) <= 0.5);
  }
}

TEST_CASE("empty band and flat signal raise the named errors") {
  const Waveform w = testutil::sine_wave(1.0, 30.0, 10.0);
  CHECK_THROWS_AS(rate_from_waveform(w, FrequencyBand{0.0001, 0.002}), EmptyBand);

  const Waveform flat{Eigen::ArrayXd::Constant(300, 5.0), 30.0};
  CHECK_THROWS_AS(rate_from_waveform(flat, hr_band()), FlatSignal);
  const Waveform zeros{Eigen::ArrayXd::Zero(300), 30.0};
  CHECK_THROWS_AS(rate_from_waveform(zeros, hr_band()), FlatSignal);
}

TEST_CASE("band validation") {
  const Waveform w = testutil::sine_wave(1.0, 30.0, 10.0);
  CHECK_THROWS_AS(rate_from_waveform(w, FrequencyBand{0.0, 4.0}), InvariantViolation);
  CHECK_THROWS_AS(rate_from_waveform(w, FrequencyBand{2.0, 1.0}), InvariantViolation);
}
