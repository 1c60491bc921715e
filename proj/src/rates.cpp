#include "rppg/rates.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <iostream>
#include <sstream>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "rppg/dsp.hpp"
#include "rppg/errors.hpp"

namespace rppg {

namespace {

void check_band(const FrequencyBand& band) {
  if (!(band.lo_hz > 0.0) || !(band.hi_hz > band.lo_hz)) {
    throw InvariantViolation("frequency band requires 0 < lo < hi");
  }
}

}  // namespace

FrequencyBand hr_band() { return {0.667, 4.0}; }
FrequencyBand rr_band() { return {0.067, 0.75}; }

Waveform bandpass(const Waveform& w, const FrequencyBand& band) {
  validate_waveform(w, "bandpass input");
  check_band(band);
  if (band.hi_hz >= w.fs / 2.0) {
    std::ostringstream os;
    os << "band upper edge " << band.hi_hz << " Hz reaches the Nyquist frequency "
       << w.fs / 2.0 << " Hz";
    throw BandAboveNyquist(os.str());
  }

  const Eigen::Index n = w.size();
  std::vector<double> time(w.samples.data(), w.samples.data() + n);
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> bins;
  fft.fwd(bins, time);

  for (Eigen::Index k = 0; k <= n / 2; ++k) {
    const double f = static_cast<double>(k) * w.fs / static_cast<double>(n);
    if (f < band.lo_hz || f > band.hi_hz) {
      bins[static_cast<std::size_t>(k)] = 0.0;
      if (k > 0 && n - k != k) bins[static_cast<std::size_t>(n - k)] = 0.0;
    }
  }

  std::vector<std::complex<double>> back;
  fft.inv(back, bins);
  Waveform out;
  out.fs = w.fs;
  out.samples.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.samples[i] = back[static_cast<std::size_t>(i)].real();
  }
  return out;
}

double rate_from_waveform(const Waveform& w, const FrequencyBand& band) {
  validate_waveform(w, "rate_from_waveform input");
  check_band(band);
  if (w.duration_s() < 5.0) {
    std::cerr << "rate_from_waveform: input shorter than 5 s; spectral resolution is coarse\n";
  }

  const Spectrum sp = analysis_spectrum(w);
  const Eigen::Index last = sp.size() - 1;
  Eigen::Index klo = static_cast<Eigen::Index>(std::ceil(band.lo_hz / sp.bin_hz));
  Eigen::Index khi = static_cast<Eigen::Index>(std::floor(band.hi_hz / sp.bin_hz));
  klo = std::max<Eigen::Index>(klo, 0);
  khi = std::min(khi, last);
  if (klo > khi) {
    throw EmptyBand("no spectral bins fall inside the band");
  }

  Eigen::Index best = klo;
  for (Eigen::Index k = klo + 1; k <= khi; ++k) {
    if (sp.magnitude[k] > sp.magnitude[best]) best = k;
  }
  if (sp.magnitude[best] == 0.0) {
    throw FlatSignal("spectrum is zero everywhere inside the band");
  }

  double delta = 0.0;
  if (best > 0 && best < last) {
    const double a = sp.magnitude[best - 1];
    const double b = sp.magnitude[best];
    const double c = sp.magnitude[best + 1];
    const double den = a - 2.0 * b + c;
    if (den != 0.0) {
      delta = std::clamp(0.5 * (a - c) / den, -0.5, 0.5);
    }
  }
  return 60.0 * (static_cast<double>(best) + delta) * sp.bin_hz;
}

}  // namespace rppg
