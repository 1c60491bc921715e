#pragma once

#include <Eigen/Dense>

#include "rppg/waveform.hpp"

namespace rppg {

// Population standard deviation (zero for empty input).
double pop_std(const Eigen::ArrayXd& x);

// (x - mean) / pop_std; all zeros when the input is constant.
Eigen::ArrayXd standardize(const Eigen::ArrayXd& x);

// Periodic Hann window of length n.
Eigen::ArrayXd hann_window(Eigen::Index n);

// Magnitude spectrum of the mean-removed, peak-normalized, Hann-windowed
// signal, zero-padded so the bin spacing is at most max_bin_hz.
struct Spectrum {
  double bin_hz = 0.0;
  Eigen::ArrayXd magnitude;  // bins 0 .. nfft/2

  Eigen::Index size() const { return magnitude.size(); }
  double freq(Eigen::Index k) const { return static_cast<double>(k) * bin_hz; }
};

Spectrum analysis_spectrum(const Waveform& w, double max_bin_hz = 0.5 / 60.0);

}  // namespace rppg
