#pragma once

#include <Eigen/Dense>

namespace rppg {

// Uniformly sampled scalar signal (pulse, respiration, luma, ...).
struct Waveform {
  Eigen::ArrayXd samples;
  double fs = 0.0;  // sampling rate in Hz

  Eigen::Index size() const { return samples.size(); }
  double duration_s() const {
    return fs > 0.0 ? static_cast<double>(samples.size()) / fs : 0.0;
  }
};

// Throws InvariantViolation unless the waveform has at least 2 finite
// samples and a positive sampling rate.
void validate_waveform(const Waveform& w, const char* name);

}  // namespace rppg
