#pragma once

#include "rppg/waveform.hpp"

namespace rppg {

struct FrequencyBand {
  double lo_hz = 0.0;
  double hi_hz = 0.0;
};

// Default passbands: 40-240 bpm for pulse, 4-45 bpm for respiration.
FrequencyBand hr_band();  // [0.667, 4.0] Hz
FrequencyBand rr_band();  // [0.067, 0.75] Hz

// Frequency-domain mask filter: zero every FFT bin strictly outside
// [lo, hi] (including DC) and invert. Length and fs are preserved.
Waveform bandpass(const Waveform& w, const FrequencyBand& band);

// Spectral-peak rate in bpm: argmax of the zero-padded Hann periodogram
// inside the band, refined by parabolic interpolation over the peak bin and
// its two neighbors. Ties resolve to the lowest-frequency bin.
double rate_from_waveform(const Waveform& w, const FrequencyBand& band);

}  // namespace rppg
