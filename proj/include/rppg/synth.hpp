#pragma once

#include <cstdint>

#include "rppg/chunk.hpp"

namespace rppg {

// Synthetic chunk description. The pulse modulates each channel
// multiplicatively with relative strengths (0.33, 0.77, 0.53)/0.77 (green
// strongest); a slow 0.05 Hz drift modulates overall intensity; Gaussian
// noise is drawn once per pixel per frame and added to all three channels
// before 8-bit quantization.
struct SynthSpec {
  double duration_s = 10.0;
  double fps = 30.0;
  int width = 64;
  int height = 64;
  double base_r = 200.0;  // skin base color, 0-255
  double base_g = 160.0;
  double base_b = 140.0;
  double hr_bpm = 72.0;
  double rr_bpm = 15.0;
  double pulse_amplitude = 0.01;     // fractional modulation, <= 0.1
  double resp_motion_px = 2.0;       // vertical landmark oscillation
  double illum_drift_amplitude = 0.0;  // fractional
  double pixel_noise_sd = 0.0;       // 8-bit units
  std::uint64_t seed = 0;
};

// Throws SpecInvalid when a field is out of range.
void validate_spec(const SynthSpec& spec);

// Deterministic per seed: same spec, same bytes.
VideoChunk generate(const SynthSpec& spec);

}  // namespace rppg
