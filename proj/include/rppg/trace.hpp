#pragma once

#include <Eigen/Dense>

#include "rppg/chunk.hpp"
#include "rppg/waveform.hpp"

namespace rppg {

// Per-frame mean channel intensity over the face box, 0-255 scale.
struct RgbTrace {
  Eigen::ArrayXd r;
  Eigen::ArrayXd g;
  Eigen::ArrayXd b;
  double fs = 0.0;  // Hz

  Eigen::Index size() const { return r.size(); }
};

// Spatial mean of each channel inside face_box[t], per frame.
RgbTrace extract_trace(const VideoChunk& chunk);

// Per-frame mean BT.601 luma (0.299 R + 0.587 G + 0.114 B) over the face box.
Waveform luma_series(const VideoChunk& chunk);

// clamp(pop_std(luma) / 127.5, 0, 1).
double illuminance_variation(const Waveform& luma);

// Mean per-frame landmark displacement, normalized per frame by the face box
// diagonal, scaled to a 30 fps time base, clamped to [0, 1].
double movement_score(const VideoChunk& chunk);

}  // namespace rppg
