#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rppg/waveform.hpp"

namespace rppg {

// Axis-aligned face rectangle in pixel coordinates.
struct FaceBox {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  double diagonal() const;
  bool operator==(const FaceBox&) const = default;
};

struct ChunkMetadata {
  int age = 0;
  bool gender_male = false;
  int skin_type = 1;  // Fitzpatrick scale, 1..6
  double movement = 0.0;         // [0,1]
  double illuminance_var = 0.0;  // [0,1]
  bool camera_stationary = true;
};

struct VitalsLabel {
  Waveform pulse_wave;  // gold-standard PPG at the video rate
  Waveform resp_wave;   // gold-standard respiration at the video rate
  double hr_bpm = 0.0;
  double rr_bpm = 0.0;
};

// A 5-20 s segment of video with synchronized labels; the unit of evaluation.
// Chunks are plain values: loading is pure per path and loaded chunks are
// immutable, so they can be shared freely across threads.
struct VideoChunk {
  int width = 0;
  int height = 0;
  double fps = 0.0;
  std::vector<std::uint8_t> pixels;  // frame-major, row-major, interleaved RGB
  std::vector<FaceBox> face_boxes;   // one per frame
  std::vector<Eigen::MatrixX2d> landmarks;  // optional; K rows of (x, y) per frame
  VitalsLabel labels;
  ChunkMetadata metadata;

  Eigen::Index frame_count() const;
  const std::uint8_t* frame(Eigen::Index t) const;
  bool has_landmarks() const { return !landmarks.empty(); }
  double duration_s() const;
};

// Checks every chunk invariant; throws InvariantViolation naming the first
// violated one. Returns soft warnings (duration outside [5, 20] s).
std::vector<std::string> validate_chunk(const VideoChunk& chunk);

}  // namespace rppg
