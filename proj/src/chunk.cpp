#include "rppg/chunk.hpp"

#include <cmath>
#include <sstream>

#include "rppg/errors.hpp"

namespace rppg {

namespace {

[[noreturn]] void fail(const std::string& invariant) {
  throw InvariantViolation(invariant);
}

}  // namespace

double FaceBox::diagonal() const {
  return std::sqrt(static_cast<double>(width) * width +
                   static_cast<double>(height) * height);
}

Eigen::Index VideoChunk::frame_count() const {
  const std::size_t frame_bytes =
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3;
  if (frame_bytes == 0) return 0;
  return static_cast<Eigen::Index>(pixels.size() / frame_bytes);
}

const std::uint8_t* VideoChunk::frame(Eigen::Index t) const {
  const std::size_t frame_bytes =
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3;
  return pixels.data() + static_cast<std::size_t>(t) * frame_bytes;
}

double VideoChunk::duration_s() const {
  return fps > 0.0 ? static_cast<double>(frame_count()) / fps : 0.0;
}

std::vector<std::string> validate_chunk(const VideoChunk& c) {
  std::vector<std::string> warnings;

  if (c.width <= 0 || c.height <= 0) fail("frame dimensions must be positive");
  if (!(c.fps > 0.0) || !std::isfinite(c.fps)) fail("fps must be a positive real");

  const std::size_t frame_bytes =
      static_cast<std::size_t>(c.width) * static_cast<std::size_t>(c.height) * 3;
  if (c.pixels.size() % frame_bytes != 0) {
    fail("pixel buffer must hold a whole number of frames");
  }
  const Eigen::Index n = c.frame_count();
  if (n < 2) fail("chunk must contain at least 2 frames");

  if (c.face_boxes.size() != static_cast<std::size_t>(n)) {
    fail("chunk must carry one face box per frame");
  }
  for (const FaceBox& b : c.face_boxes) {
    if (b.width <= 0 || b.height <= 0) fail("face box must have positive area");
    if (b.x < 0 || b.y < 0 || b.x + b.width > c.width || b.y + b.height > c.height) {
      fail("face box must lie within image bounds");
    }
  }

  if (!c.landmarks.empty()) {
    if (c.landmarks.size() != static_cast<std::size_t>(n)) {
      fail("landmarks must cover every frame");
    }
    const Eigen::Index k = c.landmarks.front().rows();
    if (k < 1) fail("landmark frames must contain at least one point");
    for (const auto& lm : c.landmarks) {
      if (lm.rows() != k) fail("every frame must have the same number of landmarks");
    }
  }

  validate_waveform(c.labels.pulse_wave, "labels.pulse_wave");
  validate_waveform(c.labels.resp_wave, "labels.resp_wave");
  if (c.labels.pulse_wave.size() != n || c.labels.resp_wave.size() != n) {
    fail("label waveforms must cover the chunk's full time span");
  }
  if (c.labels.pulse_wave.fs != c.fps || c.labels.resp_wave.fs != c.fps) {
    fail("label waveforms must share the video time base");
  }
  if (!(c.labels.hr_bpm >= 35.0 && c.labels.hr_bpm <= 240.0)) {
    fail("hr_bpm must lie within [35, 240]");
  }
  if (!(c.labels.rr_bpm >= 4.0 && c.labels.rr_bpm <= 45.0)) {
    fail("rr_bpm must lie within [4, 45]");
  }

  if (c.metadata.age < 0) fail("age must be non-negative");
  if (c.metadata.skin_type < 1 || c.metadata.skin_type > 6) {
    fail("skin_type must be in 1..6");
  }
  if (!(c.metadata.movement >= 0.0 && c.metadata.movement <= 1.0)) {
    fail("movement must be clamped to [0, 1]");
  }
  if (!(c.metadata.illuminance_var >= 0.0 && c.metadata.illuminance_var <= 1.0)) {
    fail("illuminance_var must be clamped to [0, 1]");
  }

  const double dur = c.duration_s();
  if (dur < 5.0 || dur > 20.0) {
    std::ostringstream os;
    os << "duration " << dur << " s outside the expected [5, 20] s range";
    warnings.push_back(os.str());
  }
  return warnings;
}

}  // namespace rppg
