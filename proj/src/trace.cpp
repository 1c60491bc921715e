#include "rppg/trace.hpp"

#include <algorithm>
#include <sstream>

#include "rppg/dsp.hpp"
#include "rppg/errors.hpp"

namespace rppg {

namespace {

// Sums a per-pixel functor over the face box of frame t.
template <typename Fn>
void for_each_box_pixel(const VideoChunk& chunk, Eigen::Index t, Fn&& fn) {
  const FaceBox& b = chunk.face_boxes[static_cast<std::size_t>(t)];
  const std::uint8_t* f = chunk.frame(t);
  for (int y = b.y; y < b.y + b.height; ++y) {
    const std::uint8_t* px =
        f + (static_cast<std::size_t>(y) * chunk.width + b.x) * 3;
    for (int x = 0; x < b.width; ++x) {
      fn(px[0], px[1], px[2]);
      px += 3;
    }
  }
}

void check_boxes(const VideoChunk& chunk) {
  const Eigen::Index n = chunk.frame_count();
  if (chunk.face_boxes.size() != static_cast<std::size_t>(n)) {
    throw InvariantViolation("chunk must carry one face box per frame");
  }
  for (Eigen::Index t = 0; t < n; ++t) {
    const FaceBox& b = chunk.face_boxes[static_cast<std::size_t>(t)];
    if (b.width <= 0 || b.height <= 0) {
      std::ostringstream os;
      os << "face box has zero pixels at frame " << t;
      throw EmptyRoi(os.str());
    }
  }
}

}  // namespace

RgbTrace extract_trace(const VideoChunk& chunk) {
  check_boxes(chunk);
  const Eigen::Index n = chunk.frame_count();
  RgbTrace tr;
  tr.fs = chunk.fps;
  tr.r.resize(n);
  tr.g.resize(n);
  tr.b.resize(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    double sr = 0.0, sg = 0.0, sb = 0.0;
    for_each_box_pixel(chunk, t, [&](std::uint8_t r, std::uint8_t g, std::uint8_t b) {
      sr += r;
      sg += g;
      sb += b;
    });
    const FaceBox& b = chunk.face_boxes[static_cast<std::size_t>(t)];
    const double count = static_cast<double>(b.width) * b.height;
    tr.r[t] = sr / count;
    tr.g[t] = sg / count;
    tr.b[t] = sb / count;
  }
  return tr;
}

Waveform luma_series(const VideoChunk& chunk) {
  check_boxes(chunk);
  const Eigen::Index n = chunk.frame_count();
  Eigen::ArrayXd luma(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    double sum = 0.0;
    for_each_box_pixel(chunk, t, [&](std::uint8_t r, std::uint8_t g, std::uint8_t b) {
      sum += 0.299 * r + 0.587 * g + 0.114 * b;
    });
    const FaceBox& b = chunk.face_boxes[static_cast<std::size_t>(t)];
    luma[t] = sum / (static_cast<double>(b.width) * b.height);
  }
  return {std::move(luma), chunk.fps};
}

double illuminance_variation(const Waveform& luma) {
  if (luma.size() == 0) return 0.0;
  return std::clamp(pop_std(luma.samples) / 127.5, 0.0, 1.0);
}

double movement_score(const VideoChunk& chunk) {
  if (!chunk.has_landmarks()) {
    throw NoLandmarks("movement_score requires landmarks for every frame");
  }
  const Eigen::Index n = chunk.frame_count();
  if (chunk.landmarks.size() != static_cast<std::size_t>(n) || n < 2) {
    throw InvariantViolation("movement_score requires landmarks for every frame");
  }
  check_boxes(chunk);

  double total = 0.0;
  for (Eigen::Index t = 1; t < n; ++t) {
    const auto& prev = chunk.landmarks[static_cast<std::size_t>(t - 1)];
    const auto& cur = chunk.landmarks[static_cast<std::size_t>(t)];
    double disp = 0.0;
    for (Eigen::Index k = 0; k < cur.rows(); ++k) {
      disp += (cur.row(k) - prev.row(k)).norm();
    }
    disp /= static_cast<double>(cur.rows());
    total += disp / chunk.face_boxes[static_cast<std::size_t>(t)].diagonal();
  }
  const double score = total / static_cast<double>(n - 1) * (30.0 / chunk.fps);
  return std::clamp(score, 0.0, 1.0);
}

}  // namespace rppg
