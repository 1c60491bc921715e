#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rppg/chunk.hpp"

namespace rppg {

// On-disk chunk layout:
//   meta.json     fps, width, height, frame_count, age, gender_male,
//                 skin_type, movement, illuminance_var, camera_stationary,
//                 hr_bpm, rr_bpm (+ face_boxes when not full-frame)
//   frames.rgb24  frame_count * height * width * 3 bytes, frame-major,
//                 row-major, interleaved R,G,B
//   labels.csv    frame,ppg,resp
//   landmarks.csv frame,point,x,y (optional)
VideoChunk load_chunk(const std::filesystem::path& dir,
                      std::vector<std::string>* warnings = nullptr);

void save_chunk(const VideoChunk& chunk, const std::filesystem::path& dir);

}  // namespace rppg
